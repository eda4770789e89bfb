#pragma once

#include <vector>

#include "qsrc/grid.hpp"
#include "qsrc/greens.hpp"
#include "qsrc/propagators.hpp"
#include "qsrc/sources.hpp"
#include "qsrc/vec3.hpp"

namespace qsrc::observables {

// Probability current samples on a grid.  divergence_residual holds div j
// (the residual of the source-free continuity equation); both it and j are
// only meaningful where valid[i] != 0 (a stencil margin inside the boundary).
struct CurrentField {
    GridGeometry geom;
    std::vector<Vec3> j;
    std::vector<double> divergence_residual;
    std::vector<uint8_t> valid;
};

// j = (1/m) Im[psi* grad psi] - (q A / m) |psi|^2 with A = (1/2) B x r.
// Derivatives are 4th-order central differences; throws when the grid is too
// coarse (2nd- vs 4th-order mismatch above 5%) or smaller than the stencil.
CurrentField current_density(const sources::WaveGrid& w,
                             const propagators::FieldConfig& field);

// div j + 2 Im[sigma* psi] pointwise (hbar = 1); zero where invalid.
std::vector<double> continuity_residual(const sources::WaveGrid& w,
                                        const CurrentField& c,
                                        const sources::SourceSpec& s);

struct TotalCurrentOptions {
    double eta = 1e-3;   // broadening for magnetic coincidence sums
    double tol = 1e-6;
};

// J(E) = -2 Im[ int int sigma* G sigma ]  (hbar = 1).  Point sources use the
// finite coincidence imaginary part; Gaussian sources run the bilinear
// quadrature (radial reduction in free space, mean/relative splitting with a
// spherical inner integral in a uniform field).
double total_current(const sources::SourceSpec& s,
                     const propagators::FieldConfig& field,
                     const TotalCurrentOptions& opt = {});

struct SphereSpec {
    Vec3 center{};
    double radius = 1;
};

struct PlaneSpec {
    Vec3 origin{};   // rectangle corner
    Vec3 edge_u{};   // full edge vectors; normal is unit(edge_u x edge_v)
    Vec3 edge_v{};
};

// Quadrature of j . n over the surface, sampling j by tricubic interpolation
// of the grid.  The angular (sphere) or tensor (plane) order doubles until
// the flux changes by less than 1e-5 relative.  Throws if the surface leaves
// the valid region of the grid.
double flux_through_surface(const CurrentField& c, const SphereSpec& sphere);
double flux_through_surface(const CurrentField& c, const PlaneSpec& plane);

struct Spectrum {
    std::vector<double> energies;
    std::vector<double> values;
    double eta = 0;
};

// Local density of states n(r; E) = -(1/pi) Im G(r, r; E) over an energy
// sweep.  energies must be strictly increasing.
Spectrum dos(const Vec3& r, const std::vector<double>& energies,
             const propagators::FieldConfig& field, double eta);

} // namespace qsrc::observables
