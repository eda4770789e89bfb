#pragma once

#include <span>
#include <vector>

#include "qsrc/grid.hpp"
#include "qsrc/greens.hpp"
#include "qsrc/propagators.hpp"
#include "qsrc/scales.hpp"
#include "qsrc/vec3.hpp"

namespace qsrc::sources {

enum class SourceKind { point, gaussian };

// Localized emitter.  The Gaussian profile is
//   sigma(r) = strength (2 pi a^2)^{-3/2} exp(-|r - r0|^2 / (2 a^2)),
// normalized so that int sigma = strength; a -> 0 recovers the point source
// with the same strength.
struct SourceSpec {
    SourceKind kind = SourceKind::point;
    Vec3 position{};
    Complex strength{1.0, 0.0};
    double width = 0;   // a >= 0; 0 iff point
    double energy = 0;

    void validate() const {
        if (std::abs(strength) == 0)
            throw std::invalid_argument("SourceSpec: strength must be nonzero");
        if ((kind == SourceKind::point) != (width == 0))
            throw std::invalid_argument("SourceSpec: width == 0 iff point");
        if (width < 0) throw std::invalid_argument("SourceSpec: width must be >= 0");
    }
};

// Pointwise source density.  Point sources are distributional: throws.
Complex sigma_eval(const SourceSpec& s, const Vec3& r);

struct WaveGrid {
    GridGeometry geom;
    std::vector<Complex> psi;
    double est_error = 0;              // worst relative per-sample estimate
    scales::ScaleSystem scale{};       // unit bookkeeping for I/O
};

struct ScatterOptions {
    double tol = 1e-6;
    int threads = 1;
    double standoff_spacings = 1.0;    // point-source exclusion radius, in spacings
};

// psi_sc(r) = int G(r, r'; E) sigma(r') d^3r'.  Point sources short-circuit to
// strength * G; Gaussian sources are convolved by quadrature over the source
// support (truncated at 6a, truncation checked against 8a).
Complex scatter_wave_at(const SourceSpec& s, const propagators::FieldConfig& field,
                        const Vec3& r, double* est_rel = nullptr,
                        double tol = 1e-6, bool check_truncation = true);

WaveGrid scatter_wave(const SourceSpec& s, const propagators::FieldConfig& field,
                      const GridGeometry& grid, const ScatterOptions& opt = {});

// Superposition of several sources at a common energy.
WaveGrid scatter_wave(std::span<const SourceSpec> sources,
                      const propagators::FieldConfig& field, const GridGeometry& grid,
                      const ScatterOptions& opt = {});

// Far-field replacement of a Gaussian source in a uniform force field by a
// point source displaced against the force, with the local kinetic energy at
// the displaced position reported as effective_energy = E - F a^4/(4 beta^3).
struct VirtualSource {
    SourceSpec point;
    double effective_energy = 0;
    Vec3 displacement{};       // from the Gaussian center to the virtual point
};

VirtualSource virtual_point_source(const SourceSpec& gaussian,
                                   const propagators::FieldConfig& field,
                                   double target_distance);

} // namespace qsrc::sources
