#pragma once

#include <complex>

#include "qsrc/laplace.hpp"
#include "qsrc/propagators.hpp"
#include "qsrc/vec3.hpp"

namespace qsrc::greens {

enum class Method { closed_form, laplace_quadrature, landau_sum, auto_select };

struct GreenRequest {
    Vec3 r{};
    Vec3 rp{};
    double energy = 0;
    double eta = 1e-3;                 // Eq.-4 regularization / broadening
    propagators::FieldConfig field{};
    Method method = Method::auto_select;
    Scheme scheme = Scheme::contour;
    bool extrapolate_eta = true;       // Richardson eta -> 0 for point values
    double tol = 1e-8;
};

struct GreenValue {
    Complex value{};
    Method method_used = Method::closed_form;
    double est_error = 0;
    bool converged = true;
};

// Free-space closed form -(m/2pi) e^{ikd}/d with k = sqrt(2mE) (E > 0) or the
// decaying branch k = i sqrt(2m|E|) (E < 0).  Throws on coincident points.
GreenValue g_free(const Vec3& r, const Vec3& rp, double energy, double mass = 1.0);

// Im G(r, r; E) for free space: -m k/(2 pi) for E > 0, else 0.
double g_free_coincidence_im(double energy, double mass = 1.0);

// Numerical Laplace transform of the applicable kernel.
GreenValue g_laplace(const GreenRequest& req);

// Uniform-field closed form (Airy/Ci).  Requires |force| > 0, no magnetic
// field; falls back to g_laplace (method_used flagged) when the scaled-Airy
// exponent arithmetic would overflow.
GreenValue g_field(const Vec3& r, const Vec3& rp, double energy,
                   const propagators::FieldConfig& field);

// Landau-level composition for B > 0.  Force parallel to B uses the 1D
// linear-potential Green function at shifted energies; perpendicular force
// uses the drift-frame (Landau-gauge) spectral integral rotated back to the
// symmetric gauge.  eta broadens the free longitudinal branches; the
// closed-form field branch is evaluated at the eta -> 0 limit.
GreenValue g_landau(const GreenRequest& req);

// Dispatch on method (auto_select picks closed forms where available,
// quadrature for off-diagonal magnetic points, landau_sum at coincidence).
GreenValue evaluate(const GreenRequest& req);

// Im G(r, r; E) for any supported field configuration (finite part; the
// divergent real part is never formed).  eta broadens magnetic spectra.
double coincidence_im(const Vec3& r, double energy,
                      const propagators::FieldConfig& field, double eta);

// 1D helpers (longitudinal factors of the Landau composition; exposed for
// their own oracle tests).
Complex g_1d_free(double dz, Complex energy, double mass);
Complex g_1d_field(double z, double zp, double energy, double force, double mass);

} // namespace qsrc::greens
