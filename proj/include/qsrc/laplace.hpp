#pragma once

#include <complex>
#include <functional>

#include "qsrc/vec3.hpp"

namespace qsrc::greens {

enum class Scheme { contour, partial_oscillation };

struct LaplaceResult {
    Complex value{};
    double est_error = 0;
    bool converged = false;
};

// Shape of the integrand phase  phi(T) = b T + a/T - c3 T^3  (plus magnetic
// trig factors handled by dodging below the real axis).
struct PhaseShape {
    double a = 0;      // m d^2 / 2, must be > 0
    double b = 0;      // E + F.(r+r')/2
    double c3 = 0;     // |F|^2 / (24 m)
    double omega = 0;  // cyclotron frequency, 0 without magnetic field
    double tol = 1e-8;
};

using KernelCT = std::function<Complex(Complex)>;

// G = -i int_0^inf dT K(T) exp((iE - eta) T).
//
// contour: T in [0, T_m] is mapped to u = 1/T and swept up a vertical ray
// where exp(i a u) decays; the middle section runs along (or, with a magnetic
// field, slightly below) the real axis through the stationary points; the
// tail leaves on a decaying ray.  Works at eta = 0 except for magnetic
// kernels, which need eta > 0.
//
// partial_oscillation: real-axis only; both end regions are summed as a
// series of sub-period panels accelerated with Wynn's epsilon algorithm.
LaplaceResult laplace_transform(const KernelCT& kernel, double energy, double eta,
                                const PhaseShape& shape, Scheme scheme);

namespace detail {
// Wynn epsilon acceleration of a sequence of partial sums.  Returns the best
// even-column estimate and a stability-based error estimate.
std::pair<Complex, double> wynn_epsilon(const std::vector<Complex>& partial);
} // namespace detail

} // namespace qsrc::greens
