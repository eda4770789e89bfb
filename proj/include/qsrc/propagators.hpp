#pragma once

#include <complex>
#include <stdexcept>

#include "qsrc/vec3.hpp"

namespace qsrc::propagators {

enum class Gauge { symmetric };  // A = (1/2) B x r for every magnetic computation

// Uniform external fields, dimensionless (hbar = 1).  `force` already includes
// the charge for electric fields (or m*g for gravity); `charge_sign` only
// couples to the magnetic field.
struct FieldConfig {
    Vec3 force{};
    double b_field = 0;       // magnitude along +z, >= 0
    double charge_sign = 0;   // -1, 0, +1
    double mass = 1;
    Gauge gauge = Gauge::symmetric;

    // signed Larmor frequency omega = q B / m; zero for neutral particles
    double signed_omega() const { return charge_sign * b_field / mass; }
    double cyclotron_frequency() const { return std::abs(signed_omega()); }
    bool has_magnetic() const { return b_field > 0 && charge_sign != 0; }

    void validate() const {
        if (!(mass > 0)) throw std::invalid_argument("FieldConfig: mass must be > 0");
        if (b_field < 0) throw std::invalid_argument("FieldConfig: b_field must be >= 0");
    }
};

struct CausticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Free kernel (m/(2 pi i T))^{3/2} exp(i m |r-r'|^2 / (2T)).  Branch: principal,
// (-i)^{3/2} = e^{-3 pi i / 4}.  Throws std::invalid_argument for T <= 0.
Complex k_free(const Vec3& r, const Vec3& rp, double t, double mass = 1.0);

// Uniform-force kernel: free kernel times
//   exp( i F.(r+r') T / 2 - i |F|^2 T^3 / (24 m) ).
Complex k_field(const Vec3& r, const Vec3& rp, double t, const FieldConfig& f);

// Kernel for B || F || e_z: product of the symmetric-gauge 2D magnetic kernel
// (transverse) and the 1D linear-field kernel (longitudinal).  Throws
// CausticError when T is within 1e-9 of a multiple of the cyclotron period.
Complex k_landau_field(const Vec3& r, const Vec3& rp, double t, const FieldConfig& f);

namespace detail {

// Complex-time evaluations used by the Laplace quadrature.  The branch of the
// fractional powers continues from the real axis with Im T <= 0 allowed down
// to arg T > -pi (outgoing-wave prescription: T carries a small negative
// imaginary part).
Complex k_free_ct(const Vec3& r, const Vec3& rp, Complex t, double mass);
Complex k_field_ct(const Vec3& r, const Vec3& rp, Complex t, const FieldConfig& f);
Complex k_landau_ct(const Vec3& r, const Vec3& rp, Complex t, const FieldConfig& f);

} // namespace detail

} // namespace qsrc::propagators
