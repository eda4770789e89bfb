#include "qsrc/propagators.hpp"

#include <cmath>

namespace qsrc::propagators {

namespace detail {

namespace {
const Complex kI{0.0, 1.0};
// e^{-3 pi i/4} and e^{-pi i/4}: branch constants for (1/i)^{3/2}, (1/i)^{1/2}
const Complex kBranch32 = std::polar(1.0, -3.0 * M_PI / 4.0);
const Complex kBranch12 = std::polar(1.0, -M_PI / 4.0);
} // namespace

Complex k_free_ct(const Vec3& r, const Vec3& rp, Complex t, double mass) {
    const double d2 = (r - rp).norm2();
    Complex w = std::pow(mass / (2.0 * M_PI) / t, 1.5) * kBranch32;
    return w * std::exp(kI * (mass * d2) / (2.0 * t));
}

Complex k_field_ct(const Vec3& r, const Vec3& rp, Complex t, const FieldConfig& f) {
    Complex base = k_free_ct(r, rp, t, f.mass);
    const double fr = f.force.dot(r + rp);
    const double f2 = f.force.norm2();
    return base * std::exp(kI * (0.5 * fr * t - f2 * t * t * t / (24.0 * f.mass)));
}

Complex k_landau_ct(const Vec3& r, const Vec3& rp, Complex t, const FieldConfig& f) {
    const double m = f.mass;
    const double omega = f.signed_omega();
    const double fz = f.force.z;

    // longitudinal: 1D free kernel with the linear-field phase
    const double dz = r.z - rp.z;
    Complex kz = std::sqrt(m / (2.0 * M_PI)) * kBranch12 / std::sqrt(t);
    kz *= std::exp(kI * (m * dz * dz / (2.0 * t) + 0.5 * fz * (r.z + rp.z) * t -
                         fz * fz * t * t * t / (24.0 * m)));

    // transverse: symmetric-gauge magnetic kernel
    const double dx = r.x - rp.x, dy = r.y - rp.y;
    const double dp2 = dx * dx + dy * dy;
    const double cross = rp.x * r.y - rp.y * r.x;  // x' y - y' x
    Complex kperp;
    Complex wt = omega * t;
    if (std::abs(wt) < 1e-3) {
        // small-omega expansion of the prefactor and cot term
        Complex w2t2 = wt * wt;
        Complex pref = m / (2.0 * M_PI * t) * (1.0 + w2t2 / 24.0 + 7.0 * w2t2 * w2t2 / 5760.0);
        Complex cotq = m * dp2 * (kI / (2.0 * t)) -
                       kI * m * omega * omega * t * dp2 / 24.0 -
                       kI * m * omega * omega * omega * omega * t * t * t * dp2 / 1440.0;
        kperp = (pref / kI) * std::exp(cotq + kI * (0.5 * m * omega * cross));
    } else {
        Complex s = std::sin(0.5 * wt);
        Complex pref = m * omega / (4.0 * M_PI * kI * s);
        Complex cotv = std::cos(0.5 * wt) / s;
        kperp = pref * std::exp(kI * (0.25 * m * omega) * (cotv * dp2 + 2.0 * cross));
    }
    return kperp * kz;
}

} // namespace detail

Complex k_free(const Vec3& r, const Vec3& rp, double t, double mass) {
    if (!(t > 0)) throw std::invalid_argument("k_free: elapsed time must be > 0");
    return detail::k_free_ct(r, rp, Complex(t, 0.0), mass);
}

Complex k_field(const Vec3& r, const Vec3& rp, double t, const FieldConfig& f) {
    if (!(t > 0)) throw std::invalid_argument("k_field: elapsed time must be > 0");
    f.validate();
    return detail::k_field_ct(r, rp, Complex(t, 0.0), f);
}

Complex k_landau_field(const Vec3& r, const Vec3& rp, double t, const FieldConfig& f) {
    if (!(t > 0)) throw std::invalid_argument("k_landau_field: elapsed time must be > 0");
    f.validate();
    if (f.has_magnetic() &&
        std::hypot(f.force.x, f.force.y) > 1e-12 * (std::abs(f.force.z) + 1.0))
        throw std::invalid_argument(
            "k_landau_field: force must be parallel to the magnetic field");
    const double omega = f.cyclotron_frequency();
    if (omega > 0) {
        const double period = 2.0 * M_PI / omega;
        const double n = std::round(t / period);
        if (n >= 1 && std::abs(t - n * period) < 1e-9)
            throw CausticError("k_landau_field: T within 1e-9 of a cyclotron caustic");
    }
    return detail::k_landau_ct(r, rp, Complex(t, 0.0), f);
}

} // namespace qsrc::propagators
