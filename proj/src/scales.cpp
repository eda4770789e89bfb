#include "qsrc/scales.hpp"

#include <cmath>

namespace qsrc::scales {

ScaleSystem make_scales(double mass_kg, double force_newton, double b_tesla,
                        const Constants& c) {
    if (!(mass_kg > 0))
        throw std::invalid_argument("make_scales: mass must be positive");
    if (force_newton < 0 || b_tesla < 0)
        throw std::invalid_argument("make_scales: field magnitudes must be >= 0");

    const bool have_f = force_newton > 0;
    const bool have_b = b_tesla > 0;
    if (!have_f && !have_b)
        throw std::invalid_argument(
            "make_scales: all fields zero and no explicit scales given");

    // Linear-potential triplet: beta = (hbar^2 / (2 m F))^{1/3}, eps = F beta.
    auto field_triplet = [&] {
        double beta = std::cbrt(c.hbar * c.hbar / (2.0 * mass_kg * force_newton));
        double eps = force_newton * beta;
        return ScaleSystem{beta, eps, c.hbar / eps, Derivation::field_units};
    };
    // Magnetic triplet: magnetic length and hbar * omega_c.
    auto cyclotron_triplet = [&] {
        double omega_c = c.elementary_charge * b_tesla / mass_kg;
        double l_b = std::sqrt(c.hbar / (c.elementary_charge * b_tesla));
        double eps = c.hbar * omega_c;
        return ScaleSystem{l_b, eps, c.hbar / eps, Derivation::cyclotron_units};
    };

    if (have_f && !have_b) return field_triplet();
    if (have_b && !have_f) return cyclotron_triplet();

    // Both present: whichever energy scale dominates wins.
    ScaleSystem f = field_triplet();
    ScaleSystem b = cyclotron_triplet();
    return f.energy > b.energy ? f : b;
}

ScaleSystem explicit_scales(double length_m, double energy_j, const Constants& c) {
    if (!(length_m > 0) || !(energy_j > 0))
        throw std::invalid_argument("explicit_scales: scales must be positive");
    return ScaleSystem{length_m, energy_j, c.hbar / energy_j,
                       Derivation::explicit_units};
}

namespace {
// Assembled as a single ratio so that to_physical(to_dimensionless(x)) is an
// exact round trip up to one multiply and one divide.
double unit_factor(const Dimension& d, const ScaleSystem& s) {
    double num = 1.0, den = 1.0;
    auto apply = [&](int exp, double scale) {
        for (int i = 0; i < std::abs(exp); ++i) (exp > 0 ? num : den) *= scale;
    };
    apply(d.length, s.length);
    apply(d.energy, s.energy);
    apply(d.time, s.time);
    return num / den;
}
} // namespace

double to_dimensionless(double value, const Dimension& d, const ScaleSystem& s) {
    return value / unit_factor(d, s);
}

double to_physical(double value, const Dimension& d, const ScaleSystem& s) {
    return value * unit_factor(d, s);
}

double dimensionless_b_field(double b_tesla, const ScaleSystem& s, const Constants& c) {
    return c.elementary_charge * b_tesla * s.time / s.mass_scale();
}

} // namespace qsrc::scales
