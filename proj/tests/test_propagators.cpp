#include "doctest.h"

#include <cmath>
#include <functional>
#include <vector>

#include "qsrc/propagators.hpp"

using namespace qsrc;
using namespace qsrc::propagators;

namespace {

// Classical path for B || F || e_z (signed omega), force f_z, linear dynamics.
// Returns position and velocity at time t given endpoints over [0, T].
struct ParallelPath {
    double omega, fz, m, T;
    Vec3 r0, r1;

    // transverse initial velocity from endpoint condition, complex rep zeta = x + i y
    Complex v0_perp() const {
        Complex dz{r1.x - r0.x, r1.y - r0.y};
        if (omega == 0.0) return dz / T;
        Complex iw{0.0, omega};
        return iw * dz / (1.0 - std::exp(-iw * T));
    }
    double v0_z() const { return (r1.z - r0.z - 0.5 * fz / m * T * T) / T; }

    void state(double t, Vec3& r, Vec3& v) const {
        Complex v0 = v0_perp();
        Complex iw{0.0, omega};
        Complex zeta{r0.x, r0.y};
        Complex vel;
        if (omega == 0.0) {
            zeta += v0 * t;
            vel = v0;
        } else {
            zeta += v0 * (1.0 - std::exp(-iw * t)) / iw;
            vel = v0 * std::exp(-iw * t);
        }
        double vz = v0_z() + fz / m * t;
        double z = r0.z + v0_z() * t + 0.5 * fz / m * t * t;
        r = {zeta.real(), zeta.imag(), z};
        v = {vel.real(), vel.imag(), vz};
    }

    // action of L = m v^2/2 + (m omega/2)(x vy - y vx) + f_z z, Simpson rule
    double action(int n = 4000) const {
        auto lagrangian = [&](double t) {
            Vec3 r, v;
            state(t, r, v);
            return 0.5 * m * v.norm2() + 0.5 * m * omega * (r.x * v.y - r.y * v.x) +
                   fz * r.z;
        };
        double h = T / n;
        double s = lagrangian(0.0) + lagrangian(T);
        for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * lagrangian(k * h);
        return s * h / 3.0;
    }
};

double action_of(double omega, double fz, double m, double T, Vec3 a, Vec3 b) {
    ParallelPath p{omega, fz, m, T, a, b};
    return p.action();
}

// Van Vleck oracle: K = (2 pi i)^{-3/2} sqrt(det(-d2S/dr dr')) e^{iS}.
// S is exactly quadratic in the endpoints (linear dynamics), so central
// differences with a moderate step are exact.
Complex van_vleck(double omega, double fz, double m, double T, Vec3 rp, Vec3 r) {
    const double h = 0.05;
    double d[3][3];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            auto shift = [](Vec3 v, int axis, double delta) {
                (axis == 0 ? v.x : axis == 1 ? v.y : v.z) += delta;
                return v;
            };
            double spp = action_of(omega, fz, m, T, shift(rp, j, h), shift(r, i, h));
            double spm = action_of(omega, fz, m, T, shift(rp, j, -h), shift(r, i, h));
            double smp = action_of(omega, fz, m, T, shift(rp, j, h), shift(r, i, -h));
            double smm = action_of(omega, fz, m, T, shift(rp, j, -h), shift(r, i, -h));
            d[i][j] = -(spp - spm - smp + smm) / (4.0 * h * h);
        }
    }
    double det = d[0][0] * (d[1][1] * d[2][2] - d[1][2] * d[2][1]) -
                 d[0][1] * (d[1][0] * d[2][2] - d[1][2] * d[2][0]) +
                 d[0][2] * (d[1][0] * d[2][1] - d[1][1] * d[2][0]);
    double s = action_of(omega, fz, m, T, rp, r);
    Complex pref = std::pow(2.0 * M_PI, -1.5) * std::polar(1.0, -3.0 * M_PI / 4.0);
    return pref * std::sqrt(det) * std::exp(Complex(0.0, s));
}

} // namespace

TEST_CASE("k_free coincidence at T = 2 pi") {
    Complex k = k_free({1, 2, 3}, {1, 2, 3}, 2.0 * M_PI);
    CHECK(k.real() == doctest::Approx(-0.002850659837673349279335).epsilon(1e-12));
    CHECK(k.imag() == doctest::Approx(-0.002850659837673349279335).epsilon(1e-12));
    CHECK(std::abs(k) == doctest::Approx(std::pow(4.0 * M_PI * M_PI, -1.5)).epsilon(1e-12));
}

TEST_CASE("k_free modulus depends only on T") {
    for (double t : {0.3, 1.0, 7.5}) {
        double want = std::pow(1.0 / (2.0 * M_PI * t), 1.5);
        CHECK(std::abs(k_free({0, 0, 0}, {0, 0, 0}, t)) == doctest::Approx(want).epsilon(1e-13));
        CHECK(std::abs(k_free({4, -2, 1}, {0, 0.5, 0}, t)) == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("k_free golden value") {
    // frozen from tests/oracles/kernel_goldens.py
    Complex k = k_free({0, 0, 1}, {0, 0, 0}, 1.0);
    CHECK(k.real() == doctest::Approx(-0.01787596849147153682222).epsilon(1e-12));
    CHECK(k.imag() == doctest::Approx(-0.06092529486708991691016).epsilon(1e-12));
}

TEST_CASE("k_field reduces to k_free at F = 0") {
    FieldConfig f;
    f.mass = 1.3;
    Vec3 r{0.4, -1.0, 2.0}, rp{0.1, 0.2, -0.3};
    CHECK(k_field(r, rp, 0.7, f) == k_free(r, rp, 0.7, 1.3));
}

TEST_CASE("k_field phase correction at z = z' = 0") {
    FieldConfig f;
    f.force = {0, 0, 2.0};
    Vec3 r{1.0, 0, 0}, rp{0, 0, 0};
    double t = 1.4;
    Complex ratio = k_field(r, rp, t, f) / k_free(r, rp, t, 1.0);
    double want = -f.force.z * f.force.z * t * t * t / 24.0;
    CHECK(std::arg(ratio) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("k_field golden value") {
    FieldConfig f;
    f.force = {0, 0, 1.0};
    Complex k = k_field({0, 0, 1}, {0, 0, 0}, 1.0, f);
    CHECK(k.real() == doctest::Approx(0.01092563406408617311489).epsilon(1e-12));
    CHECK(k.imag() == doctest::Approx(-0.06254656125197944085706).epsilon(1e-12));
}

TEST_CASE("k_field rejects T <= 0") {
    FieldConfig f;
    CHECK_THROWS_AS(k_field({1, 0, 0}, {0, 0, 0}, 0.0, f), std::invalid_argument);
    CHECK_THROWS_AS(k_free({1, 0, 0}, {0, 0, 0}, -1.0), std::invalid_argument);
}

TEST_CASE("k_landau_field limits") {
    Vec3 r{0.3, -0.4, 1.0}, rp{0.1, 0.0, 0.2};
    FieldConfig f;
    f.force = {0, 0, 1.0};
    f.charge_sign = 1.0;

    SUBCASE("B -> 0 equals k_field") {
        f.b_field = 1e-7;
        Complex a = k_landau_field(r, rp, 1.0, f);
        Complex b = k_field(r, rp, 1.0, f);
        CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
    }
    SUBCASE("all fields -> 0 equals k_free") {
        f.b_field = 0;
        f.force = {0, 0, 0};
        Complex a = k_landau_field(r, rp, 1.0, f);
        Complex b = k_free(r, rp, 1.0, 1.0);
        CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
        Complex c = k_field(r, rp, 1.0, f);
        CHECK(std::abs(c - b) <= 1e-10 * std::abs(b));
    }
    SUBCASE("transverse factor at coincident transverse points vs 2D free") {
        // on-axis: K must equal [m omega/(4 pi i sin(omega T/2))] * K_z; as
        // omega -> 0 the prefactor tends to the 2D free one
        f.b_field = 1e-6;
        Vec3 a{0, 0, 0.5}, b{0, 0, 1.5};
        Complex kl = k_landau_field(a, b, 0.8, f);
        f.b_field = 0;
        Complex kf = k_field(a, b, 0.8, f);
        CHECK(std::abs(kl - kf) <= 1e-9 * std::abs(kf));
    }
}

TEST_CASE("k_landau_field against Van Vleck action oracle") {
    // m = omega = F = 1, r' = 0, r = (1, 0, 1), T = 1
    FieldConfig f;
    f.force = {0, 0, 1.0};
    f.b_field = 1.0;
    f.charge_sign = 1.0;
    Vec3 rp{0, 0, 0}, r{1.0, 0.0, 1.0};
    Complex got = k_landau_field(r, rp, 1.0, f);
    Complex want = van_vleck(1.0, 1.0, 1.0, 1.0, rp, r);
    CHECK(std::abs(got - want) <= 1e-6 * std::abs(want));

    // negative charge flips the sign of the transverse phase
    f.charge_sign = -1.0;
    got = k_landau_field(r, rp, 1.0, f);
    want = van_vleck(-1.0, 1.0, 1.0, 1.0, rp, r);
    CHECK(std::abs(got - want) <= 1e-6 * std::abs(want));

    // off the symmetry axis with both transverse coordinates involved
    f.charge_sign = 1.0;
    Vec3 r2{0.4, -0.8, 1.7}, rp2{-0.2, 0.1, 0.3};
    got = k_landau_field(r2, rp2, 1.3, f);
    want = van_vleck(1.0, 1.0, 1.0, 1.3, rp2, r2);
    CHECK(std::abs(got - want) <= 1e-6 * std::abs(want));
}

TEST_CASE("k_landau_field caustic guard") {
    FieldConfig f;
    f.b_field = 1.0;
    f.charge_sign = 1.0;
    double period = 2.0 * M_PI;
    CHECK_THROWS_AS(k_landau_field({1, 0, 0}, {0, 0, 0}, period, f), CausticError);
    CHECK_THROWS_AS(k_landau_field({1, 0, 0}, {0, 0, 0}, 2 * period + 5e-10, f),
                    CausticError);
    CHECK_NOTHROW(k_landau_field({1, 0, 0}, {0, 0, 0}, 0.5 * period, f));
}

TEST_CASE("k_landau_field rejects transverse force") {
    FieldConfig f;
    f.b_field = 1.0;
    f.charge_sign = 1.0;
    f.force = {0.5, 0, 1.0};
    CHECK_THROWS_AS(k_landau_field({1, 0, 0}, {0, 0, 0}, 1.0, f), std::invalid_argument);
}

TEST_CASE("free kernel semigroup on a tapered box") {
    // int d3r'' K(r, T | r'') K(r'', T1 | r') = K(r, T | r'), checked with a
    // Gaussian-damped integrand beyond the stationary region.  Panel-wise
    // 10-point Gauss-Legendre per axis resolves the Fresnel oscillation.
    const double T = 1.0, T1 = 0.5;
    const Vec3 rp{0, 0, 0}, r{0.3, -0.2, 0.5};
    const double r1 = 2.5, rmax = 7.0;

    static const double gx[5] = {0.1488743389816312108848, 0.4333953941292471907993,
                                 0.6794095682990244062343, 0.8650633666889845107321,
                                 0.9739065285171717200779};
    static const double gw[5] = {0.2955242247147528701739, 0.2692667193099963550912,
                                 0.2190863625159820439955, 0.1494513491505805931458,
                                 0.0666713443086881375936};

    const int panels = 40;
    const double plen = 2.0 * rmax / panels;
    std::vector<double> nodes, weights;
    for (int p = 0; p < panels; ++p) {
        double c = -rmax + (p + 0.5) * plen;
        for (int k = 0; k < 5; ++k) {
            nodes.push_back(c - 0.5 * plen * gx[k]);
            weights.push_back(0.5 * plen * gw[k]);
            nodes.push_back(c + 0.5 * plen * gx[k]);
            weights.push_back(0.5 * plen * gw[k]);
        }
    }

    // smooth partition-of-unity window: 1 below r1, 0 at rmax, all
    // derivatives vanishing at both ends (Gaussian-to-flat bump transition)
    auto taper = [&](double rr) {
        if (rr <= r1) return 1.0;
        if (rr >= rmax) return 0.0;
        double t = (rmax - rr) / (rmax - r1);
        double fa = std::exp(-1.0 / t);
        double fb = std::exp(-1.0 / (1.0 - t));
        return fa / (fa + fb);
    };

    Complex acc = 0.0;
    const std::size_t nn = nodes.size();
    for (std::size_t iz = 0; iz < nn; ++iz) {
        for (std::size_t iy = 0; iy < nn; ++iy) {
            Complex row = 0.0;
            for (std::size_t ix = 0; ix < nn; ++ix) {
                Vec3 rm{nodes[ix], nodes[iy], nodes[iz]};
                double w = taper(rm.norm());
                if (w < 1e-14) continue;
                row += weights[ix] * w * k_free(r, rm, T - T1) * k_free(rm, rp, T1);
            }
            acc += weights[iy] * weights[iz] * row;
        }
    }
    Complex want = k_free(r, rp, T);
    CHECK(std::abs(acc - want) <= 1e-3 * std::abs(want));
}
