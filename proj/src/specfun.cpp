#include "qsrc/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace qsrc::specfun {

namespace {

constexpr double kAi0 = 0.3550280538878172392600631860041831764;   // 3^{-2/3}/Gamma(2/3)
constexpr double kAip0 = -0.2588194037928067984051835601892039634; // -3^{-1/3}/Gamma(1/3)

constexpr double kSeriesLo = -4.8;
constexpr double kSeriesHi = 3.6;
constexpr double kAiAsym = 9.0;
constexpr double kBiAsym = 8.0;
constexpr double kNegAsym = -12.0;
constexpr double kSqrtPi = 1.7724538509055160273;

struct Pair {
    double v;  // value
    double d;  // derivative
};

// Maclaurin solutions of y'' = x y:
//   f = sum x^{3k} prod,  g = sum x^{3k+1} prod
// with Ai = c1 f - c2 g, Bi = sqrt(3)(c1 f + c2 g), c1 = Ai(0), c2 = -Ai'(0).
void maclaurin_fg(double x, Pair& f, Pair& g) {
    const double x3 = x * x * x;
    // value terms
    double tf = 1.0, tg = x;
    // derivative terms: f' starts at x^2/2 (k=1), g' starts at 1 (k=0)
    double tfd = 0.5 * x * x, tgd = 1.0;
    double sf = tf, sg = tg, sfd = tfd, sgd = tgd;
    for (int k = 0; k < 120; ++k) {
        const double a = 3.0 * k;
        tf *= x3 / ((a + 2.0) * (a + 3.0));
        tg *= x3 / ((a + 3.0) * (a + 4.0));
        // T_{k+1}/T_k for f': ((k+2)/(k+1)) x^3 / ((3k+5)(3k+6)), seed T_1 = x^2/2
        tfd *= x3 * (k + 2.0) / ((k + 1.0) * (a + 5.0) * (a + 6.0));
        // S_{k+1}/S_k for g': x^3 / ((3k+1)(3k+3)), seed S_0 = 1
        tgd *= x3 / ((a + 1.0) * (a + 3.0));
        sf += tf;
        sg += tg;
        sfd += tfd;
        sgd += tgd;
        if (std::abs(tf) + std::abs(tg) + std::abs(tfd) + std::abs(tgd) <
            1e-19 * (std::abs(sf) + std::abs(sg) + std::abs(sfd) + std::abs(sgd) + 1.0))
            break;
    }
    f = {sf, sfd};
    g = {sg, sgd};
}

AiryPair airy_series(double x) {
    Pair f, g;
    maclaurin_fg(x, f, g);
    const double c1 = kAi0, c2 = -kAip0;
    const double s3 = std::sqrt(3.0);
    AiryPair p;
    p.ai = c1 * f.v - c2 * g.v;
    p.ai_prime = c1 * f.d - c2 * g.d;
    p.bi = s3 * (c1 * f.v + c2 * g.v);
    p.bi_prime = s3 * (c1 * f.d + c2 * g.d);
    return p;
}

// One Taylor step of y'' = x y from x0 to x0 + h.
Pair taylor_step(double x0, Pair y, double h) {
    // a_{n+2} = (x0 a_n + a_{n-1}) / ((n+1)(n+2))
    constexpr int kOrder = 36;
    double a[kOrder + 1];
    a[0] = y.v;
    a[1] = y.d;
    for (int n = 0; n + 2 <= kOrder; ++n) {
        double prev = (n == 0) ? 0.0 : a[n - 1];
        a[n + 2] = (x0 * a[n] + prev) / ((n + 1.0) * (n + 2.0));
    }
    double v = a[kOrder], d = kOrder * a[kOrder];
    for (int n = kOrder - 1; n >= 0; --n) {
        v = a[n] + h * v;
        if (n >= 1) d = n * a[n] + h * d;
    }
    return {v, d};
}

Pair taylor_advance(double x_from, Pair y, double x_to) {
    const double span = x_to - x_from;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / 0.4)));
    const double h = span / steps;
    double x = x_from;
    for (int i = 0; i < steps; ++i) {
        y = taylor_step(x, y, h);
        x += h;
    }
    return y;
}

// Asymptotic coefficients u_k (and v_k = -u_k (6k+1)/(6k-1)).
// u_k = u_{k-1} (3k-5/2)(3k-3/2)(3k-1/2) / (54 k (k-1/2)).
double sum_asym(double xi, int parity_sign, bool use_v, double& last_term) {
    // Sums sum_k s^k c_k / xi^k with s = parity_sign (+1 or -1), c = u or v.
    double u = 1.0;
    double upow = 1.0;  // u_k / xi^k, advanced incrementally
    double sum = 1.0;
    last_term = 1.0;
    double prev = 1e300;
    for (int k = 1; k <= 40; ++k) {
        const double ratio = (3.0 * k - 2.5) * (3.0 * k - 1.5) * (3.0 * k - 0.5) /
                             (54.0 * k * (k - 0.5));
        u *= ratio;
        upow *= ratio / xi;
        double term = use_v ? -upow * (6.0 * k + 1.0) / (6.0 * k - 1.0) : upow;
        if (parity_sign < 0 && (k % 2)) term = -term;
        if (std::abs(term) >= prev) break;  // divergence onset
        sum += term;
        prev = std::abs(term);
        last_term = std::abs(term);
        if (prev < 1e-18) break;
    }
    return sum;
}

// Scaled asymptotics for x >= kBiAsym (Ai valid from kAiAsym).
AiryScaled asym_positive(double x) {
    const double xi = 2.0 / 3.0 * x * std::sqrt(x);
    const double x14 = std::pow(x, 0.25);
    double lt;
    AiryScaled s;
    s.xi = xi;
    s.ai = sum_asym(xi, -1, false, lt) / (2.0 * kSqrtPi * x14);
    s.ai_prime = -x14 * sum_asym(xi, -1, true, lt) / (2.0 * kSqrtPi);
    s.bi = sum_asym(xi, +1, false, lt) / (kSqrtPi * x14);
    s.bi_prime = x14 * sum_asym(xi, +1, true, lt) / kSqrtPi;
    return s;
}

// Oscillatory asymptotics for x <= kNegAsym (argument -x with x < 0).
AiryPair asym_negative(double x) {
    const double z = -x;
    const double xi = 2.0 / 3.0 * z * std::sqrt(z);
    const double z14 = std::pow(z, 0.25);
    const double sn = std::sin(xi + M_PI / 4.0);
    const double cs = std::cos(xi + M_PI / 4.0);

    // Even/odd splits of sum (-1)^k c_k / xi^k.
    auto even_odd = [&](bool use_v, double& even, double& odd) {
        double upow = 1.0;  // u_k / xi^k, advanced incrementally
        even = 1.0;
        odd = 0.0;
        double prev = 1e300;
        for (int k = 1; k <= 40; ++k) {
            const double ratio = (3.0 * k - 2.5) * (3.0 * k - 1.5) * (3.0 * k - 0.5) /
                                 (54.0 * k * (k - 0.5));
            upow *= ratio / xi;
            double term = use_v ? -upow * (6.0 * k + 1.0) / (6.0 * k - 1.0) : upow;
            if (std::abs(term) >= prev) break;
            prev = std::abs(term);
            // (-1)^floor(k/2) alternation within each parity class
            int half = k / 2;
            double sgn = (half % 2) ? -1.0 : 1.0;
            if (k % 2 == 0)
                even += sgn * term;
            else
                odd += sgn * term;
            if (prev < 1e-18) break;
        }
    };

    double pe, po, qe, qo;
    even_odd(false, pe, po);  // u-sums
    even_odd(true, qe, qo);   // v-sums

    AiryPair p;
    p.ai = (sn * pe - cs * po) / (kSqrtPi * z14);
    p.bi = (cs * pe + sn * po) / (kSqrtPi * z14);
    p.ai_prime = -z14 * (cs * qe + sn * qo) / kSqrtPi;
    p.bi_prime = z14 * (sn * qe - cs * qo) / kSqrtPi;
    return p;
}

} // namespace

AiryPair airy(double x) {
    if (!std::isfinite(x))
        throw std::domain_error("airy: non-finite argument");

    if (x >= kSeriesLo && x <= kSeriesHi) return airy_series(x);

    if (x > kSeriesHi) {
        AiryPair p;
        // Bi grows: the series is cancellation-free up to the asymptotic band.
        if (x <= kBiAsym) {
            AiryPair s = airy_series(x);
            p.bi = s.bi;
            p.bi_prime = s.bi_prime;
        } else {
            AiryScaled a = asym_positive(x);
            const double exi = std::exp(a.xi);
            p.bi = a.bi * exi;
            p.bi_prime = a.bi_prime * exi;
        }
        // Ai decays: integrate backward (the growing direction) from the
        // asymptotic seed so forward instability cannot contaminate it.
        if (x >= kAiAsym) {
            AiryScaled a = asym_positive(x);
            const double emxi = std::exp(-a.xi);
            p.ai = a.ai * emxi;
            p.ai_prime = a.ai_prime * emxi;
        } else {
            static const AiryScaled seed = asym_positive(kAiAsym);
            static const double emxi = std::exp(-seed.xi);
            Pair y{seed.ai * emxi, seed.ai_prime * emxi};
            y = taylor_advance(kAiAsym, y, x);
            p.ai = y.v;
            p.ai_prime = y.d;
        }
        return p;
    }

    // x < kSeriesLo
    if (x >= kNegAsym) {
        static const AiryPair seed = airy_series(kSeriesLo);
        Pair ya{seed.ai, seed.ai_prime};
        Pair yb{seed.bi, seed.bi_prime};
        ya = taylor_advance(kSeriesLo, ya, x);
        yb = taylor_advance(kSeriesLo, yb, x);
        return {ya.v, ya.d, yb.v, yb.d};
    }
    return asym_negative(x);
}

AiryScaled airy_scaled(double x) {
    if (!std::isfinite(x))
        throw std::domain_error("airy_scaled: non-finite argument");
    if (x > kBiAsym) return asym_positive(x);
    AiryPair p = airy(x);
    AiryScaled s;
    if (x > 0) {
        s.xi = 2.0 / 3.0 * x * std::sqrt(x);
        const double e = std::exp(s.xi);
        s.ai = p.ai * e;
        s.ai_prime = p.ai_prime * e;
        s.bi = p.bi / e;
        s.bi_prime = p.bi_prime / e;
    } else {
        s.ai = p.ai;
        s.ai_prime = p.ai_prime;
        s.bi = p.bi;
        s.bi_prime = p.bi_prime;
    }
    return s;
}

CiValue ci(double x) {
    AiryPair p = airy(x);
    return {{p.bi, p.ai}, {p.bi_prime, p.ai_prime}};
}

} // namespace qsrc::specfun
