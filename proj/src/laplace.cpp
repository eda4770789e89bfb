#include "qsrc/laplace.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qsrc::greens {

namespace {

const Complex kI{0.0, 1.0};

// Gauss-Kronrod 15(7) on [-1, 1]
const double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                        0.741531185599394, 0.586087235467691, 0.405845151377397,
                        0.207784955007898, 0.0};
const double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                        0.140653259715525, 0.169004726639267, 0.190350578064785,
                        0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                       0.417959183673469};

struct SegResult {
    Complex value;
    double err;
};

// 15-point Gauss-Kronrod along the straight segment [za, zb].
template <typename F>
SegResult gk15(const F& f, Complex za, Complex zb) {
    const Complex mid = 0.5 * (za + zb);
    const Complex hl = 0.5 * (zb - za);
    Complex acc_k = kWgk[7] * f(mid);
    Complex acc_g = kWg[3] * f(mid);
    for (int i = 0; i < 7; ++i) {
        Complex fp = f(mid + hl * kXgk[i]);
        Complex fm = f(mid - hl * kXgk[i]);
        acc_k += kWgk[i] * (fp + fm);
        if (i % 2 == 1) acc_g += kWg[i / 2] * (fp + fm);
    }
    Complex vk = acc_k * hl;
    return {vk, std::abs(vk - acc_g * hl)};
}

// adaptive bisection on top of gk15
template <typename F>
SegResult gk_adaptive(const F& f, Complex za, Complex zb, double abs_budget,
                      int depth = 10) {
    SegResult r = gk15(f, za, zb);
    if (depth <= 0 || r.err <= abs_budget ||
        r.err <= 1e-14 * std::abs(r.value) + 1e-300)
        return r;
    const Complex mid = 0.5 * (za + zb);
    SegResult left = gk_adaptive(f, za, mid, 0.5 * abs_budget, depth - 1);
    SegResult right = gk_adaptive(f, mid, zb, 0.5 * abs_budget, depth - 1);
    return {left.value + right.value, left.err + right.err};
}

struct Stationary {
    bool exists = false;
    double t1 = 0, t2 = 0;
};

Stationary stationary_times(const PhaseShape& s) {
    Stationary st;
    if (s.b <= 0) return st;
    if (s.c3 <= 0) {
        st.exists = true;
        st.t1 = st.t2 = std::sqrt(s.a / s.b);
        return st;
    }
    const double disc = s.b * s.b - 12.0 * s.a * s.c3;
    if (disc < 0) return st;
    st.exists = true;
    st.t1 = std::sqrt((s.b - std::sqrt(disc)) / (6.0 * s.c3));
    st.t2 = std::sqrt((s.b + std::sqrt(disc)) / (6.0 * s.c3));
    return st;
}

double phase_d1(const PhaseShape& s, double t) {
    return s.b - s.a / (t * t) - 3.0 * s.c3 * t * t;
}
double phase_d2(const PhaseShape& s, double t) {
    return 2.0 * s.a / (t * t * t) - 6.0 * s.c3 * t;
}

// sub-period step length near T
double panel_step(const PhaseShape& s, double t, double eta, double caustic_delta) {
    double d1 = std::abs(phase_d1(s, t));
    double d2 = std::abs(phase_d2(s, t));
    double denom = std::max({d1, std::sqrt(M_PI * 0.5 * d2), 1e-12});
    double step = M_PI / denom;
    step = std::min(step, 0.6 * t + 0.1);
    step = std::min(step, 10.0 / (1.0 + eta));
    if (s.omega > 0) {
        const double tc = 2.0 * M_PI / s.omega;
        step = std::min(step, tc / 16.0);
        double dc = std::abs(t - std::round(t / tc) * tc);
        if (dc < 8.0 * caustic_delta)
            step = std::min(step, std::max(caustic_delta / 1.5, 1e-4 * tc));
    }
    return step;
}

struct Engine {
    KernelCT kernel;
    double energy;
    double eta;
    PhaseShape shape;

    Complex f(Complex t) const {
        return -kI * kernel(t) * std::exp((kI * energy - eta) * t);
    }

    // [0, T_m] through u = 1/T swept up a vertical ray from u0 = 1/T_m
    SegResult u_leg(double tm) const {
        const double u0 = 1.0 / tm;
        auto g = [&](Complex v_as_complex) {
            Complex u = u0 + kI * v_as_complex;
            Complex t = 1.0 / u;
            return kI * f(t) / (u * u);
        };
        const double L = 4.0 / shape.a;
        Complex acc = 0;
        double err = 0;
        double lo = 0, len = std::min(L, 2.0);
        double acc_scale = 0;
        int quiet = 0;
        for (int seg = 0; seg < 120; ++seg) {
            SegResult r = gk_adaptive(g, Complex(lo, 0), Complex(lo + len, 0),
                                      0.05 * shape.tol * (acc_scale + 1e-300));
            acc += r.value;
            err += r.err;
            acc_scale = std::max(acc_scale, std::abs(acc));
            if (std::abs(r.value) < 0.3 * shape.tol * (acc_scale + 1e-300)) {
                if (++quiet >= 2) break;
            } else {
                quiet = 0;
            }
            lo += len;
            len *= 1.6;
        }
        return {acc, err};
    }

    // straight polyline legs with sub-period panels; returns last T reached
    SegResult main_leg(double tm, double t_big, double dodge, double& t_end,
                       bool stop_on_eta) const {
        Complex acc = 0;
        double err = 0;
        // descend to the dodged line
        if (dodge > 0) {
            SegResult r = gk_adaptive([&](Complex t) { return f(t); }, Complex(tm, 0),
                                      Complex(tm, -dodge), 0.05 * shape.tol);
            acc += r.value;
            err += r.err;
        }
        double t = tm;
        int quiet = 0;
        long guard = 0;
        while (true) {
            double step = panel_step(shape, t, eta, dodge);
            double hi = t + step;
            SegResult r =
                gk_adaptive([&](Complex tt) { return f(tt); }, Complex(t, -dodge),
                            Complex(hi, -dodge),
                            0.05 * shape.tol * (std::abs(acc) + 1e-300));
            acc += r.value;
            err += r.err;
            t = hi;
            if (t >= t_big) {
                if (!stop_on_eta) break;
                if (std::abs(r.value) < 0.2 * shape.tol * (std::abs(acc) + 1e-300)) {
                    if (++quiet >= 5) break;
                } else {
                    quiet = 0;
                }
            }
            if (++guard > 400000) break;
        }
        // come back up to the real axis so the tail ray starts there
        if (dodge > 0) {
            SegResult r = gk_adaptive([&](Complex tt) { return f(tt); },
                                      Complex(t, -dodge), Complex(t, 0),
                                      0.05 * shape.tol * (std::abs(acc) + 1e-300));
            acc += r.value;
            err += r.err;
        }
        t_end = t;
        return {acc, err};
    }

    // decaying ray from t_end at angle theta
    SegResult tail_ray(double t_end, double theta) const {
        const Complex dir = std::polar(1.0, theta);
        auto g = [&](Complex rho) { return f(t_end + rho.real() * dir) * dir; };
        const double d1 = std::abs(phase_d1(shape, t_end));
        double lam = std::max(eta * std::cos(theta) + d1 * std::abs(std::sin(theta)), 0.02);
        // keep the residual oscillation along the ray below ~one period per panel
        double len = std::min(3.0 / lam, M_PI / std::max({d1, lam, 0.1}));
        Complex acc = 0;
        double err = 0;
        double lo = 0;
        int quiet = 0;
        for (int seg = 0; seg < 200; ++seg) {
            SegResult r = gk_adaptive(g, Complex(lo, 0), Complex(lo + len, 0),
                                      0.05 * shape.tol * (std::abs(acc) + 1e-300));
            acc += r.value;
            err += r.err;
            if (std::abs(r.value) < 0.3 * shape.tol * (std::abs(acc) + 1e-300)) {
                if (++quiet >= 2) break;
            } else {
                quiet = 0;
            }
            lo += len;
            len *= 1.3;
        }
        return {acc, err};
    }
};

} // namespace

namespace detail {

std::pair<Complex, double> wynn_epsilon(const std::vector<Complex>& partial) {
    const int n = static_cast<int>(partial.size());
    if (n == 0) return {Complex{}, 1e300};
    if (n == 1) return {partial[0], std::abs(partial[0])};
    std::vector<Complex> prev2(n + 1, Complex{});  // eps_{-1}
    std::vector<Complex> prev1(partial);           // eps_0
    Complex best = partial.back();
    double err = 1e300;
    Complex last_even = best;
    for (int k = 1; k < n; ++k) {
        std::vector<Complex> cur(n - k);
        for (int j = 0; j + k < n; ++j) {
            Complex diff = prev1[j + 1] - prev1[j];
            if (std::abs(diff) < 1e-300) diff = Complex(1e-300, 0);
            cur[j] = prev2[j + 1] + 1.0 / diff;
        }
        if (k % 2 == 0 && !cur.empty()) {
            Complex cand = cur.back();
            double d = std::abs(cand - last_even);
            if (d < err) {
                err = d;
                best = cand;
            }
            last_even = cand;
        }
        prev2.swap(prev1);
        prev1.swap(cur);
    }
    return {best, err};
}

} // namespace detail

LaplaceResult laplace_transform(const KernelCT& kernel, double energy, double eta,
                                const PhaseShape& shape, Scheme scheme) {
    if (!(shape.a > 0))
        throw std::invalid_argument("laplace_transform: coincident points (a = 0)");
    if (eta < 0) throw std::invalid_argument("laplace_transform: eta must be >= 0");
    const bool magnetic = shape.omega > 0;
    if (magnetic && eta <= 0)
        throw std::invalid_argument("laplace_transform: magnetic kernel needs eta > 0");

    Engine eng{kernel, energy, eta, shape};
    Stationary st = stationary_times(shape);

    // split point between the 1/T-dominated region and the rest
    double tm = st.exists ? 0.45 * st.t1 : std::sqrt(shape.a / (1.0 + std::abs(shape.b)));
    tm = std::min(tm, 1.5 / (1.0 + std::abs(energy) + eta));
    if (magnetic) tm = std::min(tm, 0.15 * 2.0 * M_PI / shape.omega);
    tm = std::max(tm, 1e-8);

    LaplaceResult out;
    SegResult leg1 = eng.u_leg(tm);

    double t_big;
    double theta;
    bool stop_on_eta = false;
    if (shape.c3 > 0) {
        t_big = 1.35 * std::max(st.exists ? st.t2 : 0.0,
                                std::sqrt(std::max(shape.b, 0.0) / (3.0 * shape.c3)));
        t_big = std::max(t_big, 1.2 * tm);
        theta = -M_PI / 6.0;
    } else if (magnetic) {
        t_big = std::max(st.exists ? 1.5 * st.t2 : 0.0, 2.0 * tm);
        theta = 0.0;           // stay on the dodged line, eta provides decay
        stop_on_eta = true;
    } else if (shape.b > 0) {
        t_big = std::max(2.0 * st.t2, 1.5 * tm);
        theta = M_PI / 4.0;    // e^{ibT} decays upward
    } else {
        t_big = std::max(1.5 * tm, std::sqrt(shape.a / (1.0 + std::abs(shape.b))));
        theta = -M_PI / 4.0;   // both phase factors decay downward
    }

    double dodge = 0;
    if (magnetic) {
        const double tc = 2.0 * M_PI / shape.omega;
        dodge = std::min({0.03 * tc, 1.0 / (1.0 + std::abs(energy)), 0.5 * tm});
    }

    if (scheme == Scheme::contour) {
        double t_end = t_big;
        SegResult leg2 = eng.main_leg(tm, t_big, dodge, t_end, stop_on_eta);
        SegResult leg3{Complex{}, 0.0};
        if (!stop_on_eta) {
            leg3 = eng.tail_ray(t_end, theta);
        } else {
            // eta already damped everything; estimate remainder from decay
            leg3.err = 0.0;
        }
        out.value = leg1.value + leg2.value + leg3.value;
        out.est_error = leg1.err + leg2.err + leg3.err;
        out.converged = out.est_error <= 100.0 * shape.tol * (std::abs(out.value) + 1e-300);
        return out;
    }

    // partial-oscillation scheme: real axis only
    if (magnetic)
        throw std::invalid_argument(
            "laplace_transform: partial_oscillation does not support magnetic kernels");

    Complex acc = 0;
    double err = 0;

    // end region near T = 0 via u = 1/T, half-periods of e^{iau}
    {
        const double u0 = 1.0 / tm;
        auto g = [&](Complex u) {
            Complex t = 1.0 / u;
            return eng.f(t) / (u * u);
        };
        const double du = M_PI / shape.a;
        std::vector<Complex> partial;
        Complex s = 0;
        double u = u0;
        for (int k = 0; k < 64; ++k) {
            SegResult r = gk15(g, Complex(u, 0), Complex(u + du, 0));
            s += r.value;
            err += r.err;
            partial.push_back(s);
            u += du;
            if (k >= 10 && k % 4 == 0) {
                auto [val, werr] = detail::wynn_epsilon(partial);
                if (werr < shape.tol * (std::abs(val) + 1e-300) || k == 60) {
                    acc += val;
                    err += werr;
                    partial.clear();
                    break;
                }
            }
        }
        if (!partial.empty()) {
            auto [val, werr] = detail::wynn_epsilon(partial);
            acc += val;
            err += werr;
        }
    }

    // main region: sub-period panels, accelerated after the stationary zone
    {
        double t = tm;
        Complex s = 0;
        std::vector<Complex> partial;
        double t_accel = st.exists ? 1.2 * st.t2 : 1.5 * tm;
        long guard = 0;
        bool done = false;
        while (!done && ++guard < 40000) {
            double step = panel_step(shape, t, eta, 0.0);
            SegResult r = gk15([&](Complex tt) { return eng.f(tt); }, Complex(t, 0),
                               Complex(t + step, 0));
            s += r.value;
            err += r.err;
            t += step;
            if (t > t_accel) {
                partial.push_back(s);
                if (partial.size() >= 12 && partial.size() % 4 == 0) {
                    auto [val, werr] = detail::wynn_epsilon(partial);
                    if (werr < shape.tol * (std::abs(acc + val) + 1e-300) ||
                        partial.size() >= 56) {
                        acc += val;
                        err += werr;
                        done = true;
                    }
                }
            }
        }
        if (!done) {
            if (!partial.empty()) {
                auto [val, werr] = detail::wynn_epsilon(partial);
                acc += val;
                err += werr + std::abs(partial.back() - val);
            } else {
                acc += s;
            }
        }
    }

    out.value = acc;
    out.est_error = err;
    out.converged = out.est_error <= 100.0 * shape.tol * (std::abs(out.value) + 1e-300);
    return out;
}

} // namespace qsrc::greens
