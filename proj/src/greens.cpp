#include "qsrc/greens.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qsrc/specfun.hpp"

namespace qsrc::greens {

namespace {

const Complex kI{0.0, 1.0};

double distance_or_throw(const Vec3& r, const Vec3& rp, const char* who) {
    double d = (r - rp).norm();
    if (!(d > 0))
        throw std::invalid_argument(std::string(who) +
                                    ": coincident points (use coincidence_im)");
    return d;
}

struct FieldFrame {
    double f_mag;   // |force|
    Vec3 fhat;      // unit force direction
};

FieldFrame field_frame(const propagators::FieldConfig& f) {
    double mag = f.force.norm();
    if (!(mag > 0)) throw std::invalid_argument("g_field: needs a nonzero force");
    return {mag, f.force / mag};
}

// Landau-level projector factor in the symmetric gauge:
//   (1/(2 pi l^2)) L_n(u) e^{-u/2} e^{i gamma},  u = |dperp|^2/(2 l^2),
//   gamma = sign(omega) (x' y - y' x) / (2 l^2).
struct TransverseSum {
    double inv_2pil2;
    double u;
    Complex gauge;
    std::vector<double> laguerre;  // L_n(u) filled on demand

    void ensure(int n) {
        while (static_cast<int>(laguerre.size()) <= n) {
            int k = static_cast<int>(laguerre.size());
            if (k == 0)
                laguerre.push_back(1.0);
            else if (k == 1)
                laguerre.push_back(1.0 - u);
            else
                laguerre.push_back(((2.0 * k - 1.0 - u) * laguerre[k - 1] -
                                    (k - 1.0) * laguerre[k - 2]) /
                                   k);
        }
    }
    Complex factor(int n) {
        ensure(n);
        return inv_2pil2 * std::exp(-0.5 * u) * laguerre[n] * gauge;
    }
};

TransverseSum make_transverse(const Vec3& r, const Vec3& rp,
                              const propagators::FieldConfig& f) {
    const double omega = f.cyclotron_frequency();
    const double l2 = 1.0 / (f.mass * omega);
    const double dx = r.x - rp.x, dy = r.y - rp.y;
    TransverseSum t;
    t.inv_2pil2 = 1.0 / (2.0 * M_PI * l2);
    t.u = (dx * dx + dy * dy) / (2.0 * l2);
    const double sgn = f.signed_omega() >= 0 ? 1.0 : -1.0;
    t.gauge = std::exp(kI * (sgn * (rp.x * r.y - rp.y * r.x) / (2.0 * l2)));
    return t;
}

// normalized harmonic-oscillator eigenfunctions phi_n(t), t in oscillator units
void hermite_functions(double t, int nmax, std::vector<double>& phi) {
    phi.resize(nmax + 1);
    phi[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * t * t);
    if (nmax >= 1) phi[1] = std::sqrt(2.0) * t * phi[0];
    for (int n = 1; n < nmax; ++n)
        phi[n + 1] = std::sqrt(2.0 / (n + 1.0)) * t * phi[n] -
                     std::sqrt(n / (n + 1.0)) * phi[n - 1];
}

struct CrossedSetup {
    double xs, ys, xps, yps;  // rotated coordinates (force along +y)
    double f_perp;
    double omega_abs, omega_signed, l, l2, vd2_half, yc_shift;
};

CrossedSetup crossed_setup(const Vec3& r, const Vec3& rp,
                           const propagators::FieldConfig& f) {
    CrossedSetup c;
    c.f_perp = std::hypot(f.force.x, f.force.y);
    const double cx = f.force.x / c.f_perp, cy = f.force.y / c.f_perp;
    // y' axis along the transverse force, x' = y' x z
    c.xs = r.x * cy - r.y * cx;
    c.ys = r.x * cx + r.y * cy;
    c.xps = rp.x * cy - rp.y * cx;
    c.yps = rp.x * cx + rp.y * cy;
    c.omega_signed = f.signed_omega();
    c.omega_abs = std::abs(c.omega_signed);
    c.l2 = 1.0 / (f.mass * c.omega_abs);
    c.l = std::sqrt(c.l2);
    const double vd = c.f_perp / (f.charge_sign * f.b_field);
    c.vd2_half = 0.5 * f.mass * vd * vd;
    c.yc_shift = c.f_perp / (f.mass * c.omega_signed * c.omega_signed);
    return c;
}

// 10-point Gauss-Legendre
const double kGx10[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                         0.8650633666889845, 0.9739065285171717};
const double kGw10[5] = {0.2955242247147529, 0.2692667193099964, 0.2190863625159820,
                         0.1494513491505806, 0.0666713443086881};

} // namespace

GreenValue g_free(const Vec3& r, const Vec3& rp, double energy, double mass) {
    const double d = distance_or_throw(r, rp, "g_free");
    Complex v;
    if (energy >= 0) {
        const double k = std::sqrt(2.0 * mass * energy);
        v = -(mass / (2.0 * M_PI)) * std::exp(kI * k * d) / d;
    } else {
        const double kappa = std::sqrt(-2.0 * mass * energy);
        v = -(mass / (2.0 * M_PI)) * std::exp(-kappa * d) / d;
    }
    return {v, Method::closed_form, std::abs(v) * 1e-15, true};
}

double g_free_coincidence_im(double energy, double mass) {
    if (energy <= 0) return 0.0;
    return -mass * std::sqrt(2.0 * mass * energy) / (2.0 * M_PI);
}

Complex g_1d_free(double dz, Complex energy, double mass) {
    Complex k = std::sqrt(2.0 * mass * energy);
    if (k.imag() < 0) k = -k;  // outgoing/decaying branch
    return -kI * mass / k * std::exp(kI * k * std::abs(dz));
}

Complex g_1d_field(double z, double zp, double energy, double force, double mass) {
    if (!(force != 0)) throw std::invalid_argument("g_1d_field: force must be nonzero");
    if (force < 0) {  // mirror the axis so the force points toward +z
        z = -z;
        zp = -zp;
        force = -force;
    }
    const double beta = std::cbrt(1.0 / (2.0 * mass * force));
    const double mid = 0.5 * (z + zp);
    const double d = std::abs(z - zp);
    const double a_dn = -(energy / force + mid + 0.5 * d) / beta;
    const double a_up = -(energy / force + mid - 0.5 * d) / beta;
    const double pref = -2.0 * M_PI * mass * beta;

    if (std::max(a_dn, a_up) <= 90.0) {
        specfun::AiryPair up = specfun::airy(a_up);
        specfun::CiValue dn = specfun::ci(a_dn);
        return pref * up.ai * dn.value;
    }
    // deep-tunneling side: assemble from scaled values with explicit exponents
    specfun::AiryScaled su = specfun::airy_scaled(a_up);
    specfun::AiryScaled sd = specfun::airy_scaled(a_dn);
    const double d_exp = sd.xi - su.xi;  // <= 0
    double re = 0, im = 0;
    if (d_exp > -745.0) re = su.ai * sd.bi * std::exp(d_exp);
    const double s_exp = -(sd.xi + su.xi);
    if (s_exp > -745.0) im = su.ai * sd.ai * std::exp(s_exp);
    return pref * Complex(re, im);
}

GreenValue g_laplace(const GreenRequest& req) {
    req.field.validate();
    const double d = distance_or_throw(req.r, req.rp, "g_laplace");
    const double m = req.field.mass;
    const bool magnetic = req.field.has_magnetic();

    KernelCT kernel;
    if (magnetic) {
        if (std::hypot(req.field.force.x, req.field.force.y) >
            1e-12 * (std::abs(req.field.force.z) + 1.0))
            throw std::invalid_argument(
                "g_laplace: no kernel for force transverse to B (use landau_sum)");
        kernel = [&req](Complex t) {
            return propagators::detail::k_landau_ct(req.r, req.rp, t, req.field);
        };
    } else if (req.field.force.norm() > 0) {
        kernel = [&req](Complex t) {
            return propagators::detail::k_field_ct(req.r, req.rp, t, req.field);
        };
    } else {
        kernel = [&req, m](Complex t) {
            return propagators::detail::k_free_ct(req.r, req.rp, t, m);
        };
    }

    PhaseShape shape;
    shape.a = 0.5 * m * d * d;
    shape.b = req.energy + 0.5 * req.field.force.dot(req.r + req.rp);
    shape.c3 = req.field.force.norm2() / (24.0 * m);
    shape.omega = magnetic ? req.field.cyclotron_frequency() : 0.0;
    shape.tol = req.tol;

    GreenValue out;
    out.method_used = Method::laplace_quadrature;

    if (!req.extrapolate_eta) {
        LaplaceResult r = laplace_transform(kernel, req.energy, req.eta, shape, req.scheme);
        out.value = r.value;
        out.est_error = r.est_error;
        out.converged = r.converged;
        return out;
    }

    if (!magnetic && req.scheme == Scheme::contour) {
        // the deformed contour already realizes the eta -> 0_+ limit
        LaplaceResult r = laplace_transform(kernel, req.energy, 0.0, shape, req.scheme);
        out.value = r.value;
        out.est_error = r.est_error;
        out.converged = r.converged;
        return out;
    }

    // Richardson extrapolation from eta, eta/2, eta/4
    const double eta0 = req.eta;
    LaplaceResult r1 = laplace_transform(kernel, req.energy, eta0, shape, req.scheme);
    LaplaceResult r2 = laplace_transform(kernel, req.energy, 0.5 * eta0, shape, req.scheme);
    LaplaceResult r4 = laplace_transform(kernel, req.energy, 0.25 * eta0, shape, req.scheme);
    Complex quad = (8.0 * r4.value - 6.0 * r2.value + r1.value) / 3.0;
    Complex lin = 2.0 * r4.value - r2.value;
    out.value = quad;
    out.est_error = r1.est_error + r2.est_error + r4.est_error + std::abs(quad - lin);
    out.converged = r1.converged && r2.converged && r4.converged;
    return out;
}

GreenValue g_field(const Vec3& r, const Vec3& rp, double energy,
                   const propagators::FieldConfig& field) {
    field.validate();
    if (field.has_magnetic())
        throw std::invalid_argument("g_field: magnetic field not supported here");
    const double d = distance_or_throw(r, rp, "g_field");
    FieldFrame fr = field_frame(field);
    const double m = field.mass;
    const double beta = std::cbrt(1.0 / (2.0 * m * fr.f_mag));
    const double mid = 0.5 * fr.fhat.dot(r + rp);
    const double a_dn = -(energy / fr.f_mag + mid + 0.5 * d) / beta;
    const double a_up = -(energy / fr.f_mag + mid - 0.5 * d) / beta;

    if (!std::isfinite(a_dn) || !std::isfinite(a_up))
        throw std::invalid_argument("g_field: arguments overflow");

    const double pref = 0.5 * m / d;
    GreenValue out;
    out.method_used = Method::closed_form;

    if (std::max(a_dn, a_up) <= 90.0) {
        specfun::AiryPair up = specfun::airy(a_up);
        specfun::CiValue dn = specfun::ci(a_dn);
        out.value = pref * (dn.value * up.ai_prime - dn.derivative * up.ai);
        out.est_error = 5e-13 * std::abs(out.value);
        return out;
    }

    // scaled assembly; exponents: Bi(dn) carries +xi_dn, Ai(up) carries -xi_up
    specfun::AiryScaled su = specfun::airy_scaled(a_up);
    specfun::AiryScaled sd = specfun::airy_scaled(a_dn);
    const double d_exp = sd.xi - su.xi;  // <= 0 since a_up >= a_dn
    if (d_exp < -700.0 || !std::isfinite(d_exp)) {
        // beyond double-precision exponent range: spec-mandated fallback
        GreenRequest fb;
        fb.r = r;
        fb.rp = rp;
        fb.energy = energy;
        fb.field = field;
        fb.eta = 1e-3;
        GreenValue g = g_laplace(fb);
        g.method_used = Method::laplace_quadrature;
        return g;
    }
    double re = (sd.bi * su.ai_prime - sd.bi_prime * su.ai) * std::exp(d_exp);
    const double s_exp = -(sd.xi + su.xi);
    double im = 0;
    if (s_exp > -745.0) im = (sd.ai * su.ai_prime - sd.ai_prime * su.ai) * std::exp(s_exp);
    out.value = pref * Complex(re, im);
    out.est_error = 5e-13 * std::abs(out.value);
    return out;
}

GreenValue g_landau(const GreenRequest& req) {
    req.field.validate();
    const propagators::FieldConfig& f = req.field;
    if (!f.has_magnetic())
        throw std::invalid_argument("g_landau: needs B > 0 and a charged particle");
    if (!(req.eta > 0)) throw std::invalid_argument("g_landau: eta must be > 0");
    const double m = f.mass;
    const double omega = f.cyclotron_frequency();
    const double f_perp = std::hypot(f.force.x, f.force.y);
    const double f_par = f.force.z;
    const bool has_perp = f_perp > 1e-12 * (std::abs(f_par) + 1.0);
    const bool has_par = std::abs(f_par) > 1e-12 * (f_perp + 1.0);
    if (has_perp && has_par)
        throw std::invalid_argument(
            "g_landau: force must be parallel or perpendicular to B");

    GreenValue out;
    out.method_used = Method::landau_sum;

    const double tol = req.tol;
    const int n_floor =
        static_cast<int>(std::ceil((std::max(req.energy, 0.0) +
                                    10.0 * std::max(req.eta, omega)) /
                                   omega)) +
        10;
    const int n_cap = 200000;

    if (!has_perp) {
        // parallel (or purely magnetic) case
        if ((req.r - req.rp).norm() == 0.0)
            throw std::invalid_argument("g_landau: coincident points (use coincidence_im)");
        TransverseSum ts = make_transverse(req.r, req.rp, f);
        Complex acc = 0;
        double tail3[3] = {1e300, 1e300, 1e300};
        int n = 0;
        for (; n < n_cap; ++n) {
            const double eps = req.energy - (n + 0.5) * omega;
            Complex gz = has_par
                             ? g_1d_field(req.r.z, req.rp.z, eps, f_par, m)
                             : g_1d_free(req.r.z - req.rp.z, Complex(eps, req.eta), m);
            Complex term = ts.factor(n) * gz;
            acc += term;
            tail3[n % 3] = std::abs(term);
            if (n >= n_floor) {
                const double t = std::max({tail3[0], tail3[1], tail3[2]});
                if (t < tol * (std::abs(acc) + 1e-300)) break;
            }
        }
        out.value = acc;
        out.converged = n < n_cap;
        out.est_error =
            3.0 * std::max({tail3[0], tail3[1], tail3[2]}) + 1e-13 * std::abs(acc);
        return out;
    }

    // perpendicular force: Landau-gauge spectral integral in the drift frame,
    // rotated back to the symmetric gauge
    CrossedSetup c = crossed_setup(req.r, req.rp, f);
    const double dz = req.r.z - req.rp.z;
    const double dxs = c.xs - c.xps;
    const double qb = f.charge_sign * f.b_field;

    Complex acc = 0;
    double tail3[3] = {1e300, 1e300, 1e300};
    std::vector<double> phi_a, phi_b;
    int n_lim = std::max(
        n_floor, static_cast<int>(std::ceil((std::max(req.energy, 0.0) + c.vd2_half +
                                             10.0 * std::max(req.eta, omega)) /
                                            omega)) +
                     10);
    int n = 0;
    for (; n < std::max(n_lim, 1); ++n) {
        const double reach = c.l * (std::sqrt(2.0 * n + 1.0) + 7.0);
        const double ylo = std::min(c.ys, c.yps) - reach;
        const double yhi = std::max(c.ys, c.yps) + reach;
        const int panels =
            std::max(24, static_cast<int>(std::ceil((yhi - ylo) / c.l *
                                                    std::sqrt(2.0 * n + 1.0) / M_PI)) +
                             8);
        const double h = (yhi - ylo) / panels;
        Complex level = 0;
        for (int p = 0; p < panels; ++p) {
            const double mid = ylo + (p + 0.5) * h;
            for (int g = 0; g < 5; ++g) {
                for (double sgn : {-1.0, 1.0}) {
                    const double yc = mid + sgn * 0.5 * h * kGx10[g];
                    const double w = 0.5 * h * kGw10[g];
                    hermite_functions((c.ys - yc) / c.l, n, phi_a);
                    hermite_functions((c.yps - yc) / c.l, n, phi_b);
                    const double un_a = phi_a[n] / std::sqrt(c.l);
                    const double un_b = phi_b[n] / std::sqrt(c.l);
                    const double eps_n =
                        (n + 0.5) * omega + c.vd2_half - c.f_perp * yc;
                    const double k_x = -qb * (yc - c.yc_shift);
                    Complex gz = g_1d_free(dz, Complex(req.energy - eps_n, req.eta), m);
                    level += w * std::exp(kI * k_x * dxs) * un_a * un_b * gz;
                }
            }
        }
        Complex term = level / (2.0 * M_PI * c.l2);
        acc += term;
        tail3[n % 3] = std::abs(term);
        if (n >= n_lim - 1) {
            const double t = std::max({tail3[0], tail3[1], tail3[2]});
            if (t < tol * (std::abs(acc) + 1e-300)) break;
        }
        if (n > n_cap) break;
    }
    const Complex gauge =
        std::exp(kI * (0.5 * qb * (c.xs * c.ys - c.xps * c.yps)));
    out.value = gauge * acc;
    out.converged = true;
    out.est_error = 3.0 * std::max({tail3[0], tail3[1], tail3[2]}) +
                    1e-10 * std::abs(acc);
    return out;
}

GreenValue evaluate(const GreenRequest& req) {
    if (req.method == Method::laplace_quadrature) return g_laplace(req);
    if (req.method == Method::landau_sum) return g_landau(req);
    if (req.method == Method::closed_form) {
        if (req.field.has_magnetic())
            throw std::invalid_argument("evaluate: no closed form with B > 0");
        if (req.field.force.norm() > 0)
            return g_field(req.r, req.rp, req.energy, req.field);
        return g_free(req.r, req.rp, req.energy, req.field.mass);
    }
    // auto
    if (!req.field.has_magnetic()) {
        if (req.field.force.norm() > 0)
            return g_field(req.r, req.rp, req.energy, req.field);
        return g_free(req.r, req.rp, req.energy, req.field.mass);
    }
    const bool perp = std::hypot(req.field.force.x, req.field.force.y) >
                      1e-12 * (std::abs(req.field.force.z) + 1.0);
    if (perp) return g_landau(req);
    return g_laplace(req);
}

double coincidence_im(const Vec3& r, double energy,
                      const propagators::FieldConfig& field, double eta) {
    field.validate();
    const double m = field.mass;
    if (!field.has_magnetic()) {
        const double fmag = field.force.norm();
        if (fmag == 0) return g_free_coincidence_im(energy, m);
        const Vec3 fhat = field.force / fmag;
        const double beta = std::cbrt(1.0 / (2.0 * m * fmag));
        const double alpha = -(energy / fmag + fhat.dot(r)) / beta;
        specfun::AiryPair p = specfun::airy(alpha);
        return (0.5 * m / beta) * (alpha * p.ai * p.ai - p.ai_prime * p.ai_prime);
    }

    if (!(eta > 0)) throw std::invalid_argument("coincidence_im: eta must be > 0");
    const double omega = field.cyclotron_frequency();
    const double f_perp = std::hypot(field.force.x, field.force.y);
    const double f_par = field.force.z;
    const bool has_perp = f_perp > 1e-12 * (std::abs(f_par) + 1.0);
    const double tol = 1e-10;
    const int n_floor = static_cast<int>(std::ceil(
                            (std::max(energy, 0.0) + 10.0 * std::max(eta, omega)) /
                            omega)) +
                        10;

    const double l2 = 1.0 / (m * omega);
    double acc = 0;
    if (!has_perp) {
        for (int n = 0; n < 100000; ++n) {
            const double eps = energy - (n + 0.5) * omega;
            double im_gz;
            if (std::abs(f_par) > 0) {
                const double beta = std::cbrt(1.0 / (2.0 * m * std::abs(f_par)));
                const double alpha =
                    -(eps / std::abs(f_par) + (f_par > 0 ? r.z : -r.z)) / beta;
                double ai = specfun::airy(alpha).ai;
                im_gz = -2.0 * M_PI * m * beta * ai * ai;
            } else {
                im_gz = g_1d_free(0.0, Complex(eps, eta), m).imag();
            }
            const double term = im_gz / (2.0 * M_PI * l2);
            acc += term;
            if (n >= n_floor && std::abs(term) < tol * (std::abs(acc) + 1e-300)) break;
        }
        return acc;
    }

    // crossed fields at coincidence
    propagators::FieldConfig f = field;
    CrossedSetup c = crossed_setup(r, r, f);
    std::vector<double> phi;
    const int n_lim = static_cast<int>(std::ceil(
                          (std::max(energy, 0.0) + c.vd2_half +
                           10.0 * std::max(eta, omega)) /
                          omega)) +
                      10;
    for (int n = 0; n < std::max(n_lim, 1) + 1; ++n) {
        const double reach = c.l * (std::sqrt(2.0 * n + 1.0) + 7.0);
        const int panels = std::max(
            24, static_cast<int>(std::ceil(2.0 * reach / c.l *
                                           std::sqrt(2.0 * n + 1.0) / M_PI)) +
                    8);
        const double h = 2.0 * reach / panels;
        double level = 0;
        for (int p = 0; p < panels; ++p) {
            const double mid = c.ys - reach + (p + 0.5) * h;
            for (int g = 0; g < 5; ++g) {
                for (double sgn : {-1.0, 1.0}) {
                    const double yc = mid + sgn * 0.5 * h * kGx10[g];
                    const double w = 0.5 * h * kGw10[g];
                    hermite_functions((c.ys - yc) / c.l, n, phi);
                    const double un = phi[n] / std::sqrt(c.l);
                    const double eps_n = (n + 0.5) * omega + c.vd2_half - c.f_perp * yc;
                    level += w * un * un *
                             g_1d_free(0.0, Complex(energy - eps_n, eta), m).imag();
                }
            }
        }
        const double term = level / (2.0 * M_PI * c.l2);
        acc += term;
        if (n >= n_lim && std::abs(term) < tol * (std::abs(acc) + 1e-300)) break;
    }
    return acc;
}

} // namespace qsrc::greens
