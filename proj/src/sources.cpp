#include "qsrc/sources.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include "qsrc/parallel.hpp"
#include "qsrc/specfun.hpp"

namespace qsrc::sources {

namespace {

const double kGx10[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                         0.8650633666889845, 0.9739065285171717};
const double kGw10[5] = {0.2955242247147529, 0.2692667193099964, 0.2190863625159820,
                         0.1494513491505806, 0.0666713443086881};

struct Gl {
    std::vector<double> x, w;
};

// n-point Gauss-Legendre on [-1, 1] by Newton iteration on P_n
Gl gauss_legendre_build(int n) {
    Gl g;
    g.x.resize(n);
    g.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        g.x[i] = -x;
        g.x[n - 1 - i] = x;
        g.w[i] = g.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return g;
}

const Gl& gauss_legendre(int n) {
    static std::map<int, Gl> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_legendre_build(n)).first;
    return it->second;
}

// Per-call Green evaluator with the field frame hoisted out of the node loop.
struct GreenEval {
    enum class Kind { free, field, general } kind = Kind::general;
    double energy = 0;
    double mass = 1;
    // field case precomputation
    double fmag = 0, beta = 0;
    Vec3 fhat{};
    propagators::FieldConfig field{};

    static GreenEval make(double energy, const propagators::FieldConfig& f) {
        GreenEval g;
        g.energy = energy;
        g.mass = f.mass;
        g.field = f;
        if (f.has_magnetic()) {
            g.kind = Kind::general;
        } else if (f.force.norm() > 0) {
            g.kind = Kind::field;
            g.fmag = f.force.norm();
            g.fhat = f.force / g.fmag;
            g.beta = std::cbrt(1.0 / (2.0 * f.mass * g.fmag));
        } else {
            g.kind = Kind::free;
        }
        return g;
    }

    Complex operator()(const Vec3& r, const Vec3& rp) const {
        switch (kind) {
            case Kind::free: {
                const double d = (r - rp).norm();
                if (energy >= 0) {
                    const double k = std::sqrt(2.0 * mass * energy);
                    return -(mass / (2.0 * M_PI)) *
                           std::exp(Complex(0.0, k * d)) / d;
                }
                const double kappa = std::sqrt(-2.0 * mass * energy);
                return Complex(-(mass / (2.0 * M_PI)) * std::exp(-kappa * d) / d, 0.0);
            }
            case Kind::field: {
                const double d = (r - rp).norm();
                const double mid = 0.5 * fhat.dot(r + rp);
                const double a_dn = -(energy / fmag + mid + 0.5 * d) / beta;
                const double a_up = -(energy / fmag + mid - 0.5 * d) / beta;
                if (std::max(a_dn, a_up) <= 90.0) {
                    specfun::AiryPair up = specfun::airy(a_up);
                    specfun::CiValue dn = specfun::ci(a_dn);
                    return (0.5 * mass / d) *
                           (dn.value * up.ai_prime - dn.derivative * up.ai);
                }
                return greens::g_field(r, rp, energy, field).value;
            }
            default: {
                greens::GreenRequest rq;
                rq.r = r;
                rq.rp = rp;
                rq.energy = energy;
                rq.field = field;
                return greens::evaluate(rq).value;
            }
        }
    }
};

Complex green_at(const Vec3& r, const Vec3& rp, double energy,
                 const propagators::FieldConfig& field) {
    return GreenEval::make(energy, field)(r, rp);
}

// Gaussian convolution, far path: tensor Gauss-Legendre around the source
// center over [-L a, L a]^3 with the Gaussian weight in the integrand.  Node
// counts are per axis: the phase gradient of G is steep along the line of
// sight and shallow across it.
Complex convolve_far(const SourceSpec& s, const GreenEval& ge, const Vec3& r,
                     const std::array<int, 3>& n, double L) {
    const Gl& gx = gauss_legendre(n[0]);
    const Gl& gy = gauss_legendre(n[1]);
    const Gl& gz = gauss_legendre(n[2]);
    const double a = s.width;
    const double norm = std::pow(2.0 * M_PI * a * a, -1.5);
    Complex acc = 0;
    for (int iz = 0; iz < n[2]; ++iz) {
        const double tz = L * gz.x[iz];
        for (int iy = 0; iy < n[1]; ++iy) {
            const double ty = L * gy.x[iy];
            Complex row = 0;
            for (int ix = 0; ix < n[0]; ++ix) {
                const double tx = L * gx.x[ix];
                Vec3 rp = s.position + Vec3{tx, ty, tz} * a;
                double t2 = tx * tx + ty * ty + tz * tz;
                row += gx.w[ix] * std::exp(-0.5 * t2) * ge(r, rp);
            }
            acc += gy.w[iy] * gz.w[iz] * row;
        }
    }
    const double scale = L * a;
    return s.strength * norm * acc * scale * scale * scale;
}

// Near path for targets inside/near the source support: spherical coordinates
// about the target kill the 1/|r - r'| singularity of the Green function.
Complex convolve_near(const SourceSpec& s, const GreenEval& ge, const Vec3& r,
                      int n_theta, int n_phi, double L) {
    const double a = s.width;
    const double rmax = (r - s.position).norm() + L * a;
    const double norm = std::pow(2.0 * M_PI * a * a, -1.5);
    const Gl& gt = gauss_legendre(n_theta);
    const int radial_panels = std::max(6, static_cast<int>(std::ceil(rmax / (0.7 * a))));
    const double h = rmax / radial_panels;

    Complex acc = 0;
    for (int ip = 0; ip < radial_panels; ++ip) {
        const double mid = (ip + 0.5) * h;
        for (int gq = 0; gq < 5; ++gq) {
            for (double sgn : {-1.0, 1.0}) {
                const double d = mid + sgn * 0.5 * h * kGx10[gq];
                const double wr = 0.5 * h * kGw10[gq] * d * d;
                Complex shell = 0;
                for (int it = 0; it < n_theta; ++it) {
                    const double ct = gt.x[it];
                    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
                    Complex ring = 0;
                    for (int iph = 0; iph < n_phi; ++iph) {
                        const double phi = 2.0 * M_PI * iph / n_phi;
                        Vec3 rp{r.x + d * st * std::cos(phi),
                                r.y + d * st * std::sin(phi), r.z + d * ct};
                        const double q2 = (rp - s.position).norm2() / (a * a);
                        if (q2 > 2.0 * L * L + 40.0) continue;
                        ring += std::exp(-0.5 * q2) * ge(r, rp);
                    }
                    shell += gt.w[it] * ring * (2.0 * M_PI / n_phi);
                }
                acc += wr * shell;
            }
        }
    }
    return s.strength * norm * acc;
}

} // namespace

Complex sigma_eval(const SourceSpec& s, const Vec3& r) {
    s.validate();
    if (s.kind == SourceKind::point)
        throw std::invalid_argument(
            "sigma_eval: point sources are distributional; use scatter_wave");
    const double a = s.width;
    const double q2 = (r - s.position).norm2() / (a * a);
    return s.strength * std::pow(2.0 * M_PI * a * a, -1.5) * std::exp(-0.5 * q2);
}

Complex scatter_wave_at(const SourceSpec& s, const propagators::FieldConfig& field,
                        const Vec3& r, double* est_rel, double tol,
                        bool check_truncation) {
    s.validate();
    if (s.kind == SourceKind::point) {
        if (est_rel) *est_rel = 1e-12;
        return s.strength * green_at(r, s.position, s.energy, field);
    }

    const double a = s.width;
    const double dist = (r - s.position).norm();
    const GreenEval ge = GreenEval::make(s.energy, field);
    if (dist > 7.0 * a) {
        // phase of G across the source window sets the node counts; Legendre
        // convergence beyond them is spectral, so one confirm step suffices
        const double e_loc = std::abs(s.energy) + field.force.norm() * 6.0 * a +
                             field.cyclotron_frequency();
        const double k_loc = std::sqrt(2.0 * field.mass * e_loc);
        const Vec3 dir = (r - s.position) / dist;
        const double spread = 6.0 * a / dist + 0.08;  // window opening angle
        auto n_axis = [&](double u) {
            const double freq = k_loc * (std::abs(u) + spread);
            const double cycles = 12.0 * a * freq / (2.0 * M_PI);
            // floor of 22 resolves the Gaussian weight itself
            return std::max(22, static_cast<int>(std::ceil(4.0 * cycles)) + 16);
        };
        std::array<int, 3> n_est{n_axis(dir.x), n_axis(dir.y), n_axis(dir.z)};

        auto scaled = [&](double f) {
            std::array<int, 3> n;
            for (int i = 0; i < 3; ++i)
                n[i] = std::max(16, static_cast<int>(std::lround(f * n_est[i])));
            return n;
        };
        Complex prev = convolve_far(s, ge, r, n_est, 6.0);
        double factor = 1.3;
        Complex cur = convolve_far(s, ge, r, scaled(factor), 6.0);
        double change = std::abs(cur - prev) / (std::abs(cur) + 1e-300);
        for (int extra = 0; extra < 3 && change > 0.3 * tol; ++extra) {
            factor *= 1.45;
            prev = cur;
            cur = convolve_far(s, ge, r, scaled(factor), 6.0);
            change = std::abs(cur - prev) / (std::abs(cur) + 1e-300);
        }
        if (est_rel) {
            if (check_truncation) {
                // truncation: 6a window against 8a at comparable node density
                Complex wide = convolve_far(s, ge, r, scaled(factor * 8.0 / 6.0), 8.0);
                double trunc = std::abs(wide - cur) / (std::abs(cur) + 1e-300);
                *est_rel = change + trunc;
            } else {
                *est_rel = change;
            }
        }
        return cur;
    }

    Complex prev = convolve_near(s, ge, r, 20, 32, 8.0);
    Complex cur = convolve_near(s, ge, r, 30, 48, 8.0);
    double change = std::abs(cur - prev) / (std::abs(cur) + 1e-300);
    if (change > tol) {
        prev = cur;
        cur = convolve_near(s, ge, r, 44, 72, 8.0);
        change = std::abs(cur - prev) / (std::abs(cur) + 1e-300);
    }
    if (est_rel) *est_rel = change;
    return cur;
}

WaveGrid scatter_wave(const SourceSpec& s, const propagators::FieldConfig& field,
                      const GridGeometry& grid, const ScatterOptions& opt) {
    std::array<SourceSpec, 1> one{s};
    return scatter_wave(std::span<const SourceSpec>(one), field, grid, opt);
}

WaveGrid scatter_wave(std::span<const SourceSpec> sources,
                      const propagators::FieldConfig& field, const GridGeometry& grid,
                      const ScatterOptions& opt) {
    grid.validate();
    if (sources.empty()) throw std::invalid_argument("scatter_wave: no sources");
    for (const auto& s : sources) {
        s.validate();
        if (s.energy != sources.front().energy)
            throw std::invalid_argument(
                "scatter_wave: all sources must share one energy");
    }

    // standoff: point sources must not coincide with grid samples
    const double spacing_min =
        std::min({grid.nx > 1 ? grid.spacing.x : 1e300,
                  grid.ny > 1 ? grid.spacing.y : 1e300,
                  grid.nz > 1 ? grid.spacing.z : 1e300});
    const double standoff =
        (spacing_min < 1e300 ? spacing_min : 0.0) * opt.standoff_spacings;

    WaveGrid out;
    out.geom = grid;
    out.psi.assign(grid.size(), Complex{});
    std::vector<double> errs(grid.size(), 0.0);

    for (const auto& s : sources) {
        if (s.kind != SourceKind::point) continue;
        for (int iz = 0; iz < grid.nz; ++iz)
            for (int iy = 0; iy < grid.ny; ++iy)
                for (int ix = 0; ix < grid.nx; ++ix)
                    if ((grid.point(ix, iy, iz) - s.position).norm() < standoff)
                        throw std::invalid_argument(
                            "scatter_wave: grid point inside point-source standoff");
    }

    parallel_for(
        grid.size(),
        [&](std::size_t idx) {
            const int ix = static_cast<int>(idx % grid.nx);
            const int iy = static_cast<int>((idx / grid.nx) % grid.ny);
            const int iz = static_cast<int>(idx / (static_cast<std::size_t>(grid.nx) * grid.ny));
            const Vec3 p = grid.point(ix, iy, iz);
            Complex acc = 0;
            double err = 0;
            for (const auto& s : sources) {
                double e = 0;
                acc += scatter_wave_at(s, field, p, &e, opt.tol, false);
                err += e;
            }
            out.psi[idx] = acc;
            errs[idx] = err;
        },
        opt.threads);

    double worst = 0;
    for (double e : errs) worst = std::max(worst, e);

    // truncation of the 6a convolution window, probed at grid extremes (the
    // window-truncation error varies smoothly across samples)
    double trunc_worst = 0;
    bool any_gaussian = false;
    for (const auto& s : sources)
        if (s.kind == SourceKind::gaussian) any_gaussian = true;
    if (any_gaussian) {
        for (int iz : {0, grid.nz / 2, grid.nz - 1})
            for (int ix : {0, grid.nx / 2, grid.nx - 1}) {
                const Vec3 p = grid.point(ix, grid.ny / 2, iz);
                for (const auto& s : sources) {
                    if (s.kind != SourceKind::gaussian) continue;
                    double e_full = 0, e_cheap = 0;
                    scatter_wave_at(s, field, p, &e_full, opt.tol, true);
                    scatter_wave_at(s, field, p, &e_cheap, opt.tol, false);
                    trunc_worst = std::max(trunc_worst, e_full - e_cheap);
                }
            }
    }
    out.est_error = worst + std::max(trunc_worst, 0.0);
    return out;
}

VirtualSource virtual_point_source(const SourceSpec& gaussian,
                                   const propagators::FieldConfig& field,
                                   double target_distance) {
    gaussian.validate();
    if (gaussian.kind != SourceKind::gaussian)
        throw std::invalid_argument("virtual_point_source: needs a gaussian source");
    if (field.has_magnetic())
        throw std::invalid_argument("virtual_point_source: uniform force field only");
    const double fmag = field.force.norm();
    if (!(fmag > 0))
        throw std::invalid_argument("virtual_point_source: needs a nonzero force");

    const double m = field.mass;
    const double a = gaussian.width;
    const double beta = std::cbrt(1.0 / (2.0 * m * fmag));
    if (target_distance < 10.0 * std::max(a, beta))
        throw std::invalid_argument(
            "virtual_point_source: target closer than the far-field validity bound");

    // saddle-point matching of the convolved far field: the O(a^4) phase of
    // the Gaussian-filtered semiclassical branches equals a source shift of
    // a^4/(4 beta^3) against the force; the surviving Gaussian damping at the
    // emission momentum rescales the strength.
    const double shift = std::pow(a, 4) / (4.0 * beta * beta * beta);
    const Vec3 fhat = field.force / fmag;

    VirtualSource v;
    v.displacement = fhat * (-shift);
    v.point.kind = SourceKind::point;
    v.point.width = 0;
    v.point.position = gaussian.position + v.displacement;
    v.point.energy = gaussian.energy;
    v.point.strength =
        gaussian.strength * std::exp(-m * gaussian.energy * a * a);
    v.effective_energy = gaussian.energy - fmag * shift;
    return v;
}

} // namespace qsrc::sources
