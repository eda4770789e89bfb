#include "qsrc/observables.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qsrc::observables {

namespace {

const double kGx10[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                         0.8650633666889845, 0.9739065285171717};
const double kGw10[5] = {0.2955242247147529, 0.2692667193099964, 0.2190863625159820,
                         0.1494513491505806, 0.0666713443086881};

struct Nodes {
    std::vector<double> x, w;
};

Nodes gauss_legendre(int n) {
    Nodes g;
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

// Gauss-Hermite nodes/weights for weight e^{-t^2} (physicists' convention).
Nodes gauss_hermite(int n) {
    Nodes g;
    g.x.resize(n);
    g.w.resize(n);
    const double pif = std::pow(M_PI, -0.25);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x;
        if (i == 0)
            x = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            x = g.x[n - 1] - 1.14 * std::pow(n, 0.426) / g.x[n - 1];
        else if (i == 2)
            x = 1.86 * g.x[n - 2] - 0.86 * g.x[n - 1];
        else if (i == 3)
            x = 1.91 * g.x[n - 2] - 0.91 * g.x[n - 3];
        else
            x = 2.0 * g.x[n - i] - g.x[n - i + 1];
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = pif, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = x * std::sqrt(2.0 / (j + 1.0)) * p1 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p2;
            }
            pp = std::sqrt(2.0 * n) * p1;
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-14) break;
        }
        g.x[n - 1 - i] = x;
        g.x[i] = -x;
        g.w[n - 1 - i] = g.w[i] = 2.0 / (pp * pp);
    }
    return g;
}

} // namespace

CurrentField current_density(const sources::WaveGrid& w,
                             const propagators::FieldConfig& field) {
    const GridGeometry& g = w.geom;
    g.validate();
    if (g.nx < 9 || g.ny < 9 || g.nz < 9)
        throw std::invalid_argument(
            "current_density: grid must be at least 9 samples per axis");
    if (w.psi.size() != g.size())
        throw std::invalid_argument("current_density: sample count mismatch");

    const double m = field.mass;
    const double q = field.charge_sign;
    const double b = field.b_field;

    auto psi = [&](int ix, int iy, int iz) { return w.psi[g.index(ix, iy, iz)]; };

    CurrentField out;
    out.geom = g;
    out.j.assign(g.size(), Vec3{});
    out.divergence_residual.assign(g.size(), 0.0);
    out.valid.assign(g.size(), 0);

    std::vector<Vec3> j2(g.size(), Vec3{});

    auto grad_at = [&](int ix, int iy, int iz, bool fourth) {
        auto d1 = [&](int axis) {
            auto at = [&](int o) {
                int jx = ix, jy = iy, jz = iz;
                (axis == 0 ? jx : axis == 1 ? jy : jz) += o;
                return psi(jx, jy, jz);
            };
            const double h = axis == 0 ? g.spacing.x : axis == 1 ? g.spacing.y
                                                                 : g.spacing.z;
            if (fourth)
                return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
            return (at(1) - at(-1)) / (2.0 * h);
        };
        return std::array<Complex, 3>{d1(0), d1(1), d1(2)};
    };

    double max_j = 0;
    for (int iz = 2; iz < g.nz - 2; ++iz) {
        for (int iy = 2; iy < g.ny - 2; ++iy) {
            for (int ix = 2; ix < g.nx - 2; ++ix) {
                const std::size_t idx = g.index(ix, iy, iz);
                const Complex p = psi(ix, iy, iz);
                const Complex pc = std::conj(p);
                auto g4 = grad_at(ix, iy, iz, true);
                auto g2 = grad_at(ix, iy, iz, false);
                Vec3 v4{(pc * g4[0]).imag() / m, (pc * g4[1]).imag() / m,
                        (pc * g4[2]).imag() / m};
                Vec3 v2{(pc * g2[0]).imag() / m, (pc * g2[1]).imag() / m,
                        (pc * g2[2]).imag() / m};
                if (q != 0 && b != 0) {
                    const Vec3 r = g.point(ix, iy, iz);
                    const Vec3 a{-0.5 * b * r.y, 0.5 * b * r.x, 0.0};
                    const double dens = std::norm(p);
                    v4 = v4 - a * (q * dens / m);
                    v2 = v2 - a * (q * dens / m);
                }
                out.j[idx] = v4;
                j2[idx] = v2;
                max_j = std::max(max_j, v4.norm());
            }
        }
    }

    // coarseness police: 2nd vs 4th order must agree to 5%
    double worst = 0;
    for (int iz = 2; iz < g.nz - 2; ++iz)
        for (int iy = 2; iy < g.ny - 2; ++iy)
            for (int ix = 2; ix < g.nx - 2; ++ix) {
                const std::size_t idx = g.index(ix, iy, iz);
                worst = std::max(worst, (out.j[idx] - j2[idx]).norm());
            }
    if (max_j > 0 && worst > 0.05 * max_j)
        throw std::runtime_error(
            "current_density: grid too coarse (2nd/4th order mismatch above 5%)");

    // divergence of j, 4th order again; defined a further 2 cells inside
    for (int iz = 4; iz < g.nz - 4; ++iz) {
        for (int iy = 4; iy < g.ny - 4; ++iy) {
            for (int ix = 4; ix < g.nx - 4; ++ix) {
                auto dj = [&](int axis) {
                    auto at = [&](int o) {
                        int jx = ix, jy = iy, jz = iz;
                        (axis == 0 ? jx : axis == 1 ? jy : jz) += o;
                        const Vec3& v = out.j[g.index(jx, jy, jz)];
                        return axis == 0 ? v.x : axis == 1 ? v.y : v.z;
                    };
                    const double h = axis == 0 ? g.spacing.x
                                               : axis == 1 ? g.spacing.y : g.spacing.z;
                    return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
                };
                const std::size_t idx = g.index(ix, iy, iz);
                out.divergence_residual[idx] = dj(0) + dj(1) + dj(2);
                out.valid[idx] = 1;
            }
        }
    }
    return out;
}

std::vector<double> continuity_residual(const sources::WaveGrid& w,
                                        const CurrentField& c,
                                        const sources::SourceSpec& s) {
    const GridGeometry& g = w.geom;
    if (c.geom.nx != g.nx || c.geom.ny != g.ny || c.geom.nz != g.nz ||
        (c.geom.origin - g.origin).norm() != 0.0)
        throw std::invalid_argument("continuity_residual: grid mismatch");

    std::vector<double> res(g.size(), 0.0);
    for (int iz = 0; iz < g.nz; ++iz)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                const std::size_t idx = g.index(ix, iy, iz);
                if (!c.valid[idx]) continue;
                double src = 0;
                if (s.kind == sources::SourceKind::gaussian) {
                    Complex sig = sources::sigma_eval(s, g.point(ix, iy, iz));
                    src = 2.0 * (std::conj(sig) * w.psi[idx]).imag();
                }
                res[idx] = c.divergence_residual[idx] + src;
            }
    return res;
}

double total_current(const sources::SourceSpec& s,
                     const propagators::FieldConfig& field,
                     const TotalCurrentOptions& opt) {
    s.validate();
    field.validate();
    const double m = field.mass;
    const double str2 = std::norm(s.strength);

    if (s.kind == sources::SourceKind::point)
        return -2.0 * str2 *
               greens::coincidence_im(s.position, s.energy, field,
                                      field.has_magnetic() ? opt.eta : 0.0);

    const double a = s.width;
    const bool free_space = !field.has_magnetic() && field.force.norm() == 0.0;

    if (free_space) {
        // J = -2 Im int d3u C(u) G(u), C = Gaussian autocorrelation
        if (s.energy <= 0) return 0.0;
        const double k = std::sqrt(2.0 * m * s.energy);
        const double norm = str2 * std::pow(4.0 * M_PI * a * a, -1.5);
        const double umax = 10.0 * a + 2.0 * M_PI / k;
        const int panels = std::max(24, static_cast<int>(umax * k / 2.0) + 8);
        const double h = umax / panels;
        double acc = 0;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * h;
            for (int gq = 0; gq < 5; ++gq)
                for (double sgn : {-1.0, 1.0}) {
                    const double u = mid + sgn * 0.5 * h * kGx10[gq];
                    const double w = 0.5 * h * kGw10[gq];
                    const double im_g = -(m / (2.0 * M_PI)) * std::sin(k * u) / u;
                    acc += w * 4.0 * M_PI * u * u * std::exp(-u * u / (4.0 * a * a)) * im_g;
                }
        }
        return -2.0 * norm * acc;
    }

    // bilinear quadrature in mean/relative coordinates:
    //   R Gauss-Hermite (weight e^{-|R - r0|^2/a^2}), u spherical
    auto green = [&](const Vec3& r, const Vec3& rp) {
        if (!field.has_magnetic()) return greens::g_field(r, rp, s.energy, field).value;
        greens::GreenRequest rq;
        rq.r = r;
        rq.rp = rp;
        rq.energy = s.energy;
        rq.field = field;
        rq.eta = opt.eta;
        return greens::evaluate(rq).value;
    };

    auto bilinear_im = [&](int n_r, int rad_panels, int n_theta, int n_phi) {
        const Nodes gh = gauss_hermite(n_r);
        const Nodes gt = gauss_legendre(n_theta);
        const double umax = 9.0 * a;
        const double h = umax / rad_panels;
        double acc = 0;
        for (int iR = 0; iR < n_r; ++iR)
            for (int jR = 0; jR < n_r; ++jR)
                for (int kR = 0; kR < n_r; ++kR) {
                    const Vec3 R = s.position +
                                   Vec3{gh.x[iR], gh.x[jR], gh.x[kR]} * a;
                    const double wR = gh.w[iR] * gh.w[jR] * gh.w[kR];
                    double inner = 0;
                    for (int p = 0; p < rad_panels; ++p) {
                        const double midu = (p + 0.5) * h;
                        for (int gq = 0; gq < 5; ++gq)
                            for (double sgn : {-1.0, 1.0}) {
                                const double u = midu + sgn * 0.5 * h * kGx10[gq];
                                const double wu = 0.5 * h * kGw10[gq] * u * u *
                                                  std::exp(-u * u / (4.0 * a * a));
                                double shell = 0;
                                for (int it = 0; it < n_theta; ++it) {
                                    const double ct = gt.x[it];
                                    const double st =
                                        std::sqrt(std::max(0.0, 1.0 - ct * ct));
                                    double ring = 0;
                                    for (int ip = 0; ip < n_phi; ++ip) {
                                        const double phi = 2.0 * M_PI * ip / n_phi;
                                        const Vec3 du{0.5 * u * st * std::cos(phi),
                                                      0.5 * u * st * std::sin(phi),
                                                      0.5 * u * ct};
                                        ring += green(R + du, R - du).imag();
                                    }
                                    shell += gt.w[it] * ring * (2.0 * M_PI / n_phi);
                                }
                                inner += wu * shell;
                            }
                    }
                    acc += wR * inner;
                }
        // a^3 from the R substitution; sigma* sigma prefactor (2 pi a^2)^{-3}
        return acc * str2 * std::pow(2.0 * M_PI * a * a, -3.0) * a * a * a;
    };

    double lo = bilinear_im(8, 3, 10, 12);
    double hi = bilinear_im(10, 4, 12, 16);
    if (std::abs(hi - lo) > 20.0 * opt.tol * std::abs(hi)) {
        lo = hi;
        hi = bilinear_im(12, 5, 16, 20);
        if (std::abs(hi - lo) > 100.0 * opt.tol * std::abs(hi))
            throw std::runtime_error("total_current: bilinear quadrature did not converge");
    }
    return -2.0 * hi;
}

namespace {

// Catmull-Rom weights for fractional offset u in [0, 1)
std::array<double, 4> catmull_rom(double u) {
    const double u2 = u * u, u3 = u2 * u;
    return {0.5 * (-u3 + 2.0 * u2 - u), 0.5 * (3.0 * u3 - 5.0 * u2 + 2.0),
            0.5 * (-3.0 * u3 + 4.0 * u2 + u), 0.5 * (u3 - u2)};
}

Vec3 interp_j(const CurrentField& c, const Vec3& p) {
    const GridGeometry& g = c.geom;
    const double fx = (p.x - g.origin.x) / g.spacing.x;
    const double fy = (p.y - g.origin.y) / g.spacing.y;
    const double fz = (p.z - g.origin.z) / g.spacing.z;
    const int ix = static_cast<int>(std::floor(fx));
    const int iy = static_cast<int>(std::floor(fy));
    const int iz = static_cast<int>(std::floor(fz));
    // stencil [i-1, i+2] must stay in the region where j was computed
    if (ix - 1 < 2 || ix + 2 > g.nx - 3 || iy - 1 < 2 || iy + 2 > g.ny - 3 ||
        iz - 1 < 2 || iz + 2 > g.nz - 3)
        throw std::invalid_argument("flux_through_surface: surface exits grid");
    auto wx = catmull_rom(fx - ix);
    auto wy = catmull_rom(fy - iy);
    auto wz = catmull_rom(fz - iz);
    Vec3 acc{};
    for (int a = -1; a <= 2; ++a)
        for (int b = -1; b <= 2; ++b)
            for (int cc = -1; cc <= 2; ++cc) {
                const double w = wx[a + 1] * wy[b + 1] * wz[cc + 1];
                acc = acc + c.j[g.index(ix + a, iy + b, iz + cc)] * w;
            }
    return acc;
}

} // namespace

double flux_through_surface(const CurrentField& c, const SphereSpec& sphere) {
    if (!(sphere.radius > 0))
        throw std::invalid_argument("flux_through_surface: radius must be > 0");
    double prev = 0;
    bool have_prev = false;
    for (int n = 12; n <= 192; n *= 2) {
        const Nodes gt = gauss_legendre(n);
        const int nphi = 2 * n;
        double acc = 0;
        for (int it = 0; it < n; ++it) {
            const double ct = gt.x[it];
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            double ring = 0;
            for (int ip = 0; ip < nphi; ++ip) {
                const double phi = 2.0 * M_PI * ip / nphi;
                const Vec3 nrm{st * std::cos(phi), st * std::sin(phi), ct};
                const Vec3 p = sphere.center + nrm * sphere.radius;
                ring += interp_j(c, p).dot(nrm);
            }
            acc += gt.w[it] * ring * (2.0 * M_PI / nphi);
        }
        acc *= sphere.radius * sphere.radius;
        if (have_prev && std::abs(acc - prev) <= 1e-5 * (std::abs(acc) + 1e-300))
            return acc;
        prev = acc;
        have_prev = true;
    }
    return prev;
}

double flux_through_surface(const CurrentField& c, const PlaneSpec& plane) {
    const Vec3 nvec = plane.edge_u.cross(plane.edge_v);
    const double area = nvec.norm();
    if (!(area > 0))
        throw std::invalid_argument("flux_through_surface: degenerate plane");
    const Vec3 nrm = nvec / area;
    double prev = 0;
    bool have_prev = false;
    for (int n = 8; n <= 128; n *= 2) {
        const Nodes g = gauss_legendre(n);
        double acc = 0;
        for (int iu = 0; iu < n; ++iu)
            for (int iv = 0; iv < n; ++iv) {
                const double su = 0.5 * (g.x[iu] + 1.0);
                const double sv = 0.5 * (g.x[iv] + 1.0);
                const Vec3 p = plane.origin + plane.edge_u * su + plane.edge_v * sv;
                acc += 0.25 * g.w[iu] * g.w[iv] * interp_j(c, p).dot(nrm);
            }
        acc *= area;
        if (have_prev && (std::abs(acc - prev) <= 1e-5 * std::abs(acc) ||
                          std::abs(acc - prev) <= 1e-14))
            return acc;
        prev = acc;
        have_prev = true;
    }
    return prev;
}

Spectrum dos(const Vec3& r, const std::vector<double>& energies,
             const propagators::FieldConfig& field, double eta) {
    if (energies.size() < 2)
        throw std::invalid_argument("dos: need at least two energies");
    for (std::size_t i = 1; i < energies.size(); ++i)
        if (!(energies[i] > energies[i - 1]))
            throw std::invalid_argument("dos: energies must be strictly increasing");

    Spectrum sp;
    sp.energies = energies;
    sp.eta = eta;
    sp.values.reserve(energies.size());
    for (double e : energies) {
        double n = -greens::coincidence_im(r, e, field, eta) / M_PI;
        if (!std::isfinite(n)) throw std::runtime_error("dos: non-finite value");
        sp.values.push_back(n);
    }
    return sp;
}

} // namespace qsrc::observables
