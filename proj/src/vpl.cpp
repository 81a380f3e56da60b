#include "kinetic/vpl.hpp"

#include "kinetic/convolution.hpp"
#include "kinetic/landau.hpp"
#include "kinetic/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kinetic {

ForceField compute_force(const ScalarField& rho, double coupling) {
    const GridSpec& g = rho.grid();
    Convolver conv(g);
    auto rho_hat = conv.forward_field(rho);
    ForceField F;
    F.coupling = coupling;
    for (int i = 0; i < 3; ++i) {
        F.comp[i] = conv.convolve(rho_hat, conv.forward_kernel(build_force_kernel_component(g, i)));
        F.comp[i] *= coupling;
    }
    return F;
}

GaussCheck gauss_law_check(const ForceField& F, const ScalarField& rho, double radius) {
    GaussCheck out;
    // sphere quadrature: uniform midpoint in mu and phi (smooth integrand)
    const int nmu = 24, nphi = 48;
    double flux = 0;
    for (int m = 0; m < nmu; ++m) {
        const double mu = -1.0 + 2.0 * (m + 0.5) / nmu;
        const double sq = std::sqrt(1.0 - mu * mu);
        for (int f = 0; f < nphi; ++f) {
            const double phi = 2.0 * M_PI * (f + 0.5) / nphi;
            const Vec3 n{sq * std::cos(phi), sq * std::sin(phi), mu};
            flux += F.tricubic(n * radius).dot(n);
        }
    }
    flux *= radius * radius * (2.0 / nmu) * (2.0 * M_PI / nphi);
    out.flux_over_4pi_c = flux / (4.0 * M_PI * F.coupling);

    const GridSpec& g = rho.grid();
    const double h = g.spacing();
    const double cell = h * h * h;
    const double band = 0.87 * h; // half-diagonal: cells possibly cut by the sphere
    double mass = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const Vec3 c = g.node(ix, iy, iz);
                const double r = c.norm();
                if (r <= radius - band) {
                    mass += rho(ix, iy, iz) * cell;
                } else if (r < radius + band) {
                    // antialiased boundary cells: subsampled inside fraction
                    int inside = 0;
                    const int m = 4;
                    for (int a = 0; a < m; ++a)
                        for (int b = 0; b < m; ++b)
                            for (int cc = 0; cc < m; ++cc) {
                                const Vec3 z{c.x + ((a + 0.5) / m - 0.5) * h, c.y + ((b + 0.5) / m - 0.5) * h,
                                             c.z + ((cc + 0.5) / m - 0.5) * h};
                                if (z.norm() <= radius) ++inside;
                            }
                    mass += rho(ix, iy, iz) * cell * inside / (m * m * m);
                }
            }
    out.enclosed_mass = mass;
    out.relative_gap = mass != 0.0 ? std::abs(out.flux_over_4pi_c - mass) / std::abs(mass) : std::abs(out.flux_over_4pi_c);
    return out;
}

double rescaled_force_identity(const std::function<double(const Vec3&)>& phi_rho,
                               const ScalarField& g_rho, double t, double coupling) {
    if (!(t < 0.0)) throw std::invalid_argument("rescaled_force_identity: t must be negative");
    const double mt = -t;
    const double xscale = std::pow(mt, 2.0 / 3.0);
    const GridSpec& gy = g_rho.grid();
    const GridSpec gx(gy.n, xscale * gy.extent);

    // combined density in x variables
    ScalarField combined = ScalarField::sample(gx, [&](const Vec3& x) {
        return phi_rho(x) + std::pow(mt, -2.0) * g_rho.tricubic(x / xscale);
    });
    ScalarField phi_only = ScalarField::sample(gx, [&](const Vec3& x) { return phi_rho(x); });

    ForceField lhs = compute_force(combined, coupling);
    ForceField f_phi = compute_force(phi_only, coupling);
    ForceField f_g = compute_force(g_rho, coupling);

    const double gfac = std::pow(mt, -4.0 / 3.0);
    double sup = 0;
    for (std::size_t i = 0; i < gx.size(); ++i) sup = std::max(sup, lhs.at_node(i).norm());

    double worst = 0;
    for (int iz = 0; iz < gx.n; ++iz)
        for (int iy = 0; iy < gx.n; ++iy)
            for (int ix = 0; ix < gx.n; ++ix) {
                const std::size_t id = gx.index(ix, iy, iz);
                const Vec3 y = gy.node(ix, iy, iz); // matched nodes: x = xscale * y
                const Vec3 rhs = f_phi.at_node(id) + gfac * f_g.tricubic(y);
                worst = std::max(worst, (lhs.at_node(id) - rhs).norm());
            }
    return sup > 0 ? worst / sup : 0.0;
}

namespace {
const SelfSimParams kVplParams{-3.0, -1.0 / 3.0};

void require_vpl_profile(const ProfileDecomposition& g) {
    if (g.q.size() > 0 && g.q.max_abs() > 0)
        throw std::invalid_argument("vpl: case (a) requires an integrable profile (q = 0)");
    if (g.rank() < 1) throw std::invalid_argument("vpl: profile has no separable content");
}
} // namespace

ScalarField vpl_profile_residual(const ProfileDecomposition& g, double coupling, const Vec3& y) {
    require_vpl_profile(g);
    const LandauParams lp = LandauParams::make(-3.0);

    // transport + collision part shared with the Landau profile machinery
    ScalarField out = profile_residual_at(g, kVplParams, y, landau_collision(lp));

    // force transport F[g](y) . grad_w g
    const GridSpec& gy = g.y_grid();
    ScalarField rho(gy);
    for (const auto& t : g.h) {
        const double bmass = integrate(t.b);
        rho.axpy(bmass, t.a);
    }
    ForceField F = compute_force(rho, coupling);
    const Vec3 Fy = F.tricubic(y);

    ScalarField gy_slice = g.slice_at_y(y);
    auto grad = gradient4(gy_slice);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += Fy.x * grad[0][i] + Fy.y * grad[1][i] + Fy.z * grad[2][i];
    return out;
}

VplEntropyReport vpl_entropy_functional(const ProfileDecomposition& g,
                                        const std::vector<double>& radii_w,
                                        const std::vector<double>& radii_y,
                                        double coupling, double floor_value) {
    require_vpl_profile(g);
    if (g.rank() != 1)
        throw std::invalid_argument("vpl_entropy_functional: rank-1 separable profiles only");
    const ScalarField& a = g.h[0].a;
    const ScalarField& b = g.h[0].b;
    if (a.min_value() < 0 || b.min_value() < 0)
        throw std::invalid_argument("vpl_entropy_functional: profile factors must be nonnegative");

    const GridSpec& gy = a.grid();
    const GridSpec& gw = b.grid();
    const double cy = std::pow(gy.spacing(), 3), cw = std::pow(gw.spacing(), 3);
    const LandauParams lp = LandauParams::make(-3.0);

    // log g = log a + log b (floored); g ln g - g = (a ln a) b + a (b ln b) - a b
    auto log_floor = [&](double v) { return std::log(std::max(v, floor_value)); };

    // 1D building blocks over y
    auto ysum = [&](double R2, const std::function<double(const Vec3&, double)>& f) {
        double acc = 0;
        for (int iz = 0; iz < gy.n; ++iz)
            for (int iy2 = 0; iy2 < gy.n; ++iy2)
                for (int ix = 0; ix < gy.n; ++ix) {
                    const Vec3 yv = gy.node(ix, iy2, iz);
                    acc += f(yv, a(ix, iy2, iz)) * cutoff_profile(yv.norm() / R2);
                }
        return acc * cy;
    };
    // y sums against the gradient of chi_{R2}
    auto ysum_grad = [&](double R2, const std::function<double(const Vec3&, double, const Vec3&)>& f) {
        double acc = 0;
        for (int iz = 0; iz < gy.n; ++iz)
            for (int iy2 = 0; iy2 < gy.n; ++iy2)
                for (int ix = 0; ix < gy.n; ++ix) {
                    const Vec3 yv = gy.node(ix, iy2, iz);
                    const double r = yv.norm();
                    if (r == 0.0) continue;
                    const double dchi = cutoff_profile_deriv(r / R2) / R2;
                    if (dchi == 0.0) continue;
                    acc += f(yv, a(ix, iy2, iz), yv / r * dchi);
                }
        return acc * cy;
    };
    auto wsum = [&](double R1, const std::function<double(const Vec3&, double)>& f) {
        double acc = 0;
        for (int iz = 0; iz < gw.n; ++iz)
            for (int iy2 = 0; iy2 < gw.n; ++iy2)
                for (int ix = 0; ix < gw.n; ++ix) {
                    const Vec3 wv = gw.node(ix, iy2, iz);
                    acc += f(wv, b(ix, iy2, iz)) * cutoff_profile(wv.norm() / R1);
                }
        return acc * cw;
    };
    auto wsum_grad = [&](double R1, const std::function<double(const Vec3&, double, const Vec3&)>& f) {
        double acc = 0;
        for (int iz = 0; iz < gw.n; ++iz)
            for (int iy2 = 0; iy2 < gw.n; ++iy2)
                for (int ix = 0; ix < gw.n; ++ix) {
                    const Vec3 wv = gw.node(ix, iy2, iz);
                    const double r = wv.norm();
                    if (r == 0.0) continue;
                    const double dchi = cutoff_profile_deriv(r / R1) / R1;
                    if (dchi == 0.0) continue;
                    acc += f(wv, b(ix, iy2, iz), wv / r * dchi);
                }
        return acc * cw;
    };

    // force field of the profile density rho(y) = a(y) int b dw
    ScalarField rho = a;
    rho *= integrate(b);
    ForceField F = compute_force(rho, coupling);

    // collision field of the w factor (rank-1: Q(g_y, g_y) = a(y)^2 Q(b, b))
    ScalarField Qb = q_landau_bilinear_divergence(b, b, lp);

    VplEntropyReport rep;
    rep.dissipation = entropy_dissipation(b, lp, floor_value) *
                      parallel_reduce(a.size(), [&](std::size_t s, std::size_t e) {
                          double acc = 0;
                          for (std::size_t i = s; i < e; ++i) acc += a[i] * a[i];
                          return acc;
                      }) * cy;

    // assemble the displayed terms on the (R1, R2) sweep; limits R1 then R2
    std::vector<double> mass_limits, coll_limits;
    // remainder values indexed [term][R2][R1]
    std::vector<std::vector<std::vector<double>>> rem(4, std::vector<std::vector<double>>(radii_y.size()));
    for (std::size_t i2 = 0; i2 < radii_y.size(); ++i2) {
        const double R2 = radii_y[i2];
        std::vector<double> mass_vals, coll_vals;
        for (double R1 : radii_w) {
            const double A1 = ysum(R2, [](const Vec3&, double av) { return av; });
            const double B1 = wsum(R1, [](const Vec3&, double bv) { return bv; });
            mass_vals.push_back(A1 * B1);

            // collision pairing: a^2-weighted, log g = log a + log b
            const double A2 = ysum(R2, [&](const Vec3&, double av) { return av * av; });
            const double A2log = ysum(R2, [&](const Vec3&, double av) { return av * av * log_floor(av); });
            double wQ = 0, wQlog = 0;
            for (int iz = 0; iz < gw.n; ++iz)
                for (int iy2 = 0; iy2 < gw.n; ++iy2)
                    for (int ix = 0; ix < gw.n; ++ix) {
                        const std::size_t id = gw.index(ix, iy2, iz);
                        const double chi = cutoff_profile(gw.node(ix, iy2, iz).norm() / R1);
                        wQ += chi * Qb[id];
                        wQlog += chi * log_floor(b[id]) * Qb[id];
                    }
            wQ *= cw;
            wQlog *= cw;
            coll_vals.push_back(A2log * wQ + A2 * wQlog);

            // cutoff-derivative remainders with m = g ln g - g decomposed as
            // (a ln a) b + a (b ln b) - a b
            auto mixed_sum = [&](const std::function<double(const Vec3&, double, const Vec3&)>& yterm,
                                 const std::function<double(const Vec3&, double)>& wterm_plain) {
                const double ya = ysum_grad(R2, [&](const Vec3& yv, double av, const Vec3& gchi) {
                    return yterm(yv, av * log_floor(av), gchi);
                });
                const double yb = ysum_grad(R2, [&](const Vec3& yv, double av, const Vec3& gchi) {
                    return yterm(yv, av, gchi);
                });
                const double wb_plain = wsum(R1, wterm_plain);
                const double wb_log = wsum(R1, [&](const Vec3& wv, double bv) {
                    return wterm_plain(wv, bv * log_floor(bv));
                });
                // [(a ln a) b + a (b ln b) - a b] split across the two factors
                return ya * wb_plain + yb * wb_log - yb * wb_plain;
            };

            // -(2/3) int m chi_{R1}(w) y . grad chi_{R2}(y)
            const double t_y = mixed_sum(
                [](const Vec3& yv, double aval, const Vec3& gchi) { return aval * yv.dot(gchi); },
                [](const Vec3&, double bv) { return bv; });
            // - int m chi_{R1}(w) w . grad chi_{R2}(y): separates into
            //   sum_d [grad chi_{R2}]_d-weighted y-sums x w_d-weighted w-sums
            double t_c = 0;
            for (int d = 0; d < 3; ++d) {
                const double yd_loga = ysum_grad(R2, [&](const Vec3&, double av, const Vec3& gchi) {
                    return av * std::log(std::max(av, floor_value)) * gchi[d];
                });
                const double yd_a = ysum_grad(R2, [&](const Vec3&, double av, const Vec3& gchi) { return av * gchi[d]; });
                const double wd_b = wsum(R1, [&](const Vec3& wv, double bv) { return wv[d] * bv; });
                const double wd_blog = wsum(R1, [&](const Vec3& wv, double bv) { return wv[d] * bv * log_floor(bv); });
                t_c += yd_loga * wd_b + yd_a * wd_blog - yd_a * wd_b;
            }
            // +(1/3) int m chi_{R2}(y) w . grad chi_{R1}(w)
            double t_w = 0;
            {
                const double y_loga = ysum(R2, [&](const Vec3&, double av) { return av * log_floor(av); });
                const double y_a = ysum(R2, [](const Vec3&, double av) { return av; });
                const double w_b = wsum_grad(R1, [](const Vec3& wv, double bv, const Vec3& gchi) { return bv * wv.dot(gchi); });
                const double w_blog = wsum_grad(R1, [&](const Vec3& wv, double bv, const Vec3& gchi) {
                    return bv * log_floor(bv) * wv.dot(gchi);
                });
                t_w = y_loga * w_b + y_a * w_blog - y_a * w_b;
            }
            // - int m chi_{R2}(y) F[g](y) . grad chi_{R1}(w)
            double t_f = 0;
            for (int d = 0; d < 3; ++d) {
                const double yF_loga = ysum(R2, [&](const Vec3& yv, double av) {
                    return av * log_floor(av) * F.comp[d].tricubic(yv);
                });
                const double yF_a = ysum(R2, [&](const Vec3& yv, double av) { return av * F.comp[d].tricubic(yv); });
                const double wd_b = wsum_grad(R1, [d](const Vec3&, double bv, const Vec3& gchi) { return bv * gchi[d]; });
                const double wd_blog = wsum_grad(R1, [&](const Vec3&, double bv, const Vec3& gchi) {
                    return bv * log_floor(bv) * gchi[d];
                });
                t_f += yF_loga * wd_b + yF_a * wd_blog - yF_a * wd_b;
            }
            rem[0][i2].push_back(-(2.0 / 3.0) * t_y);
            rem[1][i2].push_back(-t_c);
            rem[2][i2].push_back((1.0 / 3.0) * t_w);
            rem[3][i2].push_back(-t_f);
        }
        LimitReport lm = extrapolate_sequence(radii_w, mass_vals);
        LimitReport lc = extrapolate_sequence(radii_w, coll_vals);
        mass_limits.push_back(lm.limit);
        coll_limits.push_back(lc.limit);
    }
    rep.mass_term = extrapolate_sequence(radii_y, mass_limits);
    rep.collision_term = extrapolate_sequence(radii_y, coll_limits);

    // each cutoff-derivative term decays along its own limit axis: the
    // grad chi_{R2} terms in R2, the grad chi_{R1} terms in R1
    rep.remainder_names = {"y.grad chi_y", "w.grad chi_y", "w.grad chi_w", "F.grad chi_w"};
    const double trivial_scale = 1e-10 * (std::abs(rep.mass_term.limit) + rep.dissipation + 1e-300);
    for (int k = 0; k < 4; ++k) {
        std::vector<double> track;
        if (k <= 1) { // y-axis terms: max over R1 at each R2
            for (std::size_t i2 = 0; i2 < radii_y.size(); ++i2) {
                double worst = 0;
                for (double v : rem[k][i2]) worst = std::max(worst, std::abs(v));
                track.push_back(worst);
            }
            rep.remainder_slopes.push_back(-loglog_slope(radii_y, track));
        } else { // w-axis terms: max over R2 at each R1
            for (std::size_t i1 = 0; i1 < radii_w.size(); ++i1) {
                double worst = 0;
                for (std::size_t i2 = 0; i2 < radii_y.size(); ++i2) worst = std::max(worst, std::abs(rem[k][i2][i1]));
                track.push_back(worst);
            }
            rep.remainder_slopes.push_back(-loglog_slope(radii_w, track));
        }
        double peak = 0;
        for (double v : track) peak = std::max(peak, v);
        rep.remainder_trivial.push_back(peak <= trivial_scale);
    }

    rep.gap = rep.mass_term.limit + rep.dissipation;
    rep.refuted = rep.mass_term.converged && rep.gap > 0.02 * std::abs(rep.mass_term.limit);

    // integrability of (1+|w|)(g ln g - g) on nested truncations
    {
        auto partial = [&](double rho_t) {
            double accw = 0, accw1 = 0;
            for (int iz = 0; iz < gw.n; ++iz)
                for (int iy2 = 0; iy2 < gw.n; ++iy2)
                    for (int ix = 0; ix < gw.n; ++ix) {
                        const Vec3 wv = gw.node(ix, iy2, iz);
                        if (wv.norm() > rho_t) continue;
                        const double bv = b(ix, iy2, iz);
                        const double m = std::abs(bv * log_floor(bv) - bv);
                        accw += m * cw;
                        accw1 += (1.0 + wv.norm()) * m * cw;
                    }
            // y factor: |a ln a| style bound folded into a single scalar
            double ay = 0;
            for (std::size_t i = 0; i < a.size(); ++i) ay += (std::abs(a[i] * log_floor(a[i])) + a[i]) * cy;
            return accw1 * ay;
        };
        NormCheck c;
        c.name = "L1((1+|w|)(g ln g - g))";
        for (double f : {0.35, 0.5, 0.7, 0.85, 1.0}) {
            c.truncations.push_back(f * gw.extent);
            c.values.push_back(partial(f * gw.extent));
        }
        c.final_value = c.values.back();
        c.cauchy = true;
        for (std::size_t i = 2; i < c.values.size(); ++i)
            if (std::abs(c.values[i] - c.values[i - 1]) > 0.8 * std::abs(c.values[i - 1] - c.values[i - 2]) &&
                std::abs(c.values[i] - c.values[i - 1]) > 1e-10 * std::abs(c.values.back()))
                c.cauchy = false;
        rep.hypothesis_norms.push_back(std::move(c));
    }
    return rep;
}

} // namespace kinetic
