#include "kinetic/selfsim.hpp"

#include "kinetic/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kinetic {

std::string to_string(SelfSimMode m) {
    switch (m) {
        case SelfSimMode::LandauInhom: return "landau-inhom";
        case SelfSimMode::LandauHom: return "landau-hom";
        case SelfSimMode::BoltzmannInhom: return "boltzmann-inhom";
        case SelfSimMode::BoltzmannHom: return "boltzmann-hom";
        case SelfSimMode::Vpl: return "vpl";
    }
    return "?";
}

SelfSimMode selfsim_mode_from_string(const std::string& s) {
    if (s == "landau-inhom") return SelfSimMode::LandauInhom;
    if (s == "landau-hom") return SelfSimMode::LandauHom;
    if (s == "boltzmann-inhom") return SelfSimMode::BoltzmannInhom;
    if (s == "boltzmann-hom") return SelfSimMode::BoltzmannHom;
    if (s == "vpl") return SelfSimMode::Vpl;
    throw std::invalid_argument("unknown self-similar mode: " + s);
}

AdmissibilityReport check_theta_admissible(const SelfSimParams& p, SelfSimMode mode) {
    AdmissibilityReport rep;
    auto fail = [&](const std::string& name) { rep.violations.push_back(name); };

    if (!(p.theta > -1.0)) fail("theta > -1");
    if (!(1.0 + p.theta * (3.0 + p.gamma) > 0.0)) fail("1 + theta*(3+gamma) > 0");

    switch (mode) {
        case SelfSimMode::LandauInhom:
            if (!(p.gamma >= -3.0 && p.gamma <= -2.0)) fail("gamma in [-3,-2]");
            if (!(p.theta < 0.5)) fail("theta < 1/2");
            break;
        case SelfSimMode::LandauHom:
            if (!(p.gamma >= -3.0 && p.gamma < -2.0)) fail("gamma in [-3,-2)");
            if (!(p.theta < 0.5)) fail("theta < 1/2");
            if (!(p.theta >= 1.0 / std::abs(p.gamma))) fail("theta >= 1/|gamma|");
            break;
        case SelfSimMode::BoltzmannInhom:
        case SelfSimMode::BoltzmannHom:
            if (!(p.gamma > -3.0 && p.gamma <= 1.0)) fail("gamma in (-3,1]");
            if (!(p.s_exp > 0.0 && p.s_exp < 1.0)) fail("s in (0,1)");
            if (!(p.gamma + 2.0 * p.s_exp < 0.0)) fail("gamma + 2s < 0");
            if (!(p.theta < 1.0 / (2.0 * p.s_exp))) fail("theta < 1/(2s)");
            if (mode == SelfSimMode::BoltzmannHom && !(p.theta > 1.0 / std::abs(p.gamma)))
                fail("theta > 1/|gamma|");
            break;
        case SelfSimMode::Vpl:
            if (std::abs(p.gamma + 3.0) > 1e-12) fail("gamma = -3");
            if (std::abs(p.theta + 1.0 / 3.0) > 1e-12) fail("theta = -1/3");
            break;
    }
    rep.ok = rep.violations.empty();
    return rep;
}

namespace {
void require_past_time(double t) {
    if (!(t < 0.0)) throw std::invalid_argument("self-similar map requires t < 0");
}
} // namespace

std::pair<Vec3, Vec3> to_selfsim(const Vec3& x, const Vec3& v, const SelfSimParams& p) {
    require_past_time(p.t);
    const double mt = -p.t;
    return {x / std::pow(mt, 1.0 + p.theta), v / std::pow(mt, p.theta)};
}

std::pair<Vec3, Vec3> from_selfsim(const Vec3& y, const Vec3& w, const SelfSimParams& p) {
    require_past_time(p.t);
    const double mt = -p.t;
    return {y * std::pow(mt, 1.0 + p.theta), w * std::pow(mt, p.theta)};
}

RescaledField rescale_solution(const ScalarField& f_at_t0, double t0, const SelfSimParams& p) {
    if (!(p.lambda_ > 0.0)) throw std::invalid_argument("rescale_solution: lambda must be positive");
    const double prefactor = std::pow(p.lambda_, p.alpha + 3.0 + p.gamma);
    const GridSpec& g = f_at_t0.grid();
    RescaledField out;
    out.field = ScalarField(g);
    out.time = t0 / std::pow(p.lambda_, p.alpha);
    const double h = g.spacing();
    std::size_t flagged = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const Vec3 v = g.node(ix, iy, iz);
                const Vec3 src = v * p.lambda_;
                const double lim = g.extent - h; // tricubic needs an interior stencil
                if (std::abs(src.x) > lim || std::abs(src.y) > lim || std::abs(src.z) > lim) {
                    ++flagged;
                    continue;
                }
                out.field(ix, iy, iz) = prefactor * f_at_t0.tricubic(src);
            }
    out.out_of_domain_nodes = flagged;
    return out;
}

double PhiModel::value(double t, const Vec3& x, const Vec3& v) const {
    double val = amp * std::exp(-0.5 * v.norm2() / (sigma_v * sigma_v));
    if (x_dependent()) val *= std::exp(-0.5 * (x - x0).norm2() / (sigma_x * sigma_x));
    if (time_dependent()) val *= std::pow(-t, -beta);
    return val;
}

double PhiModel::dt(double t, const Vec3& x, const Vec3& v) const {
    if (!time_dependent()) return 0.0;
    // d/dt (-t)^{-beta} = beta (-t)^{-beta-1}
    return beta / (-t) * value(t, x, v);
}

Vec3 PhiModel::grad_x(double t, const Vec3& x, const Vec3& v) const {
    if (!x_dependent()) return {};
    return (x0 - x) / (sigma_x * sigma_x) * value(t, x, v);
}

Sym3 PhiModel::hessian_v(double t, const Vec3& x, const Vec3& v) const {
    const double s2 = sigma_v * sigma_v;
    const double val = value(t, x, v);
    Sym3 hess;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            hess.at(i, j) = (v[i] * v[j] / (s2 * s2) - (i == j ? 1.0 / s2 : 0.0)) * val;
    return hess;
}

double PhiModel::mass_v(double t, const Vec3& x) const {
    double m = amp * std::pow(2.0 * M_PI * sigma_v * sigma_v, 1.5);
    if (x_dependent()) m *= std::exp(-0.5 * (x - x0).norm2() / (sigma_x * sigma_x));
    if (time_dependent()) m *= std::pow(-t, -beta);
    return m;
}

double predicted_e1_exponent(const PhiModel& phi, const SelfSimParams& p) {
    const double base = std::min({1.0 - 2.0 * p.theta, 1.0, 1.0 + p.theta * (3.0 + p.gamma)});
    return base - phi.beta;
}

double predicted_e2_exponent(const PhiModel& phi, const SelfSimParams& p) {
    double e = std::min(1.0 + p.theta * (5.0 + p.gamma) - phi.beta,        // tr(abar^g D_v^2 phi)
                        2.0 + p.theta * (3.0 + p.gamma) - 2.0 * phi.beta); // Q_L(phi,phi)
    if (phi.time_dependent()) e = std::min(e, 1.0 + p.theta * (3.0 + p.gamma) - phi.beta);
    if (phi.x_dependent()) e = std::min(e, 2.0 + p.theta * (4.0 + p.gamma) - phi.beta);
    return e;
}

double phi_condition_critical_rate(const SelfSimParams& p) {
    // smallest exponent 1 + theta(3+gamma) - 3 theta/p + (1+theta) l + theta j
    // over the derivative tuples and the p-range where the condition applies
    const double e_inf = 1.0 + p.theta * (3.0 + p.gamma);
    if (p.theta >= 0.0) {
        const double e_1 = 1.0 + p.theta * p.gamma; // worst at p = 1
        if (e_1 >= 0.0) return e_1;
        return 0.0; // the requirement set reaches the exponent-zero boundary
    }
    // theta < 0: worst at p = infinity with two velocity derivatives
    return std::min(e_inf, e_inf + 2.0 * p.theta);
}

PhiCoefficients::PhiCoefficients(const PhiModel& phi, const SelfSimParams& p, double t, const Vec3& x, int n_grid)
    : lp_(LandauParams::make(p.gamma)), model_(phi), t_(t), x_(x) {
    require_past_time(t);
    grid_ = GridSpec(n_grid, 8.0 * phi.sigma_v);
    ScalarField sample = ScalarField::sample(grid_, [&](const Vec3& v) { return phi.value(t, x, v); });
    a_ = coeff_a(sample, lp_);
    if (lp_.gamma > -3.0) c_ = coeff_c(sample, lp_);
    mass_ = model_.mass_v(t, x);
    far_radius_ = 0.72 * grid_.extent;
    for (int k = 0; k < 6; ++k) {
        a_interp_[k] = ScalarField(grid_);
        a_interp_[k].values() = a_.component(k);
    }
}

double PhiCoefficients::phi_at(const Vec3& v) const { return model_.value(t_, x_, v); }

Sym3 PhiCoefficients::a_at(const Vec3& v) const {
    if (v.norm() >= far_radius_) {
        // monopole far field: a_gamma Pi(v)|v|^{gamma+2} mass
        return projection_pi(v) * (lp_.a_const * std::pow(v.norm(), lp_.gamma + 2.0) * mass_);
    }
    Sym3 out;
    for (int k = 0; k < 6; ++k) out.a[k] = a_interp_[k].tricubic(v);
    return out;
}

double PhiCoefficients::c_at(const Vec3& v) const {
    if (lp_.gamma <= -3.0) return lp_.c_const * phi_at(v);
    if (v.norm() >= far_radius_) return lp_.c_const * std::pow(v.norm(), lp_.gamma) * mass_;
    return c_.tricubic(v);
}

ScalarField error_E1_at(const ScalarField& g_y, const PhiModel& phi, const SelfSimParams& p, const Vec3& y) {
    require_past_time(p.t);
    const GridSpec& gw = g_y.grid();
    const double mt = -p.t;
    const double tpow_a = std::pow(mt, 1.0 - 2.0 * p.theta);
    const double tpow_c = mt;
    const double tpow_g = std::pow(mt, 1.0 + p.theta * (3.0 + p.gamma));
    const double vscale = std::pow(mt, p.theta);
    const Vec3 X = y * std::pow(mt, 1.0 + p.theta);

    const LandauParams lp = LandauParams::make(p.gamma);
    PhiCoefficients pc(phi, p, p.t, X);
    ScalarField cg = coeff_c(g_y, lp);

    std::array<ScalarField, 6> d2;
    static const int pairs[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
    for (int k = 0; k < 6; ++k) d2[k] = deriv4_second(g_y, pairs[k][0], pairs[k][1]);

    ScalarField out(gw);
    parallel_for(static_cast<std::size_t>(gw.n), [&](std::size_t zb, std::size_t ze) {
        for (int iz = static_cast<int>(zb); iz < static_cast<int>(ze); ++iz)
            for (int iy2 = 0; iy2 < gw.n; ++iy2)
                for (int ix = 0; ix < gw.n; ++ix) {
                    const std::size_t id = gw.index(ix, iy2, iz);
                    const Vec3 w = gw.node(ix, iy2, iz);
                    const Vec3 V = w * vscale;
                    const Sym3 aphi = pc.a_at(V);
                    double tr = 0;
                    for (int k = 0; k < 6; ++k) {
                        const double mult = pairs[k][0] == pairs[k][1] ? 1.0 : 2.0;
                        tr += mult * aphi.a[k] * d2[k][id];
                    }
                    out[id] = -tpow_a * tr - tpow_c * pc.c_at(V) * g_y[id] - tpow_g * cg[id] * pc.phi_at(V);
                }
    });
    return out;
}

ScalarField error_E2_at(const ScalarField& g_y, const PhiModel& phi, const SelfSimParams& p, const Vec3& y) {
    require_past_time(p.t);
    const GridSpec& gw = g_y.grid();
    const double mt = -p.t;
    const double tpow_ag = std::pow(mt, 1.0 + p.theta * (5.0 + p.gamma));
    const double tpow_rest = std::pow(mt, 2.0 + p.theta * (3.0 + p.gamma));
    const double vscale = std::pow(mt, p.theta);
    const Vec3 X = y * std::pow(mt, 1.0 + p.theta);

    const LandauParams lp = LandauParams::make(p.gamma);
    MatrixField ag = coeff_a(g_y, lp);

    // Q_L(phi,phi) on a velocity grid adapted to phi
    const GridSpec gphi(std::max(32, gw.n), 8.0 * phi.sigma_v);
    ScalarField phi_field = ScalarField::sample(gphi, [&](const Vec3& v) { return phi.value(p.t, X, v); });
    ScalarField qphi = q_landau_trace(phi_field, lp);

    ScalarField out(gw);
    parallel_for(static_cast<std::size_t>(gw.n), [&](std::size_t zb, std::size_t ze) {
        for (int iz = static_cast<int>(zb); iz < static_cast<int>(ze); ++iz)
            for (int iy2 = 0; iy2 < gw.n; ++iy2)
                for (int ix = 0; ix < gw.n; ++ix) {
                    const std::size_t id = gw.index(ix, iy2, iz);
                    const Vec3 w = gw.node(ix, iy2, iz);
                    const Vec3 V = w * vscale;
                    const Sym3 hess = phi.hessian_v(p.t, X, V);
                    const Sym3 agv = ag.at(id);
                    double tr = 0;
                    for (int i = 0; i < 3; ++i)
                        for (int j = 0; j < 3; ++j) tr += agv(i, j) * hess(i, j);
                    const double transport = phi.dt(p.t, X, V) + V.dot(phi.grad_x(p.t, X, V));
                    const double qv = V.norm() <= 0.9 * gphi.extent ? qphi.tricubic(V) : 0.0;
                    out[id] = -tpow_ag * tr + tpow_rest * (transport - qv);
                }
    });
    return out;
}

CoeffIdentityResidual rescaled_coeff_identities(const ScalarField& g, const PhiModel& phi, const SelfSimParams& p) {
    require_past_time(p.t);
    const GridSpec& gw = g.grid();
    const double mt = -p.t;
    const double vscale = std::pow(mt, p.theta);
    const Vec3 X{}; // homogeneous slice: x = 0
    const LandauParams lp = LandauParams::make(p.gamma);

    // velocity grid matched to the mapped w-grid
    const GridSpec gv(gw.n, vscale * gw.extent);
    const double gpref = std::pow(mt, -1.0 - p.theta * (3.0 + p.gamma));

    ScalarField f = ScalarField::sample(gv, [&](const Vec3& v) {
        return phi.value(p.t, X, v) + gpref * g.tricubic(v / vscale);
    });
    ScalarField phiv = ScalarField::sample(gv, [&](const Vec3& v) { return phi.value(p.t, X, v); });

    MatrixField af = coeff_a(f, lp);
    MatrixField aphi = coeff_a(phiv, lp);
    MatrixField agw = coeff_a(g, lp);
    ScalarField cf = coeff_c(f, lp);
    ScalarField cphi = coeff_c(phiv, lp);
    ScalarField cgw = coeff_c(g, lp);

    const double afac = std::pow(mt, 2.0 * p.theta - 1.0);
    const double cfac = 1.0 / mt;

    double sup_a = 0, sup_c = 0;
    for (std::size_t i = 0; i < gv.size(); ++i) {
        sup_a = std::max(sup_a, af.at(i).spectral_norm());
        sup_c = std::max(sup_c, std::abs(cf[i]));
    }

    std::array<ScalarField, 6> ag_fields;
    for (int k = 0; k < 6; ++k) {
        ag_fields[k] = ScalarField(gw);
        ag_fields[k].values() = agw.component(k);
    }

    CoeffIdentityResidual res;
    for (int iz = 0; iz < gv.n; ++iz)
        for (int iy = 0; iy < gv.n; ++iy)
            for (int ix = 0; ix < gv.n; ++ix) {
                const std::size_t id = gv.index(ix, iy, iz);
                const Vec3 v = gv.node(ix, iy, iz);
                const Vec3 w = v / vscale;
                double diff = 0;
                for (int k = 0; k < 6; ++k) {
                    const double rhs = aphi.component(k)[id] + afac * ag_fields[k].tricubic(w);
                    diff = std::max(diff, std::abs(af.at(id).a[k] - rhs));
                }
                res.mismatch_a = std::max(res.mismatch_a, diff / sup_a);

                const double rhs_c = cphi[id] + cfac * cgw.tricubic(w);
                res.mismatch_c = std::max(res.mismatch_c, std::abs(cf[id] - rhs_c) / sup_c);
            }
    return res;
}

DecayReport verify_error_decay(const ScalarField& g_y, const PhiModel& phi, SelfSimParams p,
                               const std::vector<double>& t_sequence,
                               const std::vector<Vec3>& y_samples) {
    DecayReport rep;
    rep.predicted_e1 = predicted_e1_exponent(phi, p);
    rep.predicted_e2 = predicted_e2_exponent(phi, p);
    for (double t : t_sequence) {
        p.t = t < 0 ? t : -t; // accept either sign convention
        double s1 = 0, s2 = 0;
        for (const Vec3& y : y_samples) {
            s1 = std::max(s1, error_E1_at(g_y, phi, p, y).max_abs());
            s2 = std::max(s2, error_E2_at(g_y, phi, p, y).max_abs());
        }
        rep.times.push_back(-p.t);
        rep.sup_e1.push_back(s1);
        rep.sup_e2.push_back(s2);
    }
    auto decreasing = [](const std::vector<double>& v) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (!(v[i] < v[i - 1])) return false;
        return true;
    };
    // the sequence runs toward t = 0: suprema must come down along it
    rep.decreasing_e1 = decreasing(rep.sup_e1);
    rep.decreasing_e2 = decreasing(rep.sup_e2);
    rep.slope_e1 = loglog_slope(rep.times, rep.sup_e1);
    rep.slope_e2 = loglog_slope(rep.times, rep.sup_e2);
    const bool ok1 = rep.decreasing_e1 && rep.slope_e1 >= 0.9 * rep.predicted_e1;
    const bool ok2 = rep.decreasing_e2 && rep.slope_e2 >= 0.9 * rep.predicted_e2;
    rep.pass = ok1 && ok2;
    if (!rep.decreasing_e1) rep.note += "sup|E1| not decreasing; ";
    if (!rep.decreasing_e2) rep.note += "sup|E2| not decreasing; ";
    return rep;
}

} // namespace kinetic
