#include "kinetic/profile.hpp"

#include "kinetic/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kinetic {

ProfileDecomposition ProfileDecomposition::homogeneous(ScalarField q_in) {
    ProfileDecomposition g;
    g.q = std::move(q_in);
    return g;
}

ProfileDecomposition ProfileDecomposition::with_h(ScalarField q_in, std::vector<SeparableTerm> terms) {
    if (terms.size() > kMaxRank) throw std::invalid_argument("ProfileDecomposition: rank above 8");
    ProfileDecomposition g;
    g.q = std::move(q_in);
    g.h = std::move(terms);
    for (const auto& t : g.h) {
        if (!(t.b.grid() == g.q.grid())) throw std::invalid_argument("ProfileDecomposition: b grids must match q");
        if (!(t.a.grid() == g.h.front().a.grid())) throw std::invalid_argument("ProfileDecomposition: a grids must match");
    }
    return g;
}

const GridSpec& ProfileDecomposition::y_grid() const {
    if (h.empty()) throw std::logic_error("ProfileDecomposition: homogeneous profile has no y grid");
    return h.front().a.grid();
}

bool ProfileDecomposition::is_zero() const {
    if (q.size() && q.max_abs() > 0) return false;
    for (const auto& t : h)
        if (t.a.max_abs() > 0 && t.b.max_abs() > 0) return false;
    return true;
}

ScalarField ProfileDecomposition::slice_at_y(const Vec3& y) const {
    ScalarField out = q;
    for (const auto& t : h) out.axpy(t.a.tricubic(y), t.b);
    return out;
}

CollisionBilinear landau_collision(const LandauParams& p) {
    return [p](const ScalarField& u, const ScalarField& v) { return q_landau_bilinear_divergence(u, v, p); };
}

namespace {
double window_integral_of_field(const ScalarField& F, double R, bool weight_w2) {
    const GridSpec& g = F.grid();
    const double cell = std::pow(g.spacing(), 3);
    double acc = 0, comp = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const Vec3 w = g.node(ix, iy, iz);
                double t = cutoff_profile(w.norm() / R) * F(ix, iy, iz) * cell;
                if (weight_w2) t *= w.norm2();
                double yk = t - comp, tt = acc + yk;
                comp = (tt - acc) - yk;
                acc = tt;
            }
    return acc;
}
} // namespace

CollisionBackend CollisionBackend::landau(const LandauParams& p) {
    CollisionBackend b;
    b.bilinear = landau_collision(p);
    b.window = [p](const ScalarField& u, const ScalarField& v, const std::vector<double>& radii, bool w2) {
        ScalarField Q = q_landau_bilinear_divergence(u, v, p);
        std::vector<double> out;
        out.reserve(radii.size());
        for (double R : radii) out.push_back(window_integral_of_field(Q, R, w2));
        return out;
    };
    return b;
}

// --- admissibility -------------------------------------------------------------

namespace {

// Partial integral of |f| (optionally weighted) over |x| <= rho.
double truncated_norm(const ScalarField& f, double rho, const std::function<double(const Vec3&)>& weight = {}) {
    const GridSpec& g = f.grid();
    const double cell = std::pow(g.spacing(), 3);
    double acc = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const Vec3 x = g.node(ix, iy, iz);
                if (x.norm() > rho) continue;
                acc += std::abs(f(ix, iy, iz)) * (weight ? weight(x) : 1.0) * cell;
            }
    return acc;
}

bool cauchy_increments(const std::vector<double>& vals) {
    if (vals.size() < 3) return true;
    std::vector<double> d;
    for (std::size_t i = 1; i < vals.size(); ++i) d.push_back(vals[i] - vals[i - 1]);
    const double scale = std::max(std::abs(vals.back()), 1e-300);
    for (std::size_t i = 1; i < d.size(); ++i)
        if (std::abs(d[i]) > 0.8 * std::abs(d[i - 1]) && std::abs(d[i]) > 1e-10 * scale) return false;
    return true;
}

NormCheck check_norm(const std::string& name, const std::function<double(double)>& partial,
                     const std::vector<double>& fracs, double L) {
    NormCheck c;
    c.name = name;
    for (double f : fracs) {
        c.truncations.push_back(f * L);
        c.values.push_back(partial(f * L));
    }
    c.cauchy = cauchy_increments(c.values);
    c.final_value = c.values.back();
    return c;
}

const std::vector<double> kFracs{0.35, 0.5, 0.7, 0.85, 1.0};

} // namespace

ProfileAdmissibility check_profile_admissibility(const ProfileDecomposition& g, const SelfSimParams& p) {
    ProfileAdmissibility rep;
    const double Lw = g.w_grid().extent;
    const bool moment_case = std::abs(std::abs(p.theta) - 1.0 / 3.0) < 1e-12;

    rep.norms.push_back(check_norm("L1(q)", [&](double rho) { return truncated_norm(g.q, rho); }, kFracs, Lw));
    if (moment_case)
        rep.norms.push_back(check_norm("L1((1+|w|^2) q)", [&](double rho) {
            return truncated_norm(g.q, rho, [](const Vec3& w) { return 1.0 + w.norm2(); });
        }, kFracs, Lw));

    if (g.rank() > 0) {
        const double Ly = g.y_grid().extent;
        // factorized separable norms: exact for sign-aligned rank-1 terms,
        // an upper bound otherwise
        auto h_norm = [&](double frac, const std::function<double(const Vec3&)>& wy,
                          const std::function<double(const Vec3&)>& ww) {
            double acc = 0;
            for (const auto& t : g.h)
                acc += truncated_norm(t.a, frac * Ly, wy) * truncated_norm(t.b, frac * Lw, ww);
            return acc;
        };
        auto id = [](const Vec3&) { return 1.0; };
        auto absv = [](const Vec3& x) { return x.norm(); };
        rep.norms.push_back(check_norm("L1(h)", [&](double rho) { return h_norm(rho / Ly, id, id); }, kFracs, Ly));
        rep.norms.push_back(check_norm("L1(|y| h)", [&](double rho) { return h_norm(rho / Ly, absv, id); }, kFracs, Ly));
        rep.norms.push_back(check_norm("L1(|w| h)", [&](double rho) { return h_norm(rho / Ly, id, absv); }, kFracs, Ly));
        if (moment_case) {
            auto w2 = [](const Vec3& x) { return x.norm2(); };
            auto w3 = [](const Vec3& x) { return x.norm2() * x.norm(); };
            rep.norms.push_back(check_norm("L1(|y||w|^2 h)", [&](double rho) { return h_norm(rho / Ly, absv, w2); }, kFracs, Ly));
            rep.norms.push_back(check_norm("L1(|w|^3 h)", [&](double rho) { return h_norm(rho / Ly, id, w3); }, kFracs, Ly));
        }
    }

    // smoothness norms of the y = 0 slice: D_w^j g in L^p_w, j <= 2, p in {1, 2, inf}
    ScalarField g0 = g.rank() > 0 ? g.slice_at_y({}) : g.q;
    ScalarField dg = deriv4(g0, 0);
    ScalarField d2g = deriv4_second(g0, 0, 0);
    for (const auto& [name, field] : {std::pair<const char*, const ScalarField*>{"g(0,.)", &g0},
                                      {"D_w g(0,.)", &dg},
                                      {"D_w^2 g(0,.)", &d2g}}) {
        for (double pexp : {1.0, 2.0, HUGE_VAL}) {
            std::ostringstream nm;
            nm << name << " L" << (std::isinf(pexp) ? std::string("inf") : std::to_string((int)pexp));
            const ScalarField* f = field;
            rep.norms.push_back(check_norm(nm.str(), [f, pexp](double rho) {
                if (std::isinf(pexp)) {
                    double sup = 0;
                    const GridSpec& gr = f->grid();
                    for (int iz = 0; iz < gr.n; ++iz)
                        for (int iy = 0; iy < gr.n; ++iy)
                            for (int ix = 0; ix < gr.n; ++ix)
                                if (gr.node(ix, iy, iz).norm() <= rho)
                                    sup = std::max(sup, std::abs((*f)(ix, iy, iz)));
                    return sup;
                }
                double acc = truncated_norm(*f, rho, [pexp](const Vec3&) { return 1.0; });
                // p-norm: reuse truncated sums of |f|^p
                const GridSpec& gr = f->grid();
                const double cell = std::pow(gr.spacing(), 3);
                acc = 0;
                for (int iz = 0; iz < gr.n; ++iz)
                    for (int iy = 0; iy < gr.n; ++iy)
                        for (int ix = 0; ix < gr.n; ++ix)
                            if (gr.node(ix, iy, iz).norm() <= rho)
                                acc += std::pow(std::abs((*f)(ix, iy, iz)), pexp) * cell;
                return std::pow(acc, 1.0 / pexp);
            }, kFracs, Lw));
        }
    }

    rep.pass = true;
    for (const auto& c : rep.norms)
        if (!c.cauchy || !std::isfinite(c.final_value)) rep.pass = false;
    return rep;
}

// --- residual -------------------------------------------------------------------

ScalarField profile_residual_at(const ProfileDecomposition& g, const SelfSimParams& p, const Vec3& y,
                                const CollisionBilinear& collision) {
    ScalarField gy = g.rank() > 0 ? g.slice_at_y(y) : g.q;
    const GridSpec& gw = gy.grid();

    // g + theta w . grad_w g
    auto grad = gradient4(gy);
    ScalarField out = gy;
    for (int iz = 0; iz < gw.n; ++iz)
        for (int iy2 = 0; iy2 < gw.n; ++iy2)
            for (int ix = 0; ix < gw.n; ++ix) {
                const Vec3 w = gw.node(ix, iy2, iz);
                out(ix, iy2, iz) += p.theta * (w.x * grad[0](ix, iy2, iz) + w.y * grad[1](ix, iy2, iz) + w.z * grad[2](ix, iy2, iz));
            }

    // y transport terms act on the a_k factors only
    if (g.rank() > 0) {
        for (const auto& t : g.h) {
            std::array<ScalarField, 3> da = gradient4(t.a);
            Vec3 grad_a{da[0].tricubic(y), da[1].tricubic(y), da[2].tricubic(y)};
            const double ydot = (1.0 + p.theta) * y.dot(grad_a);
            // (1+theta) y.grad_y a_k  b_k  +  (grad_y a_k . w) b_k
            for (int iz = 0; iz < gw.n; ++iz)
                for (int iy2 = 0; iy2 < gw.n; ++iy2)
                    for (int ix = 0; ix < gw.n; ++ix) {
                        const Vec3 w = gw.node(ix, iy2, iz);
                        out(ix, iy2, iz) += (ydot + grad_a.dot(w)) * t.b(ix, iy2, iz);
                    }
        }
    }

    out -= collision(gy, gy);
    return out;
}

ScalarField landau_profile_residual(const ProfileDecomposition& g, const SelfSimParams& p, const Vec3& y) {
    return profile_residual_at(g, p, y, landau_collision(LandauParams::make(p.gamma)));
}

// --- moment functionals -----------------------------------------------------------

double moment_coefficient_q(double theta, bool weight_w2) {
    return weight_w2 ? 1.0 - 5.0 * theta : 1.0 - 3.0 * theta;
}
double moment_coefficient_h(double theta, bool weight_w2) {
    return weight_w2 ? -2.0 - 8.0 * theta : -2.0 * (1.0 + 3.0 * theta);
}

namespace {

double plateau_shape(PlateauShape s, double r) {
    // supported in r <= 1, C^2
    if (r >= 1.0) return 0.0;
    switch (s) {
        case PlateauShape::Quintic: return cutoff_profile(1.0 + r); // quintic bridge over [0, 1]
        case PlateauShape::Cosine: {
            const double c = std::cos(0.5 * M_PI * r);
            return c * c * c; // cos^3: two continuous derivatives at r = 1
        }
    }
    return 0.0;
}

// integral of c(u - y0) against the normalized plateau over its support
class PlateauIntegrator {
  public:
    explicit PlateauIntegrator(PlateauShape shape, int m = 20) : shape_(shape), m_(m) {
        const double du = 2.0 / m_;
        norm_ = 0.0;
        for (int a = 0; a < m_; ++a)
            for (int b = 0; b < m_; ++b)
                for (int c = 0; c < m_; ++c)
                    norm_ += plateau_shape(shape_, point(a, b, c).norm()) * du * du * du;
    }

    // integral phi(u) c(u - y0) du; c interpolated tricubically, zero outside
    double integrate_against(const ScalarField& c, const Vec3& y0) const {
        const double du = 2.0 / m_;
        double acc = 0;
        for (int a = 0; a < m_; ++a)
            for (int b = 0; b < m_; ++b)
                for (int cc = 0; cc < m_; ++cc) {
                    const Vec3 u = point(a, b, cc);
                    const double w = plateau_shape(shape_, u.norm());
                    if (w == 0.0) continue;
                    acc += w * c.tricubic(u - y0) * du * du * du;
                }
        return acc / norm_;
    }

  private:
    Vec3 point(int a, int b, int c) const {
        const double du = 2.0 / m_;
        return {-1.0 + (a + 0.5) * du, -1.0 + (b + 0.5) * du, -1.0 + (c + 0.5) * du};
    }
    PlateauShape shape_;
    int m_;
    double norm_ = 0.0;
};

struct FunctionalTerm {
    std::vector<double> w_table;                 // int chi_R (weight) F dw per radius
    ScalarField y_field;                         // over the y grid (empty: constant coefficient)
    double const_coef = 0.0;                     // used when y_field is empty
};

double y_cutoff_integral(const ScalarField& c, double R1) {
    const GridSpec& g = c.grid();
    const double cell = std::pow(g.spacing(), 3);
    double acc = 0;
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix)
                acc += cutoff_profile(g.node(ix, iy, iz).norm() / R1) * c(ix, iy, iz) * cell;
    return acc;
}

} // namespace

MomentFunctionalResult moment_functional(const ProfileDecomposition& g, const SelfSimParams& p,
                                         const MomentFunctionalSpec& spec,
                                         const CollisionBackend* backend_in, double rel_tol) {
    if (spec.w_radii.empty() || spec.y_scales.empty())
        throw std::invalid_argument("moment_functional: empty sweep");
    const bool has_q = g.q.size() > 0 && g.q.max_abs() > 0;
    if (spec.window == YWindowKind::Cutoff && has_q)
        throw std::invalid_argument("moment_functional: full-space y-cutoff requires q = 0 (the q term has no y decay)");

    CollisionBackend local;
    if (!backend_in) local = CollisionBackend::landau(LandauParams::make(p.gamma));
    const CollisionBackend& backend = backend_in ? *backend_in : local;

    // --- assemble the separable terms: transport tables and collision pairs ------
    std::vector<FunctionalTerm> terms;
    const GridSpec& gw = g.w_grid();

    auto tabulate = [&](const ScalarField& F) {
        std::vector<double> t;
        t.reserve(spec.w_radii.size());
        for (double R : spec.w_radii) t.push_back(window_integral_of_field(F, R, spec.weight_w2));
        return t;
    };
    auto combine = [](std::vector<double>& into, const std::vector<double>& other, double s) {
        for (std::size_t i = 0; i < into.size(); ++i) into[i] += s * other[i];
    };

    auto w_transport = [&](const ScalarField& b) {
        auto grad = gradient4(b);
        ScalarField out = b;
        for (int iz = 0; iz < gw.n; ++iz)
            for (int iy = 0; iy < gw.n; ++iy)
                for (int ix = 0; ix < gw.n; ++ix) {
                    const Vec3 w = gw.node(ix, iy, iz);
                    out(ix, iy, iz) += p.theta * (w.x * grad[0](ix, iy, iz) + w.y * grad[1](ix, iy, iz) + w.z * grad[2](ix, iy, iz));
                }
        return out;
    };

    if (has_q) {
        FunctionalTerm t;
        t.w_table = tabulate(w_transport(g.q));
        combine(t.w_table, backend.window(g.q, g.q, spec.w_radii, spec.weight_w2), -1.0);
        t.const_coef = 1.0;
        terms.push_back(std::move(t));
    }

    for (const auto& hk : g.h) {
        {
            FunctionalTerm t;
            t.w_table = tabulate(w_transport(hk.b));
            if (has_q) {
                combine(t.w_table, backend.window(g.q, hk.b, spec.w_radii, spec.weight_w2), -1.0);
                combine(t.w_table, backend.window(hk.b, g.q, spec.w_radii, spec.weight_w2), -1.0);
            }
            t.y_field = hk.a;
            terms.push_back(std::move(t));
        }
        {
            // (1+theta) (y . grad_y a_k) b_k
            auto da = gradient4(hk.a);
            ScalarField ycoef(hk.a.grid());
            const GridSpec& gy = hk.a.grid();
            for (int iz = 0; iz < gy.n; ++iz)
                for (int iy = 0; iy < gy.n; ++iy)
                    for (int ix = 0; ix < gy.n; ++ix) {
                        const Vec3 yv = gy.node(ix, iy, iz);
                        ycoef(ix, iy, iz) = (1.0 + p.theta) * (yv.x * da[0](ix, iy, iz) + yv.y * da[1](ix, iy, iz) + yv.z * da[2](ix, iy, iz));
                    }
            FunctionalTerm t;
            t.w_table = tabulate(hk.b);
            t.y_field = std::move(ycoef);
            terms.push_back(std::move(t));
            // (grad_y a_k)_d (w_d b_k)
            for (int d = 0; d < 3; ++d) {
                FunctionalTerm td;
                ScalarField wb(gw);
                for (int iz = 0; iz < gw.n; ++iz)
                    for (int iy = 0; iy < gw.n; ++iy)
                        for (int ix = 0; ix < gw.n; ++ix)
                            wb(ix, iy, iz) = gw.node(ix, iy, iz)[d] * hk.b(ix, iy, iz);
                td.w_table = tabulate(wb);
                td.y_field = da[d];
                terms.push_back(std::move(td));
            }
        }
    }
    // collision cross terms between separable factors
    for (int k = 0; k < g.rank(); ++k)
        for (int l = 0; l < g.rank(); ++l) {
            FunctionalTerm t;
            t.w_table = backend.window(g.h[k].b, g.h[l].b, spec.w_radii, spec.weight_w2);
            for (double& v : t.w_table) v = -v;
            ScalarField prod = g.h[k].a;
            for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= g.h[l].a[i];
            t.y_field = std::move(prod);
            terms.push_back(std::move(t));
        }

    // --- combine with the y windows ------------------------------------------------
    MomentFunctionalResult res;
    res.y_scales = spec.y_scales;
    PlateauIntegrator plateau(spec.plateau);

    std::vector<double> y_limits;
    for (double ys : spec.y_scales) {
        std::vector<double> vals(spec.w_radii.size(), 0.0);
        for (const auto& term : terms) {
            double ycoef;
            if (term.y_field.size() == 0) {
                ycoef = term.const_coef; // plateau integral of a constant is that constant
            } else if (spec.window == YWindowKind::Plateau) {
                ycoef = plateau.integrate_against(term.y_field, Vec3{ys, 0, 0});
            } else {
                ycoef = y_cutoff_integral(term.y_field, ys);
            }
            for (std::size_t ri = 0; ri < vals.size(); ++ri) vals[ri] += ycoef * term.w_table[ri];
        }
        LimitReport lr = extrapolate_sequence(spec.w_radii, vals);
        y_limits.push_back(lr.limit);
        res.per_y.push_back(std::move(lr));
    }
    res.final_limit = extrapolate_sequence(spec.y_scales, y_limits);
    res.measured = res.final_limit.limit;

    // predicted: plateau kills the h part; the y-cutoff keeps it
    const double mq = has_q ? integrate(g.q, spec.weight_w2 ? PolyWeight::abs_w_squared() : PolyWeight::one()) : 0.0;
    double mh = 0.0;
    if (spec.window == YWindowKind::Cutoff)
        for (const auto& hk : g.h)
            mh += integrate(hk.a) * integrate(hk.b, spec.weight_w2 ? PolyWeight::abs_w_squared() : PolyWeight::one());
    res.predicted = moment_coefficient_q(p.theta, spec.weight_w2) * mq +
                    moment_coefficient_h(p.theta, spec.weight_w2) * mh;

    const double scale = std::max(std::abs(res.predicted), 1e-12);
    res.pass = res.final_limit.converged && std::abs(res.measured - res.predicted) <= rel_tol * scale;
    return res;
}

// --- refutation --------------------------------------------------------------------

std::string RefutationVerdict::to_json() const {
    nlohmann::json j;
    j["theta"] = theta;
    j["gamma"] = gamma;
    j["case"] = case_name;
    j["predicted"] = predicted;
    j["measured"] = measured;
    j["verdict"] = verdict;
    return j.dump(2);
}

RefutationVerdict refutation_verdict(const ProfileDecomposition& g, const SelfSimParams& p,
                                     const CollisionBackend* backend) {
    RefutationVerdict v;
    v.theta = p.theta;
    v.gamma = p.gamma;
    const bool weight_w2 = std::abs(std::abs(p.theta) - 1.0 / 3.0) < 1e-12;
    v.case_name = weight_w2 ? "weight-|w|^2" : "weight-1";

    if (g.is_zero()) {
        v.verdict = "consistent (trivial profile)";
        return v;
    }

    const double Lw = g.w_grid().extent;
    MomentFunctionalSpec spec;
    spec.weight_w2 = weight_w2;
    spec.w_radii = {0.3 * Lw, 0.4 * Lw, 0.55 * Lw, 0.72 * Lw};

    const bool has_q = g.q.size() > 0 && g.q.max_abs() > 0;
    if (has_q) {
        spec.window = YWindowKind::Plateau;
        if (g.rank() == 0) {
            spec.y_scales = {1.0}; // no y dependence: a single plateau suffices
        } else {
            const double Ly = g.y_grid().extent;
            spec.y_scales = {0.5 * Ly, 0.75 * Ly, Ly, 1.5 * Ly};
        }
    } else {
        spec.window = YWindowKind::Cutoff;
        const double Ly = g.y_grid().extent;
        spec.y_scales = {0.3 * Ly, 0.4 * Ly, 0.55 * Ly, 0.72 * Ly};
    }

    MomentFunctionalResult mf = moment_functional(g, p, spec, backend);
    v.predicted = mf.predicted;
    v.measured = mf.measured;

    if (!mf.final_limit.converged) {
        v.verdict = "inconclusive: functional extrapolation did not converge";
        v.inconclusive = true;
        return v;
    }
    const double scale = std::max(std::abs(mf.predicted), 1e-10);
    if (std::abs(mf.measured) <= 0.05 * scale || std::abs(mf.predicted) <= 1e-10) {
        v.verdict = "consistent (functional vanishes)";
        return v;
    }
    std::ostringstream os;
    os << "refuted: residual functional " << mf.measured << " != 0 required (" << v.case_name << ")";
    v.verdict = os.str();
    v.refuted = true;
    return v;
}

} // namespace kinetic
