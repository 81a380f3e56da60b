// kinetic-selfsim: experiment runner for the collision-operator toolkit.
// Subcommands mirror the library modules; every run is reproducible from the
// config (flat key = value file, flags override) and the seed.

#include "kinetic/boltzmann.hpp"
#include "kinetic/bounds.hpp"
#include "kinetic/evolve.hpp"
#include "kinetic/grid.hpp"
#include "kinetic/io.hpp"
#include "kinetic/landau.hpp"
#include "kinetic/parallel.hpp"
#include "kinetic/profile.hpp"
#include "kinetic/selfsim.hpp"
#include "kinetic/vpl.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace kinetic;
namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;

struct CommonOpts {
    int n = 32;
    double extent = 8.0;
    double gamma = -2.5;
    double theta = 0.2;
    double s_exp = 0.4;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out = "out";
    std::string profile = "gaussian";
    double sigma = 1.0;
    double mass = 1.0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--n", o.n, "nodes per axis");
    cmd->add_option("--extent", o.extent, "half-width of the velocity cube");
    cmd->add_option("--gamma", o.gamma, "potential exponent");
    cmd->add_option("--theta", o.theta, "self-similar exponent");
    cmd->add_option("--s", o.s_exp, "Boltzmann angular order");
    cmd->add_option("--seed", o.seed, "random seed for sampled fields / MC");
    cmd->add_option("--threads", o.threads, "worker threads (default: cores, env KINETIC_SELFSIM_THREADS)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--profile", o.profile, "field family: gaussian | two-gaussian | anisotropic | random");
    cmd->add_option("--sigma", o.sigma, "profile width");
    cmd->add_option("--mass", o.mass, "profile mass");
}

void apply_threads(const CommonOpts& o) {
    if (o.threads > 0) {
        set_thread_count(o.threads);
    } else if (const char* env = std::getenv("KINETIC_SELFSIM_THREADS")) {
        set_thread_count(std::atoi(env));
    }
}

ScalarField build_profile(const CommonOpts& o, const GridSpec& g) {
    if (o.profile == "gaussian") return gaussian_field(g, o.mass, o.sigma);
    if (o.profile == "two-gaussian") {
        ScalarField f = gaussian_field(g, o.mass, o.sigma, {1.1, 0, 0});
        f += gaussian_field(g, o.mass, o.sigma, {-1.1, 0, 0});
        return f;
    }
    if (o.profile == "anisotropic")
        return ScalarField::sample(g, [&](const Vec3& w) {
            const double s2 = o.sigma * o.sigma;
            return o.mass * std::exp(-0.5 * (w.x * w.x / (1.44 * s2) + w.y * w.y / s2 + w.z * w.z / (0.81 * s2)));
        });
    if (o.profile == "random") return random_smooth_field(g, o.seed);
    throw CLI::ValidationError("--profile", "unknown profile family: " + o.profile);
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream f(path);
    f << j.dump(2) << "\n";
}

std::string outfile(const CommonOpts& o, const std::string& name) {
    fs::create_directories(o.out);
    return (fs::path(o.out) / name).string();
}

// ---------------------------------------------------------------------------

int run_check_theta(const CommonOpts& o, const std::string& mode) {
    SelfSimParams p{o.gamma, o.theta, o.s_exp};
    auto rep = check_theta_admissible(p, selfsim_mode_from_string(mode));
    nlohmann::json j;
    j["mode"] = mode;
    j["theta"] = o.theta;
    j["gamma"] = o.gamma;
    j["s"] = o.s_exp;
    j["admissible"] = rep.ok;
    j["violations"] = rep.violations;
    std::cout << j.dump(2) << "\n";
    write_json(outfile(o, "check_theta.json"), j);
    return rep.ok ? kExitPass : kExitFail;
}

int run_coeffs(const CommonOpts& o) {
    GridSpec g(o.n, o.extent);
    auto lp = LandauParams::make(o.gamma);
    ScalarField f = build_profile(o, g);
    MatrixField a = coeff_a(f, lp);
    ScalarField c = coeff_c(f, lp);

    write_snapshot(outfile(o, "f.f64"), f);
    write_snapshot(outfile(o, "cbar.f64"), c);
    static const char* names[6] = {"a_xx", "a_xy", "a_xz", "a_yy", "a_yz", "a_zz"};
    for (int k = 0; k < 6; ++k) {
        ScalarField comp(g);
        comp.values() = a.component(k);
        write_snapshot(outfile(o, std::string("abar_") + names[k] + ".f64"), comp);
    }
    CsvTable t;
    t.header = {"sup_a_norm", "min_eigenvalue", "sup_c", "mass"};
    t.rows = {{sup_spectral_norm(a), a.min_eigenvalue(), c.max_abs(), integrate(f)}};
    t.write(outfile(o, "coeffs.csv"));
    const bool pass = a.min_eigenvalue() >= -1e-12;
    std::cout << "coeffs: sup|a| = " << sup_spectral_norm(a) << ", min eig = " << a.min_eigenvalue()
              << (pass ? " [PASS]" : " [FAIL]") << "\n";
    return pass ? kExitPass : kExitFail;
}

int run_qlandau(const CommonOpts& o) {
    GridSpec g(o.n, o.extent);
    auto lp = LandauParams::make(o.gamma);
    ScalarField f = build_profile(o, g);
    ScalarField qt = q_landau_trace(f, lp);
    ScalarField qd = q_landau_divergence(f, lp);

    const double l1 = lp_norm(qd, 1.0);
    const double mass_res = std::abs(integrate(qd)) / l1;
    const double mom_res = std::abs(integrate(qd, PolyWeight{{{1, 0, 0, 1.0}}})) / l1;
    const double energy_res = std::abs(integrate(qd, PolyWeight::abs_w_squared())) / (l1 * o.extent * o.extent);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < qt.size(); ++i) {
        num += (qt[i] - qd[i]) * (qt[i] - qd[i]);
        den += qt[i] * qt[i];
    }
    const double form_gap = den > 0 ? std::sqrt(num / den) : 0.0;

    CsvTable t;
    t.header = {"mass_residual", "momentum_residual", "energy_residual", "trace_div_rel_l2"};
    t.rows = {{mass_res, mom_res, energy_res, form_gap}};
    t.write(outfile(o, "qlandau.csv"));
    write_snapshot(outfile(o, "q_divergence.f64"), qd);

    const bool pass = mass_res <= 1e-12 && mom_res <= 1e-3 && energy_res <= 1e-3;
    std::cout << "qlandau: mass " << mass_res << ", momentum " << mom_res << ", energy " << energy_res
              << ", trace-div " << form_gap << (pass ? " [PASS]" : " [FAIL]") << "\n";
    return pass ? kExitPass : kExitFail;
}

int run_bounds(const CommonOpts& o, const std::string& kind, double exponent, int samples) {
    GridSpec g(o.n, o.extent);
    auto lp = LandauParams::make(o.gamma);
    CsvTable t;
    t.header = {"sample", "lhs", "rhs", "ratio"};
    bool pass = true;
    double lo = HUGE_VAL, hi = 0;
    for (int s = 0; s < samples; ++s) {
        ScalarField h = random_smooth_field(g, o.seed + static_cast<std::uint64_t>(s));
        BoundSample smp;
        if (kind == "a1hi") smp = bound_sample_a1hi(h, exponent, lp, s);
        else if (kind == "aloinf") smp = bound_sample_aloinf(h, exponent, lp, s);
        else if (kind == "agrad") smp = bound_sample_agrad(h, exponent, lp, s);
        else if (kind == "c") smp = bound_sample_c(h, exponent, lp, s);
        else throw CLI::ValidationError("--kind", "unknown inequality: " + kind);
        t.rows.push_back({static_cast<double>(s), smp.lhs, smp.rhs, smp.ratio});
        if (!std::isfinite(smp.ratio) || smp.ratio <= 0) pass = false;
        lo = std::min(lo, smp.ratio);
        hi = std::max(hi, smp.ratio);
    }
    pass = pass && hi / lo <= 50.0;
    t.write(outfile(o, "bounds_" + kind + ".csv"));
    std::cout << "bounds " << kind << ": fitted constant " << hi << ", spread " << hi / lo
              << (pass ? " [PASS]" : " [FAIL]") << "\n";
    return pass ? kExitPass : kExitFail;
}

int run_selfsim_errors(const CommonOpts& o, double beta, double sigma_x) {
    GridSpec g(o.n, o.extent);
    ScalarField q = gaussian_field(g, o.mass, 0.8 * o.sigma);
    PhiModel phi;
    phi.beta = beta;
    phi.sigma_v = 1.6 * o.sigma;
    phi.sigma_x = sigma_x;
    SelfSimParams p{o.gamma, o.theta};
    auto rep = verify_error_decay(q, phi, p, {-1e-1, -1e-2, -1e-3});

    CsvTable t;
    t.header = {"minus_t", "sup_E1", "sup_E2", "slope_E1", "slope_E2", "predicted_E1", "predicted_E2"};
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        t.rows.push_back({rep.times[i], rep.sup_e1[i], rep.sup_e2[i], rep.slope_e1, rep.slope_e2,
                          rep.predicted_e1, rep.predicted_e2});
    t.write(outfile(o, "selfsim_errors.csv"));
    write_svg_lines(outfile(o, "selfsim_errors.svg"), "error-term decay", rep.times,
                    {rep.sup_e1, rep.sup_e2}, {"sup|E1|", "sup|E2|"}, true, true);
    std::cout << "selfsim-errors: slope E1 " << rep.slope_e1 << " (predicted " << rep.predicted_e1
              << "), slope E2 " << rep.slope_e2 << " (predicted " << rep.predicted_e2 << ") "
              << (rep.pass ? "[PASS]" : "[FAIL]") << "\n";
    return rep.pass ? kExitPass : kExitFail;
}

int finish_refutation(const CommonOpts& o, const RefutationVerdict& v) {
    std::cout << v.to_json() << "\n";
    std::ofstream f(outfile(o, "refutation.json"));
    f << v.to_json() << "\n";
    if (v.inconclusive) return kExitInconclusive;
    return kExitPass;
}

int run_refute_landau(const CommonOpts& o) {
    GridSpec g(o.n, o.extent);
    SelfSimParams p{o.gamma, o.theta};
    auto profile = ProfileDecomposition::homogeneous(build_profile(o, g));
    return finish_refutation(o, refutation_verdict(profile, p));
}

int run_refute_boltzmann(const CommonOpts& o) {
    GridSpec g(o.n, o.extent);
    SelfSimParams p{o.gamma, o.theta, o.s_exp};
    auto cp = CollisionParams::make(o.gamma, o.s_exp);
    cp.sig_cut = 1e-6;
    auto backend = boltzmann_backend(cp);
    auto profile = ProfileDecomposition::homogeneous(build_profile(o, g));
    return finish_refutation(o, refutation_verdict(profile, p, &backend));
}

int run_refute_vpl(const CommonOpts& o) {
    GridSpec gy(std::max(16, o.n / 2), 6.0), gw(o.n, o.extent);
    SeparableTerm term;
    term.a = gaussian_field(gy, 1.0, 1.1);
    term.b = ScalarField::sample(gw, [&](const Vec3& w) {
        const double s2 = o.sigma * o.sigma;
        return o.mass * std::exp(-0.5 * (w.x * w.x / (1.44 * s2) + w.y * w.y / s2 + w.z * w.z / (0.81 * s2)));
    });
    auto g = ProfileDecomposition::with_h(ScalarField(gw), {std::move(term)});
    auto rep = vpl_entropy_functional(g, {0.3 * gw.extent, 0.42 * gw.extent, 0.56 * gw.extent},
                                      {0.35 * gy.extent, 0.45 * gy.extent, 0.6 * gy.extent});

    CsvTable t;
    t.header = {"radius_y", "mass_term"};
    for (std::size_t i = 0; i < rep.mass_term.radii.size(); ++i)
        t.rows.push_back({rep.mass_term.radii[i], rep.mass_term.values[i]});
    t.write(outfile(o, "vpl_mass_term.csv"));
    write_svg_lines(outfile(o, "vpl_mass_term.svg"), "VPL mass term vs y-cutoff",
                    rep.mass_term.radii, {rep.mass_term.values}, {"mass term"});

    nlohmann::json j;
    j["theta"] = -1.0 / 3.0;
    j["gamma"] = -3.0;
    j["case"] = "entropy-weighted";
    j["mass_limit"] = rep.mass_term.limit;
    j["dissipation"] = rep.dissipation;
    j["gap"] = rep.gap;
    j["verdict"] = rep.refuted ? "refuted: positive mass and nonnegative dissipation force int g <= 0" : "inconclusive";
    std::cout << j.dump(2) << "\n";
    write_json(outfile(o, "refutation.json"), j);
    return rep.refuted ? kExitPass : kExitInconclusive;
}

int run_evolve(const CommonOpts& o, int steps, double dt_factor) {
    GridSpec g(o.n, o.extent);
    auto lp = LandauParams::make(o.gamma);
    ScalarField f0 = build_profile(o, g);
    const double dt = dt_factor * landau_stable_dt(f0, lp);
    EvolutionState s = evolve(std::move(f0), lp, dt, steps);

    CsvTable t;
    t.header = {"t", "mass", "energy", "entropy", "sup_norm", "l2", "l3", "linf"};
    for (const auto& m : s.history)
        t.rows.push_back({m.time, m.mass, m.energy, m.entropy, m.sup_norm, m.l2, m.l3, m.sup_norm});
    t.write(outfile(o, "evolve_monitors.csv"));
    std::vector<double> times, ent;
    for (const auto& m : s.history) {
        times.push_back(m.time);
        ent.push_back(m.entropy);
    }
    write_svg_lines(outfile(o, "evolve_entropy.svg"), "entropy history", times, {ent}, {"H(t)"});

    const double mass_drift = std::abs(s.history.back().mass - s.history.front().mass);
    bool entropy_ok = true;
    for (std::size_t i = 1; i < s.history.size(); ++i)
        entropy_ok &= s.history[i].entropy <= s.history[i - 1].entropy + 1e-6 * std::abs(s.history[i - 1].entropy);
    const bool pass = mass_drift <= s.clipped_mass + 1e-12 * std::abs(s.history.front().mass) && entropy_ok;
    std::cout << "evolve: " << steps << " steps, dt " << dt << ", mass drift " << mass_drift
              << ", clipped " << s.clipped_mass << (pass ? " [PASS]" : " [FAIL]") << "\n";
    return pass ? kExitPass : kExitFail;
}

int run_blowup_fit(const CommonOpts& o, const std::string& history_csv, bool manufactured, double T) {
    std::vector<EvolutionState::Monitor> history;
    if (manufactured) {
        std::vector<double> times;
        for (int k = 0; k < 25; ++k) times.push_back(0.02 * k);
        history = manufactured_blowup_history(o.gamma, o.theta, T, times);
    } else if (!history_csv.empty()) {
        std::ifstream f(history_csv);
        if (!f) {
            std::cerr << "blowup-fit: cannot open " << history_csv << "\n";
            return kExitUsage;
        }
        std::string line;
        std::getline(f, line); // header
        while (std::getline(f, line)) {
            EvolutionState::Monitor m{};
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &m.time, &m.mass, &m.energy,
                            &m.entropy, &m.sup_norm, &m.l2, &m.l3) >= 7)
                history.push_back(m);
        }
    } else {
        // fresh relaxing run
        GridSpec g(o.n, o.extent);
        auto lp = LandauParams::make(o.gamma);
        ScalarField f0 = build_profile(o, g);
        EvolutionState s = evolve(std::move(f0), lp, 0.4 * landau_stable_dt(f0, lp), 16);
        history = s.history;
    }
    auto rep = blowup_indicator(history, o.gamma);
    nlohmann::json j;
    j["blowup_trend"] = rep.blowup_trend;
    j["theta"] = rep.theta;
    j["blowup_time"] = rep.blowup_time;
    j["fit_residual"] = rep.fit_residual;
    j["note"] = rep.note;
    std::cout << j.dump(2) << "\n";
    write_json(outfile(o, "blowup_fit.json"), j);
    if (!rep.blowup_trend && rep.note.find("insufficient") != std::string::npos) return kExitInconclusive;
    return kExitPass;
}

} // namespace

// Flat key = value run configs: `--config FILE` anywhere after the subcommand
// expands to `--key value ...` inserted before the explicit flags, so the
// command line overrides the file.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] != "--config") continue;
        std::ifstream f(args[i + 1]);
        if (!f) throw std::runtime_error("cannot open config file " + args[i + 1]);
        std::vector<std::string> injected;
        std::string line;
        while (std::getline(f, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
            if (key.empty()) continue;
            injected.push_back("--" + key);
            injected.push_back(val);
        }
        args.erase(args.begin() + i, args.begin() + i + 2);
        // insert right after the subcommand name (index 1 when present)
        const std::size_t at = args.size() >= 2 ? 2 : args.size();
        args.insert(args.begin() + std::min(at, args.size()), injected.begin(), injected.end());
        break;
    }
    return args;
}

int main(int argc, char** argv) {
    CLI::App app{"kinetic-selfsim: Landau/Boltzmann collision operators, self-similar rescaling, profile refutation"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string mode = "landau-inhom", kind = "aloinf", history_csv;
    double exponent = 1.0, beta = 0.0, sigma_x = 0.0, blowup_T = 0.6, dt_factor = 0.3;
    int samples = 20, steps = 100;
    bool manufactured = false;

    auto* c_check = app.add_subcommand("check-theta", "validate self-similar exponents for a regime");
    add_common(c_check, o);
    c_check->add_option("--mode", mode, "landau-inhom | landau-hom | boltzmann-inhom | boltzmann-hom | vpl");

    auto* c_coeffs = app.add_subcommand("coeffs", "Landau coefficients of a profile (snapshots + summary)");
    add_common(c_coeffs, o);

    auto* c_ql = app.add_subcommand("qlandau", "collision operator fields and conservation residuals");
    add_common(c_ql, o);

    auto* c_bounds = app.add_subcommand("bounds", "coefficient inequality sweep over random fields");
    add_common(c_bounds, o);
    c_bounds->add_option("--kind", kind, "a1hi | aloinf | agrad | c");
    c_bounds->add_option("--exponent", exponent, "Lebesgue exponent inside the printed window");
    c_bounds->add_option("--samples", samples, "number of random fields");

    auto* c_err = app.add_subcommand("selfsim-errors", "rescaling error terms E1/E2 decay run");
    add_common(c_err, o);
    c_err->add_option("--beta", beta, "background blow-up rate");
    c_err->add_option("--sigma-x", sigma_x, "background spatial width (0: homogeneous)");

    auto* c_rl = app.add_subcommand("refute-landau", "moment-functional refutation of a Landau profile");
    add_common(c_rl, o);
    auto* c_rb = app.add_subcommand("refute-boltzmann", "moment-functional refutation, Boltzmann collision");
    add_common(c_rb, o);
    auto* c_rv = app.add_subcommand("refute-vpl", "entropy-weighted refutation of a VPL profile");
    add_common(c_rv, o);

    auto* c_ev = app.add_subcommand("evolve", "homogeneous Landau run with monitors");
    add_common(c_ev, o);
    c_ev->add_option("--steps", steps, "number of steps");
    c_ev->add_option("--dt-factor", dt_factor, "dt as a fraction of the stability bound");

    auto* c_bf = app.add_subcommand("blowup-fit", "type I rate fit of a norm history");
    add_common(c_bf, o);
    c_bf->add_option("--history", history_csv, "monitor CSV from an evolve run");
    c_bf->add_flag("--manufactured", manufactured, "fit a synthetic type I history at (--theta, --T)");
    c_bf->add_option("--T", blowup_T, "manufactured blow-up time");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::vector<const char*> cargs;
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    apply_threads(o);
    try {
        if (c_check->parsed()) return run_check_theta(o, mode);
        if (c_coeffs->parsed()) return run_coeffs(o);
        if (c_ql->parsed()) return run_qlandau(o);
        if (c_bounds->parsed()) return run_bounds(o, kind, exponent, samples);
        if (c_err->parsed()) return run_selfsim_errors(o, beta, sigma_x);
        if (c_rl->parsed()) return run_refute_landau(o);
        if (c_rb->parsed()) return run_refute_boltzmann(o);
        if (c_rv->parsed()) return run_refute_vpl(o);
        if (c_ev->parsed()) return run_evolve(o, steps, dt_factor);
        if (c_bf->parsed()) return run_blowup_fit(o, history_csv, manufactured, blowup_T);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInconclusive;
    }
    return kExitUsage;
}
