#pragma once

#include "kinetic/grid.hpp"
#include "kinetic/landau.hpp"
#include "kinetic/reports.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kinetic {

// Parameters of the two-parameter rescaling and the self-similar frame.
// t is the time before blow-up (blow-up at t = 0, so t < 0).
struct SelfSimParams {
    double gamma = -3.0;
    double theta = 0.0;
    double s_exp = 0.5; // Boltzmann angular order, unused for Landau modes
    double t = -1.0;
    double lambda_ = 1.0;
    double alpha = 0.0;
};

enum class SelfSimMode { LandauInhom, LandauHom, BoltzmannInhom, BoltzmannHom, Vpl };

std::string to_string(SelfSimMode m);
SelfSimMode selfsim_mode_from_string(const std::string& s);

struct AdmissibilityReport {
    bool ok = false;
    std::vector<std::string> violations; // exact constraint names
};

// Validates theta (and gamma/s ranges) for the requested regime.
AdmissibilityReport check_theta_admissible(const SelfSimParams& p, SelfSimMode mode);

// y = x/(-t)^{1+theta}, w = v/(-t)^theta and the inverse. t >= 0 rejected.
std::pair<Vec3, Vec3> to_selfsim(const Vec3& x, const Vec3& v, const SelfSimParams& p);
std::pair<Vec3, Vec3> from_selfsim(const Vec3& y, const Vec3& w, const SelfSimParams& p);

// f_{lambda,alpha}(t,v) = lambda^{alpha+3+gamma} f(lambda^alpha t, lambda v)
// for homogeneous (v-only) snapshots: given f at source time t0, returns the
// rescaled snapshot at time t0 / lambda^alpha on the same grid (tricubic
// resampling; nodes that map outside the source domain are counted).
struct RescaledField {
    ScalarField field;
    double time = 0.0;
    std::size_t out_of_domain_nodes = 0;
};
RescaledField rescale_solution(const ScalarField& f_at_t0, double t0, const SelfSimParams& p);

// Closed-form background family phi(t,x,v) =
//   amp (-t)^{-beta} exp(-|x-x0|^2/(2 sigma_x^2)) exp(-|v|^2/(2 sigma_v^2)),
// with sigma_x = 0 meaning no x dependence. Everything needed by the error
// terms (time derivative, v-Hessian, x-gradient) is analytic.
struct PhiModel {
    double beta = 0.0;
    double amp = 1.0;
    double sigma_v = 1.0;
    double sigma_x = 0.0;
    Vec3 x0{};

    bool x_dependent() const { return sigma_x > 0.0; }
    bool time_dependent() const { return beta != 0.0; }

    double value(double t, const Vec3& x, const Vec3& v) const;
    double dt(double t, const Vec3& x, const Vec3& v) const;
    Vec3 grad_x(double t, const Vec3& x, const Vec3& v) const;
    Sym3 hessian_v(double t, const Vec3& x, const Vec3& v) const;
    double mass_v(double t, const Vec3& x) const; // int phi dv at fixed (t,x)
};

// Decay exponents predicted from the model: the slowest (-t)-power among the
// terms of E1 / E2 for this (theta, gamma, beta) and term structure.
double predicted_e1_exponent(const PhiModel& phi, const SelfSimParams& p);
double predicted_e2_exponent(const PhiModel& phi, const SelfSimParams& p);
// Critical beta of the background condition: the model satisfies the decay
// hypotheses iff beta < critical (may be <= 0, meaning no admissible beta).
double phi_condition_critical_rate(const SelfSimParams& p);

// abar^phi, cbar^phi and phi evaluated at arbitrary velocities: grid
// convolution near the core, monopole far field (Pi(V)|V|^{gamma+2} mass,
// |V|^gamma mass) beyond it.
class PhiCoefficients {
  public:
    PhiCoefficients(const PhiModel& phi, const SelfSimParams& p, double t, const Vec3& x,
                    int n_grid = 32);
    double phi_at(const Vec3& v) const;
    Sym3 a_at(const Vec3& v) const;
    double c_at(const Vec3& v) const;

  private:
    LandauParams lp_;
    PhiModel model_;
    double t_;
    Vec3 x_;
    GridSpec grid_;
    MatrixField a_;
    std::array<ScalarField, 6> a_interp_;
    ScalarField c_;
    double mass_ = 0.0;
    double far_radius_ = 0.0;
};

// Error fields of the rescaled expansion at fixed y, sampled on the w-grid of
// g_y (the profile slice at that y):
//   E1 = -(-t)^{1-2theta} tr(abar^phi D_w^2 g) - (-t) cbar^phi g
//        - (-t)^{1+theta(3+gamma)} cbar^g phi
//   E2 = -(-t)^{1+theta(5+gamma)} tr(abar^g D_v^2 phi)
//        + (-t)^{2+theta(3+gamma)} (dt phi + v . grad_x phi - Q_L(phi,phi))
// with phi and its coefficients evaluated at (t, (-t)^{1+theta} y, (-t)^theta w).
ScalarField error_E1_at(const ScalarField& g_y, const PhiModel& phi, const SelfSimParams& p, const Vec3& y);
ScalarField error_E2_at(const ScalarField& g_y, const PhiModel& phi, const SelfSimParams& p, const Vec3& y);

// Rescaled coefficient identities:
//   abar^f = abar^phi + (-t)^{2theta-1} abar^g,   cbar^f = cbar^phi + (-t)^{-1} cbar^g
// evaluated on a velocity grid matched to g's w-grid at time p.t. Returns the
// max relative mismatch for (a, c).
struct CoeffIdentityResidual {
    double mismatch_a = 0.0;
    double mismatch_c = 0.0;
};
CoeffIdentityResidual rescaled_coeff_identities(const ScalarField& g, const PhiModel& phi, const SelfSimParams& p);

// Decay harness over a t-sequence: sup_{|y|<=Ry, w in grid} of |E1|, |E2|,
// fitted log-log slopes vs the predictions, monotonicity verdicts.
struct DecayReport {
    std::vector<double> times; // values of -t
    std::vector<double> sup_e1, sup_e2;
    double slope_e1 = 0.0, slope_e2 = 0.0;
    double predicted_e1 = 0.0, predicted_e2 = 0.0;
    bool decreasing_e1 = false, decreasing_e2 = false;
    bool pass = false;
    std::string note;
};
DecayReport verify_error_decay(const ScalarField& g_y, const PhiModel& phi, SelfSimParams p,
                               const std::vector<double>& t_sequence,
                               const std::vector<Vec3>& y_samples = {Vec3{}});

} // namespace kinetic
