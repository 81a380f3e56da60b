#pragma once

#include "kinetic/grid.hpp"
#include "kinetic/landau.hpp"

#include <string>
#include <vector>

namespace kinetic {

// Homogeneous Landau integrator state with conservation/entropy monitors.
struct EvolutionState {
    ScalarField f;
    double time = 0.0;
    double dt = 0.0;
    double clipped_mass = 0.0; // total mass removed by positivity clipping
    double cached_bound = 0.0; // stability bound, refreshed every few steps
    int steps_since_bound = 0;

    struct Monitor {
        double time, mass, momentum_x, energy, entropy, sup_norm, l2, l3;
    };
    std::vector<Monitor> history;
};

// Measured stability constant of the coefficient-frozen explicit scheme:
// dt <= cfl * spacing^2 / sup ||abar||.
double landau_stable_dt(const ScalarField& f, const LandauParams& p, double cfl = 0.15);

EvolutionState make_evolution_state(ScalarField f0, double dt);
void record_monitors(EvolutionState& s);

// One explicit step of d_t f = Q_L(f,f) in conservative form (exact discrete
// mass conservation). dt above the stability bound is rejected; negative
// undershoots are clipped to zero and the clipped mass accumulated.
void step(EvolutionState& s, const LandauParams& p);

// Runs n steps with monitor recording.
EvolutionState evolve(ScalarField f0, const LandauParams& p, double dt, int steps);

// Type I blow-up diagnostics: fits the recorded norm growth against
// (T - t)^{-kappa(q, theta)} with kappa = 1 + theta (3+gamma) - 3 theta / q
// over a (theta, T) scan. Relaxing histories report no trend.
struct BlowupReport {
    bool blowup_trend = false;
    double theta = 0.0;
    double blowup_time = 0.0;
    double fit_residual = 0.0;
    std::string note;
};
BlowupReport blowup_indicator(const std::vector<EvolutionState::Monitor>& history, double gamma);

// Synthetic Type I history at the exact ansatz rates (fit fixture).
std::vector<EvolutionState::Monitor> manufactured_blowup_history(double gamma, double theta, double T,
                                                                 const std::vector<double>& times);

} // namespace kinetic
