#pragma once

#include "kinetic/convolution.hpp"
#include "kinetic/grid.hpp"
#include "kinetic/reports.hpp"

#include <array>
#include <memory>
#include <optional>

namespace kinetic {

// Very soft potential parameters. The trace and divergence forms describe the
// same operator only when c_const matches the kernel identity
// div div (Pi(z)|z|^{gamma+2}) = -2(3+gamma)|z|^gamma (a Dirac mass at
// gamma = -3), so that is the default coupling; both constants stay
// configurable for homogeneous-in-constant checks.
struct LandauParams {
    double gamma = -3.0;
    double a_const = 1.0;
    double c_const = 8.0 * M_PI;

    static double consistent_c(double gamma, double a = 1.0) {
        return gamma > -3.0 ? 2.0 * (3.0 + gamma) * a : 8.0 * M_PI * a;
    }
    static LandauParams make(double gamma, double a = 1.0) {
        validate_gamma(gamma);
        return {gamma, a, consistent_c(gamma, a)};
    }
    static LandauParams with_constants(double gamma, double a, double c) {
        validate_gamma(gamma);
        return {gamma, a, c};
    }
    static void validate_gamma(double gamma);
};

// Kernel tables + spectra for one (grid, gamma); cached via landau_system().
class LandauSystem {
  public:
    LandauSystem(const GridSpec& g, double gamma);

    const GridSpec& grid() const { return grid_; }
    double gamma() const { return gamma_; }
    const Convolver& convolver() const { return conv_; }

    // a_const-free building blocks.
    MatrixField a_raw(const ScalarField& f) const;           // (Pi |.|^{gamma+2}) * f
    ScalarField c_raw(const ScalarField& f) const;           // (|.|^gamma) * f  (gamma > -3)
    // Conservative flux J_i(u, v) = sum_j (K_ij*u) d_j v - v (K_ij * d_j u).
    std::array<ScalarField, 3> flux(const ScalarField& u, const ScalarField& v) const;
    // Gradient of a_raw contracted: component (k; i, j) kernels, built lazily.
    MatrixField grad_a_raw(const ScalarField& f, int k) const;

  private:
    GridSpec grid_;
    double gamma_;
    Convolver conv_;
    std::array<Convolver::Spectrum, 6> a_hat_;
    Convolver::Spectrum c_hat_; // empty at gamma = -3
    mutable std::array<std::array<Convolver::Spectrum, 6>, 3> grad_a_hat_;
    mutable bool grad_built_ = false;
    void build_grad_kernels() const;
};

// Shared per-(grid, gamma) system cache (kernel builds and spectra are the
// expensive part; constants are applied per call).
LandauSystem& landau_system(const GridSpec& g, double gamma);
void clear_landau_cache();

// --- spec operations ---------------------------------------------------------

// abar^f = a_const * (Pi(z)|z|^{gamma+2}) * f. PSD at every node for f >= 0.
MatrixField coeff_a(const ScalarField& f, const LandauParams& p);

// cbar^f: convolution with c_const |z|^gamma for gamma > -3, c_const * f at
// gamma = -3.
ScalarField coeff_c(const ScalarField& f, const LandauParams& p);

// Q_L(f,f) = tr(abar^f D^2 f) + cbar^f f (4th-order central differences).
ScalarField q_landau_trace(const ScalarField& f, const LandauParams& p);

// Conservative form: a_const * div of the antisymmetric flux. Grid sum is
// exactly zero (telescoping) and the v / |v|^2 moments vanish to rounding by
// kernel symmetry and Pi(z) z = 0.
ScalarField q_landau_divergence(const ScalarField& f, const LandauParams& p);

// Bilinear pieces used by the profile machinery: trace form tr(abar^u D^2 v) +
// cbar^u v and the conservative counterpart.
ScalarField q_landau_bilinear_trace(const ScalarField& u, const ScalarField& v, const LandauParams& p);
ScalarField q_landau_bilinear_divergence(const ScalarField& u, const ScalarField& v, const LandauParams& p);

// Entropy dissipation functional (the symmetric pair form from Lemma 3.2's
// proof): (a/2) int int g g_* |w-w_*|^{gamma+2} <Pi(w-w_*) d, d>, with
// d = grad g / g - grad g_* / g_* taken as 4th-order gradients of log g.
// Nonnegative term by term. Nodes below `floor_value` are excluded; zeros
// inside the evaluation region are rejected when no positive floor is given.
double entropy_dissipation(const ScalarField& g, const LandauParams& p, double floor_value = 1e-30);

// Lemma 3.2 cutoff limits: sequences int chi_{R} (weight) Q_L(g,g) dw over the
// given radii, extrapolated R -> infinity. `pass` is |limit| <= rel_tol *
// ||Q||_L1 for mass/energy, and limit <= slack for entropy.
LimitReport cutoff_limit_mass(const ScalarField& g, const LandauParams& p,
                              const std::vector<double>& radii, double rel_tol = 1e-4);
LimitReport cutoff_limit_energy(const ScalarField& g, const LandauParams& p,
                                const std::vector<double>& radii, double rel_tol = 1e-3);
LimitReport cutoff_limit_entropy(const ScalarField& g, const LandauParams& p,
                                 const std::vector<double>& radii, double floor_value = 1e-30,
                                 double rel_slack = 1e-6);

// Helpers shared with the bounds module.
double sup_spectral_norm(const MatrixField& m);
double lp_norm(const ScalarField& f, double p); // p >= 1, HUGE_VAL = sup norm

} // namespace kinetic
