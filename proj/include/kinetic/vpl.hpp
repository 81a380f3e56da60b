#pragma once

#include "kinetic/grid.hpp"
#include "kinetic/profile.hpp"
#include "kinetic/reports.hpp"

#include <array>
#include <functional>

namespace kinetic {

// Self-consistent interaction force F[rho](x) = C int (x-z)/|x-z|^3 rho(z) dz
// (background case n0 = 0; C > 0 repulsive, C < 0 attractive).
struct ForceField {
    std::array<ScalarField, 3> comp;
    double coupling = 1.0;

    const GridSpec& grid() const { return comp[0].grid(); }
    Vec3 at_node(std::size_t i) const { return {comp[0][i], comp[1][i], comp[2][i]}; }
    Vec3 tricubic(const Vec3& x) const {
        return {comp[0].tricubic(x), comp[1].tricubic(x), comp[2].tricubic(x)};
    }
};

ForceField compute_force(const ScalarField& rho, double coupling);

// Gauss law diagnostic: flux of F through the sphere of the given radius,
// divided by 4 pi C, against the enclosed mass.
struct GaussCheck {
    double flux_over_4pi_c = 0.0;
    double enclosed_mass = 0.0;
    double relative_gap = 0.0;
};
GaussCheck gauss_law_check(const ForceField& F, const ScalarField& rho, double radius);

// Linear rescaling identity of the force under the VPL scaling (gamma = -3,
// theta = -1/3):
//   F[phi + (-t)^{-2} rho_g(./(-t)^{2/3})]((-t)^{2/3} y)
//     = F[phi]((-t)^{2/3} y) + (-t)^{-4/3} F[rho_g](y).
// Returns the max relative mismatch over the grid.
double rescaled_force_identity(const std::function<double(const Vec3&)>& phi_rho,
                               const ScalarField& g_rho, double t, double coupling = 1.0);

// VPL profile residual at fixed y (case (a): q = 0, integrable profile):
//   g + (2/3) y.grad_y g - (1/3) w.grad_w g + w.grad_y g + F[g].grad_w g - Q_L(g,g)
ScalarField vpl_profile_residual(const ProfileDecomposition& g, double coupling, const Vec3& y = {});

// Entropy-weighted refutation functional of Theorem 4.1's proof, for rank-1
// positive separable profiles g = a(y) b(w): every displayed term separates
// through log g = log a + log b. The mass term tends to int g, the collision
// pairing to minus the entropy dissipation (>= 0), the cutoff-derivative
// remainders to zero; a positive trial profile leaves the gap
// int g + dissipation > 0 where a true solution would force int g <= 0.
struct VplEntropyReport {
    LimitReport mass_term;
    LimitReport collision_term;
    double dissipation = 0.0;
    std::vector<std::string> remainder_names;
    std::vector<double> remainder_slopes; // decay of each cutoff term along its limit axis
    std::vector<bool> remainder_trivial;  // identically-zero terms (parity)
    double gap = 0.0;
    bool refuted = false;
    std::vector<NormCheck> hypothesis_norms; // (1+|w|)(g ln g - g) integrability
};
VplEntropyReport vpl_entropy_functional(const ProfileDecomposition& g,
                                        const std::vector<double>& radii_w,
                                        const std::vector<double>& radii_y,
                                        double coupling = 1.0,
                                        double floor_value = 1e-30);

} // namespace kinetic
