#pragma once

#include "kinetic/grid.hpp"
#include "kinetic/profile.hpp"
#include "kinetic/reports.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace kinetic {

// Non-cutoff collision kernel B(u, sigma) = |u|^gamma b(cos eta) with the
// concrete angular profile b(cos eta) = eta^{-2-2s} (1 + cos eta)/2 (the
// prescribed grazing singularity, vanishing at eta = pi).
struct CollisionParams {
    double gamma = -2.2;
    double s_exp = 0.4;
    double q2_const = 0.0;  // Q2 constant; make() fills the cancellation value
    double eta_min = 1e-3;  // angular quadrature cutoff for the weak form
    double sig_cut = 1e-7;  // relative node cut for weak-form pair sums

    static CollisionParams make(double gamma, double s);
    static void validate(const CollisionParams& p);

    double b_of_eta(double eta) const;
    double b_of_cos(double cos_eta) const;
};

// Constant of the Q2 representation Q2(f1,f2) = f2 (C |z|^gamma * f1) for this
// b, from the grazing cancellation identity:
//   C = 8 pi int_0^{pi/2} b(cos 2k) sin k [cos^{-(gamma+2)} k - cos k] dk.
double q2_cancellation_constant(double gamma, double s);

// Elastic collision geometry. sigma must be unit (1e-9 slack),
// v != v_* required for a well-defined angle.
struct CollideResult {
    Vec3 v_prime;
    Vec3 v_star_prime;
    double eta = 0.0;
};
CollideResult collide(const Vec3& v, const Vec3& v_star, const Vec3& sigma);

// Exact Carleman form of the Q1 kernel,
//   K_{f1}(v,h) = (4/|h|) int_{z perp h} f1(v+z) B(|u|, cos eta)/|u| dz,
// u = h + z; its grazing asymptotic is |h|^{-3-2s} int f1 |z|^{gamma+2s+1} dz
// up to a constant. Symmetric in h -> -h by construction. h = 0 rejected.
double q1_kernel(const ScalarField& f1, const Vec3& v, const Vec3& h, const CollisionParams& p);

// int_{B_2r \ B_r} K_{f1}(v, h) dh (for the annulus bound of the kernel).
double q1_kernel_annulus(const ScalarField& f1, const Vec3& v, double r, const CollisionParams& p);

// Q2(f1,f2) = q2_const f2 (|z|^gamma * f1): convolution reusing the Landau
// radial-kernel machinery.
ScalarField q2(const ScalarField& f1, const ScalarField& f2, const CollisionParams& p);

// Q1(f1,f2) = int [f2(v+h) - f2(v)] K_{f1}(v,h) dh, summed over geometric
// shells in |h| with the symmetric pairing [f2(v+h)+f2(v-h)-2 f2(v)]/2.
// The part below the smallest shell is bounded analytically and reported.
struct Q1Result {
    ScalarField field;
    double small_r_tail_bound = 0.0;
};
struct Q1Quadrature {
    // |h| reach in units of the grid extent; capped at 1.9 because the padded
    // shift theorem is alias-free only for |h| < 2 extent
    double r_max_factor = 1.9;
    int nr = 128; // geometric |h| shells
    int nrho = 96; // plane radial nodes
    int npsi = 12; // plane azimuthal nodes
    int nmu = 4;   // Gauss-Legendre nodes per half sphere
    int nphi = 12; // direction azimuthal nodes
};
Q1Result q1(const ScalarField& f1, const ScalarField& f2, const CollisionParams& p,
            const Q1Quadrature& quad = {});

// Weak form (1/2) int int int B g g_* [phi'_* + phi' - phi_* - phi]:
// tensor-product node pairs, graded eta mesh down to eta_min with uniform
// (even) azimuthal nodes pairing out the first-order term. The residual tail
// below eta_min is bounded by the Taylor estimate and reported; the eta_min
// sensitivity above 1% is flagged.
struct WeakFormResult {
    double value = 0.0;
    double tail_bound = 0.0;
    double eta_sensitivity = 0.0;
    bool angular_converged = true;
    double pair_scale = 0.0; // int int g g_* |w-w_*|^{gamma+2}
};
WeakFormResult weak_form(const ScalarField& g, const std::function<double(const Vec3&)>& phi_test,
                         double d2phi_sup, const CollisionParams& p);

// Bilinear variant int phi Q_B(f1, f2) dw = int int int B f1_* f2 [phi' - phi]
// (pre-post change of variables applied to the gain term).
WeakFormResult weak_form_bilinear(const ScalarField& f1, const ScalarField& f2,
                                  const std::function<double(const Vec3&)>& phi_test,
                                  double d2phi_sup, const CollisionParams& p);

// Lemma 5.3 cutoff limits via the weak form with phi = chi_R (|w|^2).
LimitReport cutoff_limit_boltzmann(const ScalarField& g, const CollisionParams& p,
                                   const std::vector<double>& radii, bool weight_w2,
                                   double rel_tol);

// Collision backend for the shared profile machinery: fields via q1 + q2,
// window tables via the weak form.
CollisionBackend boltzmann_backend(const CollisionParams& p);

// Boltzmann profile residual at fixed y (homogeneous mode drops y terms).
ScalarField boltzmann_profile_residual(const ProfileDecomposition& g, const SelfSimParams& p,
                                       const CollisionParams& cp, const Vec3& y = {});

// Monte-Carlo estimate of int int B(v - v_*, sigma)[f1(v'_*) - f1(v_*)] dsigma dv_*
// (the Q2 integral before the cancellation lemma) with importance sampling in
// eta and a deterministic azimuthal ring; f1 analytic. Reproducible per seed.
double q2_mc_estimate(const std::function<double(const Vec3&)>& f1, const Vec3& v,
                      const CollisionParams& p, std::uint64_t seed, std::size_t samples,
                      double box_half_width);

// (-t)-powers of the rescaled Boltzmann expansion: {1-2s theta,
// 1+theta(gamma+2s+3), 1, 1+theta(3+gamma), 2+theta(3+gamma)}; converges to
// the Landau table as s -> 1.
std::vector<double> boltzmann_expansion_exponents(double theta, double gamma, double s);
std::vector<double> landau_expansion_exponents(double theta, double gamma);

} // namespace kinetic
