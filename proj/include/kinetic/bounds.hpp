#pragma once

#include "kinetic/grid.hpp"
#include "kinetic/landau.hpp"
#include "kinetic/reports.hpp"

#include <string>
#include <vector>

namespace kinetic {

// Admissible exponent window (half-open [lo, hi)) for each coefficient
// inequality; boundary exponents are rejected.
struct ExponentWindow {
    double lo = 1.0;
    double hi = 1.0;
    bool contains(double p) const { return p >= lo && p < hi; }
    std::string describe() const;
};

ExponentWindow window_a1hi(double gamma);   // 1 <= p < -3/(gamma+2)
ExponentWindow window_aloinf(double gamma); // 1 <= q < 3/(gamma+5)
ExponentWindow window_agrad(double gamma);  // 1 <= p < -3/(gamma+1)
ExponentWindow window_c(double gamma);      // 1 <= p < -3/gamma, gamma in (-3,-2]

// One sampled verification: measures the left side (a sup over grid nodes)
// and the product of norms on the right, records lhs/rhs.
BoundSample bound_sample_a1hi(const ScalarField& h, double p, const LandauParams& lp, int id = 0);
BoundSample bound_sample_aloinf(const ScalarField& h, double q, const LandauParams& lp, int id = 0);
BoundSample bound_sample_agrad(const ScalarField& h, double p, const LandauParams& lp, int id = 0);
BoundSample bound_sample_c(const ScalarField& h, double p, const LandauParams& lp, int id = 0);

// Sweep drivers: evaluate the sample plus its scalings lambda*h (ratios must
// be invariant under homogeneity) and report. Inadmissible exponents throw
// std::domain_error carrying the admissible interval.
BoundReport verify_bound_a1hi(const ScalarField& h, double p, const LandauParams& lp);
BoundReport verify_bound_aloinf(const ScalarField& h, double q, const LandauParams& lp);
BoundReport verify_bound_agrad(const ScalarField& h, double p, const LandauParams& lp);
BoundReport verify_bound_c(const ScalarField& h, double p, const LandauParams& lp);

// Splitting estimate behind Lemma 3.1: for s in (-3, 0) and
// 1 <= p < 3/(3+s) < r <= infinity,
//   |int h(v - v_*) |v_*|^s dv_*| <= C (R^{s+3-3/p} ||h||_p + R^{s+3-3/r} ||h||_r).
// Evaluated at the grid sup of the left side against the two-term right side
// for each R in the sweep.
BoundReport verify_splitting(const ScalarField& h, double s, double p, double r,
                             const std::vector<double>& radii);

} // namespace kinetic
