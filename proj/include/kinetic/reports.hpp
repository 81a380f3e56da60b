#pragma once

#include <string>
#include <vector>

namespace kinetic {

// Outcome of a numerical R -> infinity (or y0 -> infinity, t -> 0) limit:
// the sampled sequence, an extrapolated limit with convergence diagnostics,
// and a verdict filled in by the caller against its own threshold.
struct LimitReport {
    std::vector<double> radii;  // or the abscissa of the sequence (t, y0, ...)
    std::vector<double> values;
    double limit = 0.0;          // extrapolated
    double limit_error = 0.0;    // magnitude of the last correction applied
    bool converged = false;      // successive differences decrease
    bool extrapolated = false;   // false when the sequence was returned as-is
    double predicted = 0.0;      // caller-supplied reference value, when any
    bool pass = false;
    std::string note;
};

// Aitken/Richardson extrapolation of a sequence assumed to approach its limit
// geometrically (or faster). Does not extrapolate non-Cauchy sequences; those
// are reported with converged = false and limit = last value.
LimitReport extrapolate_sequence(const std::vector<double>& abscissa, const std::vector<double>& values);

// Least-squares slope of log|y| vs log x. Returns 0 on degenerate input.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Fitted convergence order from values at resolutions n and errors e(n):
// slope of log e against log h (h ~ 1/n).
double fitted_order(const std::vector<double>& n_values, const std::vector<double>& errors);

// One sampled inequality instance.
struct BoundSample {
    int id = 0;
    double lhs = 0.0;
    double rhs = 0.0;   // right-hand side without the universal constant
    double ratio = 0.0; // lhs / rhs
};

// Report of a Lemma-style inequality sweep: the fitted constant is the max
// ratio; pass means every ratio is finite/positive and the spread stays
// bounded (evidence of one universal constant across the sweep).
struct BoundReport {
    std::string kind;        // a1hi | aloinf | agrad | c | splitting | kernel_annulus
    double exponent = 0.0;   // p or q used
    std::vector<BoundSample> samples;
    double fitted_constant = 0.0;
    double ratio_spread = 0.0; // max ratio / min ratio
    bool pass = false;
    std::string note;

    void finalize(double max_spread = 50.0);
};

} // namespace kinetic
