#include "kinetic/reports.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kinetic {

LimitReport extrapolate_sequence(const std::vector<double>& abscissa, const std::vector<double>& values) {
    LimitReport r;
    r.radii = abscissa;
    r.values = values;
    const std::size_t m = values.size();
    if (m == 0) {
        r.note = "empty sequence";
        return r;
    }
    r.limit = values.back();
    if (m == 1) {
        r.converged = true;
        return r;
    }
    std::vector<double> d(m - 1);
    for (std::size_t k = 0; k + 1 < m; ++k) d[k] = values[k + 1] - values[k];

    // Cauchy check: |d_k| non-increasing within slack (a factor covers noise
    // around the rounding floor).
    bool cauchy = true;
    const double scale = std::max(std::abs(values.back()), 1e-300);
    for (std::size_t k = 1; k < d.size(); ++k) {
        if (std::abs(d[k]) > 1.5 * std::abs(d[k - 1]) && std::abs(d[k]) > 1e-13 * scale) cauchy = false;
    }
    r.converged = cauchy;
    if (!cauchy) {
        r.note = "non-Cauchy sequence: no extrapolation";
        return r;
    }
    const double dn = d.back();
    r.extrapolated = true;
    if (d.size() >= 2 && std::abs(d[d.size() - 2]) > 0) {
        double rho = dn / d[d.size() - 2];
        if (rho > 0 && rho < 0.95) {
            // geometric tail: v_inf = v_last + d_n * rho / (1 - rho)
            r.limit = values.back() + dn * rho / (1.0 - rho);
            r.limit_error = std::abs(dn * rho / (1.0 - rho)) + std::abs(dn) * 0.1;
            return r;
        }
        if (rho <= 0) {
            // alternating or super-geometric: last value already within |d_n|
            r.limit = values.back() + 0.5 * dn * rho / (1.0 - rho);
            r.limit_error = std::abs(dn);
            return r;
        }
    }
    r.limit = values.back();
    r.limit_error = std::abs(dn);
    return r;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] > 0 && std::abs(y[i]) > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(std::abs(y[i])));
        }
    }
    const std::size_t m = lx.size();
    if (m < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double det = m * sxx - sx * sx;
    if (std::abs(det) < 1e-14) return 0.0;
    return (m * sxy - sx * sy) / det;
}

double fitted_order(const std::vector<double>& n_values, const std::vector<double>& errors) {
    std::vector<double> h(n_values.size());
    for (std::size_t i = 0; i < n_values.size(); ++i) h[i] = 1.0 / n_values[i];
    return loglog_slope(h, errors);
}

void BoundReport::finalize(double max_spread) {
    fitted_constant = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    bool ok = !samples.empty();
    for (const auto& s : samples) {
        if (!std::isfinite(s.ratio) || !(s.ratio > 0)) {
            ok = false;
            continue;
        }
        fitted_constant = std::max(fitted_constant, s.ratio);
        lo = std::min(lo, s.ratio);
    }
    ratio_spread = (ok && lo > 0) ? fitted_constant / lo : std::numeric_limits<double>::infinity();
    pass = ok && ratio_spread <= max_spread;
}

} // namespace kinetic
