#include "kinetic/grid.hpp"

#include "kinetic/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace kinetic {

std::array<double, 3> Sym3::eigenvalues() const {
    // Analytic symmetric 3x3 eigenvalues (trigonometric form).
    const double p1 = a[1] * a[1] + a[2] * a[2] + a[4] * a[4];
    const double q = trace() / 3.0;
    const double dxx = a[0] - q, dyy = a[3] - q, dzz = a[5] - q;
    const double p2 = dxx * dxx + dyy * dyy + dzz * dzz + 2.0 * p1;
    if (p2 <= 0.0) return {q, q, q};
    const double p = std::sqrt(p2 / 6.0);
    // B = (A - q I)/p, r = det(B)/2 clamped to [-1, 1]
    const double b00 = dxx / p, b11 = dyy / p, b22 = dzz / p;
    const double b01 = a[1] / p, b02 = a[2] / p, b12 = a[4] / p;
    double r = 0.5 * (b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) + b02 * (b01 * b12 - b11 * b02));
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    std::array<double, 3> ev{e3, e2, e1};
    std::sort(ev.begin(), ev.end());
    return ev;
}

double Sym3::spectral_norm() const {
    auto ev = eigenvalues();
    return std::max(std::abs(ev[0]), std::abs(ev[2]));
}

Sym3 projection_pi(const Vec3& z) {
    const double n2 = z.norm2();
    if (n2 == 0.0) throw std::invalid_argument("projection_pi: z = 0 (use cell-averaged kernel)");
    Sym3 m;
    m.a[0] = 1.0 - z.x * z.x / n2;
    m.a[1] = -z.x * z.y / n2;
    m.a[2] = -z.x * z.z / n2;
    m.a[3] = 1.0 - z.y * z.y / n2;
    m.a[4] = -z.y * z.z / n2;
    m.a[5] = 1.0 - z.z * z.z / n2;
    return m;
}

GridSpec::GridSpec(int n_, double extent_) : n(n_), extent(extent_) {
    if (n < 8) throw std::invalid_argument("GridSpec: n must be >= 8");
    if (n % 2 != 0) throw std::invalid_argument("GridSpec: n must be even");
    if (!(extent > 0)) throw std::invalid_argument("GridSpec: extent must be positive");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}
ScalarField& ScalarField::operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
}
void ScalarField::axpy(double a, const ScalarField& x) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += a * x.v_[i];
}

double ScalarField::max_abs() const {
    double m = 0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
}
double ScalarField::min_value() const {
    double m = v_.empty() ? 0.0 : v_[0];
    for (double x : v_) m = std::min(m, x);
    return m;
}
double ScalarField::sum() const {
    double s = 0, c = 0;
    for (double x : v_) {
        double y = x - c, t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}
bool ScalarField::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

ScalarField ScalarField::sample(const GridSpec& g, const std::function<double(const Vec3&)>& f) {
    ScalarField out(g);
    const std::size_t nz = g.n;
    parallel_for(nz, [&](std::size_t zb, std::size_t ze) {
        for (std::size_t iz = zb; iz < ze; ++iz)
            for (int iy = 0; iy < g.n; ++iy)
                for (int ix = 0; ix < g.n; ++ix)
                    out(ix, iy, static_cast<int>(iz)) = f(g.node(ix, iy, static_cast<int>(iz)));
    });
    return out;
}

double ScalarField::trilinear(const Vec3& p) const {
    const double h = grid_.spacing();
    const double fx = (p.x + grid_.extent) / h, fy = (p.y + grid_.extent) / h, fz = (p.z + grid_.extent) / h;
    const int ix = static_cast<int>(std::floor(fx)), iy = static_cast<int>(std::floor(fy)), iz = static_cast<int>(std::floor(fz));
    auto value = [&](int a, int b, int c) -> double {
        if (a < 0 || a >= grid_.n || b < 0 || b >= grid_.n || c < 0 || c >= grid_.n) return 0.0;
        return v_[grid_.index(a, b, c)];
    };
    const double tx = fx - ix, ty = fy - iy, tz = fz - iz;
    double r = 0;
    for (int c = 0; c <= 1; ++c)
        for (int b = 0; b <= 1; ++b)
            for (int a = 0; a <= 1; ++a)
                r += value(ix + a, iy + b, iz + c) * (a ? tx : 1 - tx) * (b ? ty : 1 - ty) * (c ? tz : 1 - tz);
    return r;
}

namespace {
inline void cubic_weights(double t, double w[4]) {
    // Catmull-Rom weights for nodes at offsets {-1, 0, 1, 2}.
    const double t2 = t * t, t3 = t2 * t;
    w[0] = 0.5 * (-t3 + 2 * t2 - t);
    w[1] = 0.5 * (3 * t3 - 5 * t2 + 2);
    w[2] = 0.5 * (-3 * t3 + 4 * t2 + t);
    w[3] = 0.5 * (t3 - t2);
}
} // namespace

double ScalarField::tricubic(const Vec3& p) const {
    const double h = grid_.spacing();
    const double fx = (p.x + grid_.extent) / h, fy = (p.y + grid_.extent) / h, fz = (p.z + grid_.extent) / h;
    const int ix = static_cast<int>(std::floor(fx)), iy = static_cast<int>(std::floor(fy)), iz = static_cast<int>(std::floor(fz));
    double wx[4], wy[4], wz[4];
    cubic_weights(fx - ix, wx);
    cubic_weights(fy - iy, wy);
    cubic_weights(fz - iz, wz);
    auto value = [&](int a, int b, int c) -> double {
        if (a < 0 || a >= grid_.n || b < 0 || b >= grid_.n || c < 0 || c >= grid_.n) return 0.0;
        return v_[grid_.index(a, b, c)];
    };
    double r = 0;
    for (int c = 0; c < 4; ++c) {
        if (wz[c] == 0.0) continue;
        for (int b = 0; b < 4; ++b) {
            double s = 0;
            for (int a = 0; a < 4; ++a) s += wx[a] * value(ix - 1 + a, iy - 1 + b, iz - 1 + c);
            r += s * wy[b] * wz[c];
        }
    }
    return r;
}

double MatrixField::min_eigenvalue() const {
    double m = 0;
    bool first = true;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        double e = at(i).eigenvalues()[0];
        if (first || e < m) m = e, first = false;
    }
    return m;
}

double PolyWeight::eval(const Vec3& w) const {
    double s = 0;
    for (const auto& m : terms) {
        double t = m.coef;
        for (int k = 0; k < m.px; ++k) t *= w.x;
        for (int k = 0; k < m.py; ++k) t *= w.y;
        for (int k = 0; k < m.pz; ++k) t *= w.z;
        s += t;
    }
    return s;
}
int PolyWeight::degree() const {
    int d = 0;
    for (const auto& m : terms) d = std::max(d, m.degree());
    return d;
}

double integrate(const ScalarField& f) {
    const double h = f.grid().spacing();
    return f.sum() * h * h * h;
}

double integrate(const ScalarField& f, const PolyWeight& weight) {
    if (weight.degree() > 4) throw std::invalid_argument("integrate: weight degree > 4 unsupported");
    return integrate_weighted(f, [&](const Vec3& w) { return weight.eval(w); });
}

double integrate_weighted(const ScalarField& f, const std::function<double(const Vec3&)>& weight) {
    const GridSpec& g = f.grid();
    const double cell = g.spacing() * g.spacing() * g.spacing();
    double s = parallel_reduce(g.size(), [&](std::size_t b, std::size_t e) {
        double acc = 0, comp = 0;
        for (std::size_t i = b; i < e; ++i) {
            const int ix = static_cast<int>(i % g.n);
            const int iy = static_cast<int>((i / g.n) % g.n);
            const int iz = static_cast<int>(i / (static_cast<std::size_t>(g.n) * g.n));
            double term = f[i] * weight(g.node(ix, iy, iz));
            double y = term - comp, t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
        return acc;
    });
    return s * cell;
}

double cutoff_profile(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double u = r - 1.0;
    const double u3 = u * u * u;
    return 1.0 - u3 * (10.0 - 15.0 * u + 6.0 * u * u);
}

double cutoff_profile_deriv(double r) {
    if (r <= 1.0 || r >= 2.0) return 0.0;
    const double u = r - 1.0;
    const double um = 1.0 - u;
    return -30.0 * u * u * um * um;
}

ScalarField make_cutoff(const GridSpec& g, double R) {
    if (!(R > 0)) throw std::invalid_argument("make_cutoff: R must be positive");
    return ScalarField::sample(g, [R](const Vec3& w) { return cutoff_profile(w.norm() / R); });
}

CutoffFamily CutoffFamily::geometric(double r0, double ratio, int count) {
    if (!(r0 > 0) || !(ratio > 1) || count < 1) throw std::invalid_argument("CutoffFamily: bad parameters");
    CutoffFamily f;
    double r = r0;
    for (int k = 0; k < count; ++k, r *= ratio) f.radii.push_back(r);
    return f;
}

AnnulusDecomposition dyadic_annuli(const GridSpec& g, double r0, int kmin, int kmax) {
    if (!(r0 > 0)) throw std::invalid_argument("dyadic_annuli: r0 must be positive");
    if (kmax < kmin) throw std::invalid_argument("dyadic_annuli: kmax < kmin");
    AnnulusDecomposition d;
    d.r0 = r0;
    d.kmin = kmin;
    d.kmax = kmax;
    d.shells.assign(kmax - kmin + 1, {});
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const double r = g.node(ix, iy, iz).norm();
                if (r < r0 * std::ldexp(1.0, kmin)) continue;
                const int k = static_cast<int>(std::floor(std::log2(r / r0)));
                if (k > kmax) continue;
                d.shells[k - kmin].push_back(g.index(ix, iy, iz));
            }
    d.empty_flag.resize(d.shells.size());
    for (std::size_t k = 0; k < d.shells.size(); ++k) d.empty_flag[k] = d.shells[k].empty();
    return d;
}

namespace {
const double kD2[3] = {-30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0}; // 0, +/-1, +/-2
// antisymmetric first-derivative weights for offsets 1..halfwidth
const double kC4[2] = {8.0 / 12.0, -1.0 / 12.0};
const double kC6[3] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
const double kC8[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
} // namespace

ScalarField deriv_central(const ScalarField& f, int axis, int order) {
    const double* c;
    int hw;
    switch (order) {
        case 4: c = kC4; hw = 2; break;
        case 6: c = kC6; hw = 3; break;
        case 8: c = kC8; hw = 4; break;
        default: throw std::invalid_argument("deriv_central: order must be 4, 6 or 8");
    }
    const GridSpec& g = f.grid();
    ScalarField out(g);
    const double ih = 1.0 / g.spacing();
    const int n = g.n;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t zb, std::size_t ze) {
        for (int iz = static_cast<int>(zb); iz < static_cast<int>(ze); ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    auto shift = [&](int s) {
                        int jx = ix, jy = iy, jz = iz;
                        (axis == 0 ? jx : axis == 1 ? jy : jz) += s;
                        return f.at_wrapped(jx, jy, jz);
                    };
                    double acc = 0;
                    for (int s = 1; s <= hw; ++s) acc += c[s - 1] * (shift(s) - shift(-s));
                    out(ix, iy, iz) = ih * acc;
                }
    });
    return out;
}

ScalarField deriv4(const ScalarField& f, int axis) { return deriv_central(f, axis, 4); }

ScalarField deriv4_second(const ScalarField& f, int a, int b) {
    if (a != b) return deriv4(deriv4(f, a), b);
    const GridSpec& g = f.grid();
    ScalarField out(g);
    const double ih2 = 1.0 / (g.spacing() * g.spacing());
    const int n = g.n;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t zb, std::size_t ze) {
        for (int iz = static_cast<int>(zb); iz < static_cast<int>(ze); ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    auto shift = [&](int s) {
                        int jx = ix, jy = iy, jz = iz;
                        (a == 0 ? jx : a == 1 ? jy : jz) += s;
                        return f.at_wrapped(jx, jy, jz);
                    };
                    out(ix, iy, iz) = ih2 * (kD2[0] * shift(0) + kD2[1] * (shift(1) + shift(-1)) + kD2[2] * (shift(2) + shift(-2)));
                }
    });
    return out;
}

std::array<ScalarField, 3> gradient4(const ScalarField& f) {
    return {deriv4(f, 0), deriv4(f, 1), deriv4(f, 2)};
}

std::array<ScalarField, 3> gradient8(const ScalarField& f) {
    return {deriv_central(f, 0, 8), deriv_central(f, 1, 8), deriv_central(f, 2, 8)};
}

std::array<ScalarField, 3> log_gradient4(const ScalarField& f, double floor_value) {
    if (!(floor_value > 0)) throw std::invalid_argument("log_gradient4: floor must be positive");
    ScalarField lg(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) lg[i] = std::log(std::max(f[i], floor_value));
    return gradient4(lg);
}

double gaussian_value(const Vec3& w, double mass, double sigma, const Vec3& center) {
    const double s2 = sigma * sigma;
    const double norm = mass / std::pow(2.0 * M_PI * s2, 1.5);
    return norm * std::exp(-(w - center).norm2() / (2.0 * s2));
}

ScalarField gaussian_field(const GridSpec& g, double mass, double sigma, const Vec3& center) {
    return ScalarField::sample(g, [&](const Vec3& w) { return gaussian_value(w, mass, sigma, center); });
}

ScalarField random_smooth_field(const GridSpec& g, std::uint64_t seed, int bumps) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double L = g.extent;
    ScalarField out(g);
    for (int b = 0; b < bumps; ++b) {
        Vec3 c{(unit(rng) - 0.5) * 0.5 * L, (unit(rng) - 0.5) * 0.5 * L, (unit(rng) - 0.5) * 0.5 * L};
        const double sigma = (0.35 + 0.65 * unit(rng)) * L / 8.0;
        const double mass = 0.2 + unit(rng);
        out += gaussian_field(g, mass, sigma, c);
    }
    return out;
}

} // namespace kinetic
