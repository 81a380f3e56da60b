#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinetic {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Symmetric 3x3 matrix stored as (xx, xy, xz, yy, yz, zz).
struct Sym3 {
    std::array<double, 6> a{};

    static constexpr int idx(int i, int j) {
        if (i > j) std::swap(i, j);
        return i == 0 ? j : (i == 1 ? 2 + j : 5);
    }
    double operator()(int i, int j) const { return a[idx(i, j)]; }
    double& at(int i, int j) { return a[idx(i, j)]; }

    Sym3 operator+(const Sym3& o) const {
        Sym3 r;
        for (int k = 0; k < 6; ++k) r.a[k] = a[k] + o.a[k];
        return r;
    }
    Sym3 operator*(double s) const {
        Sym3 r;
        for (int k = 0; k < 6; ++k) r.a[k] = a[k] * s;
        return r;
    }
    Vec3 apply(const Vec3& v) const {
        return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
                a[1] * v.x + a[3] * v.y + a[4] * v.z,
                a[2] * v.x + a[4] * v.y + a[5] * v.z};
    }
    double trace() const { return a[0] + a[3] + a[5]; }

    // Eigenvalues (ascending) of the symmetric matrix, analytic 3x3 formula.
    std::array<double, 3> eigenvalues() const;
    // Spectral norm = max |eigenvalue|.
    double spectral_norm() const;
};

// Orthogonal projection onto the plane perpendicular to z: Id - z z^T/|z|^2.
// z = 0 is rejected; callers on a lattice use the cell-averaged kernel there.
Sym3 projection_pi(const Vec3& z);

// Uniform truncated cube [-L, L]^3 with n nodes per axis, x_i = -L + i*h,
// h = 2L/n. Node i = 0 is the periodic image of +/-L; fields are assumed
// supported in |w| <= L/2 so wrap-around never sees mass.
struct GridSpec {
    int n = 0;
    double extent = 0;

    GridSpec() = default;
    GridSpec(int n_, double extent_);

    double spacing() const { return 2.0 * extent / n; }
    std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
    double coord(int i) const { return -extent + i * spacing(); }
    Vec3 node(int ix, int iy, int iz) const { return {coord(ix), coord(iy), coord(iz)}; }
    // x-fastest linear index.
    std::size_t index(int ix, int iy, int iz) const {
        return static_cast<std::size_t>(ix) + static_cast<std::size_t>(n) * (static_cast<std::size_t>(iy) + static_cast<std::size_t>(n) * iz);
    }
    int wrap(int i) const {
        int m = i % n;
        return m < 0 ? m + n : m;
    }
    bool operator==(const GridSpec& o) const { return n == o.n && extent == o.extent; }
};

class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double fill = 0.0) : grid_(g), v_(g.size(), fill) {}

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    double& operator()(int ix, int iy, int iz) { return v_[grid_.index(ix, iy, iz)]; }
    double operator()(int ix, int iy, int iz) const { return v_[grid_.index(ix, iy, iz)]; }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }

    // Periodic-index access.
    double at_wrapped(int ix, int iy, int iz) const {
        return v_[grid_.index(grid_.wrap(ix), grid_.wrap(iy), grid_.wrap(iz))];
    }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);
    void axpy(double a, const ScalarField& x); // this += a*x

    double max_abs() const;
    double min_value() const;
    double sum() const; // compensated

    bool all_finite() const;

    // Samples f(node) over the grid.
    static ScalarField sample(const GridSpec& g, const std::function<double(const Vec3&)>& f);

    // Interpolation with zero extension outside [-L, L - h].
    double trilinear(const Vec3& p) const;
    double tricubic(const Vec3& p) const;

  private:
    GridSpec grid_{};
    std::vector<double> v_;
};

// Symmetric-matrix field (one Sym3 per node), component-planar storage.
class MatrixField {
  public:
    MatrixField() = default;
    explicit MatrixField(const GridSpec& g) : grid_(g) {
        for (auto& c : comp_) c.assign(g.size(), 0.0);
    }
    const GridSpec& grid() const { return grid_; }
    std::vector<double>& component(int k) { return comp_[k]; }
    const std::vector<double>& component(int k) const { return comp_[k]; }
    Sym3 at(std::size_t i) const {
        Sym3 m;
        for (int k = 0; k < 6; ++k) m.a[k] = comp_[k][i];
        return m;
    }
    void set(std::size_t i, const Sym3& m) {
        for (int k = 0; k < 6; ++k) comp_[k][i] = m.a[k];
    }
    // Minimum eigenvalue over all nodes (PSD scan).
    double min_eigenvalue() const;

  private:
    GridSpec grid_{};
    std::array<std::vector<double>, 6> comp_;
};

// --- quadrature -------------------------------------------------------------

// Monomial weight c * x^px * y^py * z^pz; total degree <= 4 supported.
struct Monomial {
    int px = 0, py = 0, pz = 0;
    double coef = 1.0;
    int degree() const { return px + py + pz; }
};

struct PolyWeight {
    std::vector<Monomial> terms;

    static PolyWeight one() { return {{{0, 0, 0, 1.0}}}; }
    static PolyWeight abs_w_squared() { return {{{2, 0, 0, 1.0}, {0, 2, 0, 1.0}, {0, 0, 2, 1.0}}}; }
    double eval(const Vec3& w) const;
    int degree() const;
};

// Midpoint quadrature of field (x optional polynomial weight) over the cube.
// Weight degree above 4 is rejected.
double integrate(const ScalarField& f);
double integrate(const ScalarField& f, const PolyWeight& weight);
// Quadrature against an arbitrary node-wise weight function.
double integrate_weighted(const ScalarField& f, const std::function<double(const Vec3&)>& weight);

// --- smooth cutoff family ---------------------------------------------------

// Radial C^2 profile: 1 on [0,1], quintic bridge on [1,2], 0 beyond.
double cutoff_profile(double r);
double cutoff_profile_deriv(double r);

// chi(|w|/R) sampled on the grid. R <= 0 rejected.
ScalarField make_cutoff(const GridSpec& g, double R);

struct CutoffFamily {
    std::vector<double> radii; // geometric sequence
    static CutoffFamily geometric(double r0, double ratio, int count);
};

// --- dyadic annuli ----------------------------------------------------------

// Node-index shells {2^k r0 <= |x| < 2^{k+1} r0} for k in [kmin, kmax].
struct AnnulusDecomposition {
    double r0 = 0;
    int kmin = 0, kmax = 0;
    std::vector<std::vector<std::size_t>> shells; // per k, node indices
    std::vector<bool> empty_flag;                 // empty shells are flagged, not dropped
};

AnnulusDecomposition dyadic_annuli(const GridSpec& g, double r0, int kmin, int kmax);

// --- derivatives (central stencils, periodic indexing) -----------------------

// d/dx_axis, central stencil of the given order (4, 6 or 8)
ScalarField deriv_central(const ScalarField& f, int axis, int order);
// d/dx_axis, 4th order
ScalarField deriv4(const ScalarField& f, int axis);
// d^2/dx_a dx_b (a == b uses the 5-point 4th-order stencil, mixed composes deriv4)
ScalarField deriv4_second(const ScalarField& f, int a, int b);
// all three first derivatives
std::array<ScalarField, 3> gradient4(const ScalarField& f);
std::array<ScalarField, 3> gradient8(const ScalarField& f);
// gradient of log(max(f, floor)); exact for log-quadratic fields
std::array<ScalarField, 3> log_gradient4(const ScalarField& f, double floor_value);

// --- common analytic profiles (test/experiment fixtures) ---------------------

// mass * (2 pi sigma^2)^{-3/2} exp(-|w - c|^2 / (2 sigma^2))
ScalarField gaussian_field(const GridSpec& g, double mass, double sigma, const Vec3& center = {});
double gaussian_value(const Vec3& w, double mass, double sigma, const Vec3& center = {});

// Deterministic smooth nonnegative random field: sum of `bumps` Gaussians with
// seeded positions/widths/amplitudes, supported well inside |w| <= L/2.
ScalarField random_smooth_field(const GridSpec& g, std::uint64_t seed, int bumps = 4);

} // namespace kinetic
