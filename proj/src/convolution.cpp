#include "kinetic/convolution.hpp"

#include "kinetic/parallel.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace kinetic {

namespace {

// Cells whose center lies within this many spacings of the origin get a
// radially cell-averaged kernel value instead of the point sample.
constexpr double kRefineRadiusCells = 6.0;
constexpr int kRefineSub = 12;

double ball_average(double s, double h) {
    // (1/h^3) * integral of |z|^s over the ball of volume h^3.
    if (s <= -3.0) throw std::invalid_argument("ball_average: exponent must exceed -3");
    const double r_eq = h * std::cbrt(3.0 / (4.0 * M_PI));
    return 4.0 * M_PI * std::pow(r_eq, 3.0 + s) / ((3.0 + s) * h * h * h);
}

double cell_averaged_radial(const Vec3& center, double s, double h) {
    double acc = 0;
    for (int a = 0; a < kRefineSub; ++a)
        for (int b = 0; b < kRefineSub; ++b)
            for (int c = 0; c < kRefineSub; ++c) {
                const Vec3 z{center.x + ((a + 0.5) / kRefineSub - 0.5) * h,
                             center.y + ((b + 0.5) / kRefineSub - 0.5) * h,
                             center.z + ((c + 0.5) / kRefineSub - 0.5) * h};
                acc += std::pow(z.norm2(), 0.5 * s);
            }
    return acc / (static_cast<double>(kRefineSub) * kRefineSub * kRefineSub);
}

template <typename ValueFn>
KernelTable build_table(const GridSpec& g, const ValueFn& value_at_offset) {
    KernelTable t;
    t.grid = g;
    t.padded_n = 2 * g.n;
    t.values.assign(static_cast<std::size_t>(t.padded_n) * t.padded_n * t.padded_n, 0.0);
    const int n = g.n;
    const double h = g.spacing();
    parallel_for(static_cast<std::size_t>(2 * n - 1), [&](std::size_t zb, std::size_t ze) {
        for (std::size_t zi = zb; zi < ze; ++zi) {
            const int oz = static_cast<int>(zi) - (n - 1);
            for (int oy = -(n - 1); oy <= n - 1; ++oy)
                for (int ox = -(n - 1); ox <= n - 1; ++ox)
                    t.values[t.padded_index(ox, oy, oz)] = value_at_offset(Vec3{ox * h, oy * h, oz * h}, ox == 0 && oy == 0 && oz == 0);
        }
    });
    return t;
}

} // namespace

KernelTable build_radial_kernel(const GridSpec& g, double s, SingularCell rule,
                                const std::function<double(const Vec3&)>& direction) {
    const double h = g.spacing();
    const double refine_r = kRefineRadiusCells * h;
    return build_table(g, [&](const Vec3& z, bool origin) -> double {
        if (origin) {
            if (rule == SingularCell::Zero) return 0.0;
            double v = ball_average(s, h);
            return direction ? 0.0 : v; // directional kernels are odd at the origin
        }
        const double r = z.norm();
        const double radial = (r <= refine_r) ? cell_averaged_radial(z, s, h) : std::pow(r, s);
        return direction ? direction(z) * radial : radial;
    });
}

KernelTable build_pi_kernel_component(const GridSpec& g, double gamma, int i, int j) {
    const double h = g.spacing();
    const double refine_r = kRefineRadiusCells * h;
    const double s = gamma + 2.0;
    return build_table(g, [&](const Vec3& z, bool origin) -> double {
        if (origin) return (i == j) ? (2.0 / 3.0) * ball_average(s, h) : 0.0;
        const double r = z.norm();
        const double radial = (r <= refine_r) ? cell_averaged_radial(z, s, h) : std::pow(r, s);
        const double pi_ij = (i == j ? 1.0 : 0.0) - z[i] * z[j] / z.norm2();
        return pi_ij * radial;
    });
}

KernelTable build_grad_pi_kernel_component(const GridSpec& g, double gamma, int k, int i, int j) {
    // d/dz_k [ |z|^{g+2} delta_ij - z_i z_j |z|^g ]
    //   = (g+2) z_k |z|^g delta_ij - (delta_ik z_j + delta_jk z_i) |z|^g - g z_i z_j z_k |z|^{g-2}
    const double h = g.spacing();
    const double refine_r = kRefineRadiusCells * h;
    return build_table(g, [&](const Vec3& z, bool origin) -> double {
        if (origin) return 0.0;
        const double r = z.norm();
        const double rg = (r <= refine_r) ? cell_averaged_radial(z, gamma + 1.0, h) : std::pow(r, gamma + 1.0);
        // factor |z|^{gamma+1} out so the radial refinement applies to the singular part
        const Vec3 u = z / r;
        const double term = (gamma + 2.0) * u[k] * (i == j ? 1.0 : 0.0) -
                            ((i == k ? 1.0 : 0.0) * u[j] + (j == k ? 1.0 : 0.0) * u[i]) -
                            gamma * u[i] * u[j] * u[k];
        return term * rg;
    });
}

KernelTable build_force_kernel_component(const GridSpec& g, int i) {
    return build_radial_kernel(g, -2.0, SingularCell::Zero, [i](const Vec3& z) { return z[i] / z.norm(); });
}

// --- FFT engine --------------------------------------------------------------

struct Convolver::Impl {
    int M = 0;
    std::size_t real_size = 0, spec_size = 0;
    fftw_plan fwd = nullptr, inv = nullptr;
    double* rbuf = nullptr;
    fftw_complex* cbuf = nullptr;
};

namespace {
std::mutex g_fftw_mutex; // plan creation/destruction is not thread-safe
}

Convolver::Convolver(const GridSpec& g) : grid_(g), impl_(new Impl) {
    impl_->M = 2 * g.n;
    const int M = impl_->M;
    impl_->real_size = static_cast<std::size_t>(M) * M * M;
    impl_->spec_size = static_cast<std::size_t>(M) * M * (M / 2 + 1);
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    impl_->rbuf = fftw_alloc_real(impl_->real_size);
    impl_->cbuf = fftw_alloc_complex(impl_->spec_size);
    // FFTW_ESTIMATE keeps planning deterministic (bit-reproducible runs).
    impl_->fwd = fftw_plan_dft_r2c_3d(M, M, M, impl_->rbuf, impl_->cbuf, FFTW_ESTIMATE);
    impl_->inv = fftw_plan_dft_c2r_3d(M, M, M, impl_->cbuf, impl_->rbuf, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->inv) throw std::runtime_error("Convolver: FFTW plan creation failed");
}

Convolver::~Convolver() {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->inv) fftw_destroy_plan(impl_->inv);
    if (impl_->rbuf) fftw_free(impl_->rbuf);
    if (impl_->cbuf) fftw_free(impl_->cbuf);
}

Convolver::Spectrum Convolver::forward_kernel(const KernelTable& k) const {
    if (!(k.grid == grid_)) throw std::invalid_argument("Convolver: kernel grid mismatch");
    std::memcpy(impl_->rbuf, k.values.data(), impl_->real_size * sizeof(double));
    fftw_execute(impl_->fwd);
    Spectrum out(impl_->spec_size);
    std::memcpy(out.data(), impl_->cbuf, impl_->spec_size * sizeof(fftw_complex));
    return out;
}

Convolver::Spectrum Convolver::forward_field(const ScalarField& f) const {
    if (!(f.grid() == grid_)) throw std::invalid_argument("Convolver: field grid mismatch");
    const int n = grid_.n, M = impl_->M;
    std::memset(impl_->rbuf, 0, impl_->real_size * sizeof(double));
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            std::memcpy(impl_->rbuf + (static_cast<std::size_t>(iz) * M + iy) * M,
                        f.data() + f.grid().index(0, iy, iz), n * sizeof(double));
    fftw_execute(impl_->fwd);
    Spectrum out(impl_->spec_size);
    std::memcpy(out.data(), impl_->cbuf, impl_->spec_size * sizeof(fftw_complex));
    return out;
}

ScalarField Convolver::convolve(const Spectrum& field_hat, const Spectrum& kernel_hat) const {
    return convolve_sum({&field_hat}, {&kernel_hat});
}

ScalarField Convolver::convolve(const ScalarField& f, const Spectrum& kernel_hat) const {
    Spectrum fh = forward_field(f);
    return convolve_sum({&fh}, {&kernel_hat});
}

ScalarField Convolver::convolve_sum(const std::vector<const Spectrum*>& fields,
                                    const std::vector<const Spectrum*>& kernels) const {
    if (fields.size() != kernels.size() || fields.empty())
        throw std::invalid_argument("convolve_sum: mismatched spectra lists");
    const std::size_t S = impl_->spec_size;
    auto* acc = impl_->cbuf;
    parallel_for(S, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            std::complex<double> s{0.0, 0.0};
            for (std::size_t k = 0; k < fields.size(); ++k) s += (*fields[k])[i] * (*kernels[k])[i];
            acc[i][0] = s.real();
            acc[i][1] = s.imag();
        }
    });
    fftw_execute(impl_->inv);
    const int n = grid_.n, M = impl_->M;
    const double h = grid_.spacing();
    const double scale = h * h * h / static_cast<double>(impl_->real_size);
    ScalarField out(grid_);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t zb, std::size_t ze) {
        for (int iz = static_cast<int>(zb); iz < static_cast<int>(ze); ++iz)
            for (int iy = 0; iy < n; ++iy) {
                const double* src = impl_->rbuf + (static_cast<std::size_t>(iz) * M + iy) * M;
                double* dst = out.data() + out.grid().index(0, iy, iz);
                for (int ix = 0; ix < n; ++ix) dst[ix] = src[ix] * scale;
            }
    });
    return out;
}

ScalarField Convolver::symmetric_difference(const Spectrum& field_hat, const Vec3& d) const {
    const int M = impl_->M;
    const int nx_half = M / 2 + 1;
    const double h = grid_.spacing();
    auto* acc = impl_->cbuf;
    // wavenumber k_j = 2 pi j / (M h), j wrapped to [-M/2, M/2)
    auto freq = [&](int j) { return 2.0 * M_PI * (j < M / 2 ? j : j - M) / (M * h); };
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t zb, std::size_t ze) {
        for (int jz = static_cast<int>(zb); jz < static_cast<int>(ze); ++jz)
            for (int jy = 0; jy < M; ++jy)
                for (int jx = 0; jx < nx_half; ++jx) {
                    const std::size_t i = (static_cast<std::size_t>(jz) * M + jy) * nx_half + jx;
                    const double phase = freq(jx) * d.x + freq(jy) * d.y + freq(jz) * d.z;
                    const double factor = std::cos(phase) - 1.0;
                    acc[i][0] = field_hat[i].real() * factor;
                    acc[i][1] = field_hat[i].imag() * factor;
                }
    });
    fftw_execute(impl_->inv);
    const int n = grid_.n;
    const double scale = 1.0 / static_cast<double>(impl_->real_size);
    ScalarField out(grid_);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t zb, std::size_t ze) {
        for (int iz = static_cast<int>(zb); iz < static_cast<int>(ze); ++iz)
            for (int iy = 0; iy < n; ++iy) {
                const double* src = impl_->rbuf + (static_cast<std::size_t>(iz) * M + iy) * M;
                double* dst = out.data() + out.grid().index(0, iy, iz);
                for (int ix = 0; ix < n; ++ix) dst[ix] = src[ix] * scale;
            }
    });
    return out;
}

namespace {
// linear-interpolation table of J0 up to large arguments (|J0''| <= 1 keeps
// the interpolation error at step^2/8)
double j0_lookup(double x) {
    constexpr double kStep = 2e-3;
    constexpr std::size_t kCount = 300000; // arguments up to 600
    static const std::vector<double>& table = *[] {
        auto* t = new std::vector<double>(kCount + 1);
        for (std::size_t i = 0; i <= kCount; ++i) (*t)[i] = std::cyl_bessel_j(0.0, i * kStep);
        return t;
    }();
    const double a = std::abs(x) / kStep;
    const std::size_t i = static_cast<std::size_t>(a);
    if (i >= kCount) return std::cyl_bessel_j(0.0, std::abs(x));
    const double frac = a - i;
    return table[i] * (1.0 - frac) + table[i + 1] * frac;
}
} // namespace

ScalarField Convolver::ring_average(const Spectrum& field_hat, const Vec3& omega, double rho) const {
    const int M = impl_->M;
    const int nx_half = M / 2 + 1;
    const double h = grid_.spacing();
    auto* acc = impl_->cbuf;
    auto freq = [&](int j) { return 2.0 * M_PI * (j < M / 2 ? j : j - M) / (M * h); };
    const Vec3 axis = omega / omega.norm();
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t zb, std::size_t ze) {
        for (int jz = static_cast<int>(zb); jz < static_cast<int>(ze); ++jz)
            for (int jy = 0; jy < M; ++jy)
                for (int jx = 0; jx < nx_half; ++jx) {
                    const std::size_t i = (static_cast<std::size_t>(jz) * M + jy) * nx_half + jx;
                    const Vec3 k{freq(jx), freq(jy), freq(jz)};
                    const double kpar = k.dot(axis);
                    const double kperp2 = std::max(0.0, k.norm2() - kpar * kpar);
                    const double factor = j0_lookup(std::sqrt(kperp2) * rho);
                    acc[i][0] = field_hat[i].real() * factor;
                    acc[i][1] = field_hat[i].imag() * factor;
                }
    });
    fftw_execute(impl_->inv);
    const int n = grid_.n;
    const double scale = 1.0 / static_cast<double>(impl_->real_size);
    ScalarField out(grid_);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t zb, std::size_t ze) {
        for (int iz = static_cast<int>(zb); iz < static_cast<int>(ze); ++iz)
            for (int iy = 0; iy < n; ++iy) {
                const double* src = impl_->rbuf + (static_cast<std::size_t>(iz) * M + iy) * M;
                double* dst = out.data() + out.grid().index(0, iy, iz);
                for (int ix = 0; ix < n; ++ix) dst[ix] = src[ix] * scale;
            }
    });
    return out;
}

ScalarField direct_convolve(const ScalarField& f, const KernelTable& table) {
    const GridSpec& g = f.grid();
    const double h3 = std::pow(g.spacing(), 3);
    ScalarField out(g);
    const int n = g.n;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t zb, std::size_t ze) {
        for (int iz = static_cast<int>(zb); iz < static_cast<int>(ze); ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    double acc = 0;
                    for (int jz = 0; jz < n; ++jz)
                        for (int jy = 0; jy < n; ++jy)
                            for (int jx = 0; jx < n; ++jx)
                                acc += table.values[table.padded_index(ix - jx, iy - jy, iz - jz)] * f(jx, jy, jz);
                    out(ix, iy, iz) = acc * h3;
                }
    });
    return out;
}

} // namespace kinetic
