#pragma once

#include "kinetic/grid.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace kinetic {

// Offset table of a convolution kernel on the doubled (zero-padded) grid.
// Entry at padded index wraps the offset range [-(n-1), n-1]^3; everything
// else is zero, which makes the circular convolution on the 2n grid equal to
// the free-space sum over the n^3 nodes.
struct KernelTable {
    GridSpec grid;
    int padded_n = 0;
    std::vector<double> values; // (2n)^3, x-fastest

    std::size_t padded_index(int ox, int oy, int oz) const {
        auto wrap = [this](int o) { return o < 0 ? o + padded_n : o; };
        return static_cast<std::size_t>(wrap(ox)) +
               static_cast<std::size_t>(padded_n) * (static_cast<std::size_t>(wrap(oy)) +
                                                     static_cast<std::size_t>(padded_n) * wrap(oz));
    }
};

// How the cell containing the offset origin is regularized.
enum class SingularCell {
    BallAverage, // exact integral of |z|^s over the equal-volume ball, / cell volume
    Zero,        // odd kernels: exact cell integral vanishes by symmetry
};

// |z|^s sampled per offset node. Cells near the origin use a radially
// cell-averaged value (midpoint subsampling); the origin cell follows `rule`.
// The optional direction factor multiplies the radial value by dir(z_center),
// which keeps exact parity/projection identities of the direction part.
KernelTable build_radial_kernel(const GridSpec& g, double s, SingularCell rule,
                                const std::function<double(const Vec3&)>& direction = {});

// Component (i,j) of Pi(z)|z|^{gamma+2}; the origin cell carries the angular
// average (2/3) delta_ij times the ball-averaged radial factor.
KernelTable build_pi_kernel_component(const GridSpec& g, double gamma, int i, int j);

// Component (i,j) of d/dz_k [Pi(z)|z|^{gamma+2}] (analytic derivative of the
// kernel, as in the Lemma 3.1 proof). Odd in z, so the origin cell is zero.
KernelTable build_grad_pi_kernel_component(const GridSpec& g, double gamma, int k, int i, int j);

// Component i of the Coulomb force kernel z_i/|z|^3 (odd; origin cell zero).
KernelTable build_force_kernel_component(const GridSpec& g, int i);

// FFT convolution engine on the doubled grid (FFTW backend). One instance per
// GridSpec; create serially, then `convolve` calls may run from one thread at
// a time (internal scratch is allocated per call).
class Convolver {
  public:
    using Spectrum = std::vector<std::complex<double>>;

    explicit Convolver(const GridSpec& g);
    ~Convolver();
    Convolver(const Convolver&) = delete;
    Convolver& operator=(const Convolver&) = delete;

    const GridSpec& grid() const { return grid_; }

    Spectrum forward_kernel(const KernelTable& k) const;
    Spectrum forward_field(const ScalarField& f) const;

    // (kernel * f)(v_i) = sum_j kernel(v_i - z_j) f(z_j) h^3
    ScalarField convolve(const Spectrum& field_hat, const Spectrum& kernel_hat) const;
    ScalarField convolve(const ScalarField& f, const Spectrum& kernel_hat) const;
    // sum_k (kernels[k] * fields[k]), accumulated spectrally with one inverse.
    ScalarField convolve_sum(const std::vector<const Spectrum*>& fields,
                             const std::vector<const Spectrum*>& kernels) const;

    // [f(v+d) + f(v-d)]/2 - f(v) through the padded shift theorem (factor
    // cos(k.d) - 1 on the spectrum): spectrally accurate for resolved decaying
    // fields, free of the interpolation bias of stencil differences.
    ScalarField symmetric_difference(const Spectrum& field_hat, const Vec3& d) const;

    // Circle average (1/2 pi) oint f(v + rho (e1 cos psi + e2 sin psi)) d psi
    // on the plane perpendicular to omega: Bessel multiplier J0(|k_perp| rho)
    // on the padded spectrum. Alias-free for rho < 2 extent.
    ScalarField ring_average(const Spectrum& field_hat, const Vec3& omega, double rho) const;

  private:
    struct Impl;
    GridSpec grid_;
    std::unique_ptr<Impl> impl_;
};

// O(N^2) reference sum for cross-checking the FFT path on small grids:
// out(v_i) = sum_j table(v_i - z_j) f(z_j) h^3.
ScalarField direct_convolve(const ScalarField& f, const KernelTable& table);

} // namespace kinetic
