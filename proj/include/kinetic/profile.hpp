#pragma once

#include "kinetic/grid.hpp"
#include "kinetic/landau.hpp"
#include "kinetic/reports.hpp"
#include "kinetic/selfsim.hpp"

#include <functional>
#include <string>
#include <vector>

namespace kinetic {

// g(y,w) = q(w) + h(y,w) with h in low-rank separable form sum_k a_k(y) b_k(w).
struct SeparableTerm {
    ScalarField a; // over the y grid
    ScalarField b; // over the w grid
};

struct ProfileDecomposition {
    ScalarField q;                // over the w grid (may be identically zero)
    std::vector<SeparableTerm> h; // rank <= 8

    static constexpr int kMaxRank = 8;

    static ProfileDecomposition homogeneous(ScalarField q_in);
    static ProfileDecomposition with_h(ScalarField q_in, std::vector<SeparableTerm> terms);

    const GridSpec& w_grid() const { return q.grid(); }
    const GridSpec& y_grid() const; // requires rank >= 1
    int rank() const { return static_cast<int>(h.size()); }
    bool is_zero() const;

    // g(y, .) as a w-field; a_k evaluated by tricubic interpolation at y.
    ScalarField slice_at_y(const Vec3& y) const;
};

// Collision backend plugged into the residual and functionals. The bilinear
// form produces the field Q(u, v); the window function produces the cutoff
// integrals int chi_R (weight) Q(u, v) dw for a radius sweep, which is all the
// moment machinery needs (the Boltzmann module supplies these via its weak
// form instead of assembling fields).
using CollisionBilinear = std::function<ScalarField(const ScalarField&, const ScalarField&)>;
using CollisionWindowFn = std::function<std::vector<double>(const ScalarField& u, const ScalarField& v,
                                                            const std::vector<double>& radii, bool weight_w2)>;

struct CollisionBackend {
    CollisionBilinear bilinear;
    CollisionWindowFn window;
    static CollisionBackend landau(const LandauParams& p);
};

CollisionBilinear landau_collision(const LandauParams& p);

// --- admissibility ------------------------------------------------------------

struct NormCheck {
    std::string name;
    std::vector<double> truncations; // nested truncation radii (fractions of L)
    std::vector<double> values;      // measured partial norms
    bool cauchy = false;
    double final_value = 0.0;
};

struct ProfileAdmissibility {
    std::vector<NormCheck> norms;
    bool pass = false;
};

// Measures the decay norms of Theorem 2.1 on nested truncations: ||q||_1,
// ||(1+|y|+|w|) h||_1, and for theta = +-1/3 also ||(1+|w|^2) q||_1 and
// ||(1+|y||w|^2+|w|^3) h||_1, plus the w-derivative norms of the y = 0 slice.
// Separable h norms use the factorized bound (exact for sign-aligned terms).
ProfileAdmissibility check_profile_admissibility(const ProfileDecomposition& g, const SelfSimParams& p);

// --- residual -----------------------------------------------------------------

// g + (1+theta) y . grad_y g + theta w . grad_w g + w . grad_y g - Q(g,g),
// evaluated at a fixed y as a w-field. Homogeneous profiles (rank 0) drop the
// y terms identically.
ScalarField profile_residual_at(const ProfileDecomposition& g, const SelfSimParams& p, const Vec3& y,
                                const CollisionBilinear& collision);
ScalarField landau_profile_residual(const ProfileDecomposition& g, const SelfSimParams& p, const Vec3& y = {});

// --- moment functionals ---------------------------------------------------------

enum class PlateauShape { Quintic, Cosine };
enum class YWindowKind { Plateau, Cutoff };

struct MomentFunctionalSpec {
    YWindowKind window = YWindowKind::Plateau;
    PlateauShape plateau = PlateauShape::Quintic;
    std::vector<double> w_radii;   // chi_R sweep in w
    std::vector<double> y_scales;  // |y0| translations (Plateau) or R1 radii (Cutoff)
    bool weight_w2 = false;        // weight 1 or |w|^2
};

struct MomentFunctionalResult {
    std::vector<double> y_scales;
    std::vector<LimitReport> per_y; // R -> infinity limit at each y scale
    LimitReport final_limit;        // then y0 (or R1) -> infinity
    double predicted = 0.0;         // paper coefficient x measured moment
    double measured = 0.0;
    bool pass = false;
};

// Paper coefficients of the integrated identities: the q part carries
// (1-3 theta) for weight 1 and (1-5 theta) for weight |w|^2 (= -2/3 at
// theta = 1/3, 8/3 at theta = -1/3); the h part carries -2(1+3 theta) and
// -2-8 theta (= -14/3 and 2/3 at theta = +-1/3).
double moment_coefficient_q(double theta, bool weight_w2);
double moment_coefficient_h(double theta, bool weight_w2);

MomentFunctionalResult moment_functional(const ProfileDecomposition& g, const SelfSimParams& p,
                                         const MomentFunctionalSpec& spec,
                                         const CollisionBackend* backend = nullptr,
                                         double rel_tol = 0.02);

// --- refutation -----------------------------------------------------------------

struct RefutationVerdict {
    double theta = 0.0, gamma = 0.0;
    std::string case_name; // "weight-1" | "weight-|w|^2"
    double predicted = 0.0;
    double measured = 0.0;
    std::string verdict; // "consistent (trivial profile)" | "refuted: ..." | "inconclusive: ..."
    bool refuted = false;
    bool inconclusive = false;
    std::string to_json() const;
};

// Theorem 2.1 contradiction, quantified: for admissible nonnegative nonzero g
// the moment functional of the residual has a nonzero limit although the
// profile equation demands zero.
RefutationVerdict refutation_verdict(const ProfileDecomposition& g, const SelfSimParams& p,
                                     const CollisionBackend* backend = nullptr);

} // namespace kinetic
