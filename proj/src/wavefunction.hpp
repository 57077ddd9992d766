#pragma once

// Frames of the linear problem Phi_x = L Phi, Phi_y = M Phi.
//
// Because L and M do not depend on y, the frame factorizes exactly:
//   Phi(x, y) = P(x) exp(y M(0)) = exp(y M(x)) P(x),
// where P is the unimodular x-propagator (P' = L P, P(0) = I) and the two
// factorizations are the two orders of walking the integration path. P is
// integrated with an adaptive Dormand-Prince 5(4) scheme and cached at
// regular checkpoints; exp(y M) is evaluated in closed form from the
// spectral decomposition of M (eigenvalues +-sqrt(g)), so the y-direction
// never accumulates integration error.
//
// Alongside the integrated frame, scalar eigen-solutions
//   Psi_pm = exp(+- sqrt(g) (y + I(x))),   I(x) = int_0^x dt / (2 (u + l)),
// are provided with the antiderivative done by adaptive quadrature
// (authoritative) and, for the quartic potential, by candidate closed-form
// expressions that are cross-checked against the quadrature. Full 2x2
// closed-form assemblies built from the eigen-solutions come in three
// published normalizations; only `eigen_basis` satisfies the linear problem,
// the other two are retained as diagnostics.
//
// Thread-safety: prepare() mutates the checkpoint table and must be called
// before sharing; every const method is safe to call concurrently afterwards.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "laxpair.hpp"

namespace solsurf::wavefunction {

using algebra::Mat2;
using algebra::Scalar;

// Which leg of the integration path is walked first.
enum class PathOrder {
    y_then_x, // P(x) exp(y M(0)):  y-leg at x = 0, then the x-leg at height y
    x_then_y, // exp(y M(x)) P(x):  x-leg at y = 0, then the y-leg at x
};

// exp(y m) for traceless m with eigenvalues +-mu: cosh(mu y) I +
// (sinh(mu y)/mu) m, with the ratio evaluated by series for small |mu y|.
Mat2 scaled_exponential(const Mat2& m, Scalar mu, double y);

// Adaptive Dormand-Prince 5(4) for the linear system Y' = A(x) Y.
Mat2 integrate_linear(const std::function<Mat2(double)>& a_of_x, Mat2 y0,
                      double x0, double x1, double rtol = 1e-13,
                      double atol = 1e-14);

struct DetDrift {
    double x_leg; // |det P(x) - 1|
    double y_leg; // |det exp(y M(0)) - 1|
};

struct LspResidual {
    double x_part; // max |D_x Phi - L Phi|
    double y_part; // max |D_y Phi - M Phi|
};

class FrameCache {
public:
    explicit FrameCache(laxpair::SpectralContext ctx);

    const laxpair::SpectralContext& context() const { return ctx_; }

    // Extend the checkpoint table to cover [x_min, x_max]. Idempotent;
    // checkpoints are laid on a fixed grid so repeated calls are cheap.
    void prepare(double x_min, double x_max);

    // P(x), continued from the nearest checkpoint (read-only).
    Mat2 propagator(double x) const;

    // Continue a known propagator value from x_from to x_to. Exposed so
    // that finite-difference stencils can share one starting value and keep
    // their integration error common-mode.
    Mat2 continue_propagator(const Mat2& base, double x_from, double x_to) const;

    // exp(y M(0)).
    Mat2 base_exponential(double y) const;

    Mat2 phi(double x, double y, PathOrder order = PathOrder::y_then_x) const;

    // Determinant drift of the two legs, reported separately so the exact
    // unit determinant of the y-leg is not masked by the x-leg.
    DetDrift det_drift(double x, double y) const;

private:
    laxpair::SpectralContext ctx_;
    Mat2 m_origin_;            // M(0)
    double dx_ = 0.25;         // checkpoint spacing
    std::map<long, Mat2> checkpoints_; // key i -> P(i * dx_)
};

// Residuals of the linear problem for the cached frame, by extrapolated
// central differences sharing a single anchor propagator per stencil.
LspResidual lsp_residual(const FrameCache& cache, double x, double y, double h = 1e-3);

// max |Phi_(y then x) - Phi_(x then y)|; the path-independence defect.
double path_disagreement(const FrameCache& cache, double x, double y);

// ------------------------------------------------------------- scalars ----

// I(x) = int_0^x dt / (2 (u(t) + lambda)) by adaptive quadrature. Raises
// pole_on_path when u + lambda vanishes (or nearly vanishes) on the range.
Scalar half_reciprocal_antiderivative(const laxpair::SpectralContext& ctx, double x);

// sqrt(g) (y + I(x)) and the eigen-solution pair exp(+-exponent).
Scalar psi_exponent(const laxpair::SpectralContext& ctx, double x, double y);
std::pair<Scalar, Scalar> psi_pair(const laxpair::SpectralContext& ctx, double x, double y);

// Candidate closed forms of sqrt(g) I(x) for the quartic potential with
// k1 > 0 >= k2 and positive discriminant. The three variants differ in the
// weight of the elliptic-integral term and of the logarithm (formula tables
// in circulation disagree by a factor of two and by one dropped term in the
// quadratic N below); `eighth_log` is the one that reproduces the
// quadrature. All share
//   R(u) = (2 sqrt(g) sqrt(f(u)) + N(u)) / (2 sqrt(g) sqrt(f(u)) - N(u)).
// The derivation substitutes t -> u(t), so the result is valid only while u
// is monotone on [0, x]; ranges containing a turning point of u raise
// turning_point (use the quadrature in `half_reciprocal_antiderivative`
// there instead).
enum class PsiVariant {
    quarter_log_reduced, // Pi-weight 1/(l sqrt(k1)),   log-weight 1/4, N without its u^2 (k2-k1) part
    quarter_log,         // Pi-weight 1/(l sqrt(k1)),   log-weight 1/4, full N
    eighth_log,          // Pi-weight 1/(2 l sqrt(k1)), log-weight 1/8, full N
};

const char* psi_variant_name(PsiVariant v);
std::optional<PsiVariant> psi_variant_from_name(const std::string& name);

Scalar sqrtg_antiderivative_closed(const laxpair::SpectralContext& ctx, double x,
                                   PsiVariant variant);
Scalar psi_exponent_closed(const laxpair::SpectralContext& ctx, double x, double y,
                           PsiVariant variant);

// ---------------------------------------------------------- assemblies ----

// 2x2 frames assembled from the scalar eigen-solutions
//   phi_pm = Psi_pm [ (+-sqrt(g) + u_x)/sqrt(w), sqrt(w) ]^T,  w = u + lambda.
// Column 1 is (phi_+ + phi_-)/sqrt(2) in every variant; the variants differ
// in the difference column and its row signs. Raises degenerate_spectrum
// when g = 0 (the difference column divides by sqrt(g)).
enum class ClosedVariant {
    symmetric_mixed,  // difference column with opposite signs in the two rows
    rearranged_mixed, // algebraically rearranged variant of the same shape
    eigen_basis,      // uniform-sign difference column; satisfies the linear problem
};

const char* closed_variant_name(ClosedVariant v);
std::optional<ClosedVariant> closed_variant_from_name(const std::string& name);

Mat2 phi_closed(const laxpair::SpectralContext& ctx, double x, double y,
                ClosedVariant variant);

// Residuals of the linear problem for a closed-form assembly.
LspResidual lsp_residual_closed(const laxpair::SpectralContext& ctx, ClosedVariant variant,
                                double x, double y, double h = 1e-3);

// max |Phi(x,y) - Phi_c(x,y) Phi_c(0,0)^{-1}|: the integrated frame and a
// closed assembly may differ only by a constant right factor.
double closed_form_match(const FrameCache& cache, ClosedVariant variant,
                         double x, double y);

// ------------------------------------------------- spectral derivative ----

// d Phi / d lambda by extrapolated central differences across four sibling
// frames at lambda +- h and lambda +- h/2. Construction raises
// branch_crossing if the discriminant changes sign inside the stencil.
class LambdaDerivative {
public:
    LambdaDerivative(const model::ModelSpec& spec, double lambda,
                     std::optional<laxpair::FormKind> form = std::nullopt,
                     double h = 1e-5);

    void prepare(double x_min, double x_max);

    Mat2 phi_lambda(double x, double y) const;

    double step() const { return h_; }

private:
    double h_;
    FrameCache outer_minus_, inner_minus_, inner_plus_, outer_plus_;
};

} // namespace solsurf::wavefunction
