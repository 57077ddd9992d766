#pragma once

// Zero-curvature matrix pair for the model, with analytic derivatives and
// residual diagnostics.
//
// The linear problem is Phi_x = L Phi, Phi_y = M Phi with L and M functions
// of the jet (u, u_x) and the spectral parameter lambda but not of y, so the
// compatibility condition collapses to D_x M + [M, L] = 0 on solutions of
// u_xx = f'(u)/2. The eigenvalues of M are +-sqrt(g) with discriminant
// g(lambda) = f(-lambda) = -det M.
//
// Two realizations of the same pair are provided:
//
//  polynomial (quartic potential f(u) = (1 - u^2)(k1 + k2 u^2) only):
//    M = [[ u_x,  (u - l)(k2 (u^2 + l^2) + k1 - k2) ],
//         [ u + l,                             -u_x ]]
//    L = 1/2 [[ 0,  -3 k2 u^2 + 2 l k2 u + (k2 - k1) - k2 l^2 ],
//             [ 1,                                          0 ]]
//
//  rational (any potential; w = u + lambda):
//    M12 = -(f(u) - g)/w,     L12 = ( f'(u)/w - (f(u) - g)/w^2 ) / 2,
//    with the remaining entries as above.
//
// For the quartic, (f(u) - g)/w factors exactly and the two forms coincide;
// the rational form is singular on the locus u + lambda = 0
// (singular_denominator) while the polynomial form is regular everywhere.

#include <optional>
#include <string>

#include "algebra.hpp"
#include "dual.hpp"
#include "model.hpp"

namespace solsurf::laxpair {

using algebra::Dual;
using algebra::Mat2;
using algebra::Scalar;

enum class FormKind { polynomial, rational };

const char* form_name(FormKind form);
std::optional<FormKind> form_from_name(const std::string& name);

struct SpectralContext {
    model::ModelSpec model;
    double lambda = 0.0;
    double g = 0.0;    // discriminant f(-lambda) = -det M
    Scalar sqrt_g{};   // principal branch: real for g >= 0, +i sqrt(-g) else
    FormKind form = FormKind::polynomial;
};

// Validates lambda, evaluates the discriminant and its principal square
// root, and selects the matrix realization. Without an explicit form the
// quartic kinds use the polynomial realization and custom models the
// rational one; requesting polynomial for a custom model is an error.
SpectralContext make_context(const model::ModelSpec& spec, double lambda,
                             std::optional<FormKind> form = std::nullopt);

// Matrix values at a jet point.
Mat2 build_M(const SpectralContext& ctx, const model::JetPoint& p);
Mat2 build_L(const SpectralContext& ctx, const model::JetPoint& p);

// Analytic partial d/dlambda at a fixed jet.
Mat2 build_M_dlambda(const SpectralContext& ctx, const model::JetPoint& p);
Mat2 build_L_dlambda(const SpectralContext& ctx, const model::JetPoint& p);

// Total d/dx along the solution, computed by dual-number forward mode with
// the jet seeding (u, u_x, x) -> (u_x, u_xx, 1); exact, no differencing.
Mat2 build_M_dx(const SpectralContext& ctx, const model::JetPoint& p);
Mat2 build_L_dx(const SpectralContext& ctx, const model::JetPoint& p);

// Second total d/dx of M along the solution (consumes u_xxx from the jet).
Mat2 build_M_dxx(const SpectralContext& ctx, const model::JetPoint& p);

// Total d/dx of the lambda-derivative of M (mixed partials commute, so this
// is also the lambda-derivative of D_x M).
Mat2 build_M_dlambda_dx(const SpectralContext& ctx, const model::JetPoint& p);

// max |D_x M + [M, L]| at the jet point; the zero-curvature defect.
double compatibility_residual(const SpectralContext& ctx, const model::JetPoint& p);

// |det M + g|.
double det_defect(const SpectralContext& ctx, const model::JetPoint& p);

// Prolonged action of the evolutionary field with characteristic Q = u_x on
// the matrix entries: pr v_Q W = dW/du * u_x + dW/du_x * u_xx, assembled
// from explicit partial derivatives (independent of the dual-number path).
// On solutions this equals the total x-derivative, since neither matrix
// depends on x explicitly.
Mat2 prolong_M(const SpectralContext& ctx, const model::JetPoint& p);
Mat2 prolong_L(const SpectralContext& ctx, const model::JetPoint& p);

// Residual of the linearized equation D_x^2 Q = f''(u) Q / 2 for Q = u_x,
// with D_x^2 Q = D_x u_xx formed by extrapolated central differences of the
// jet — a derivative path independent of the stored third derivative.
double determining_residual(const model::ModelSpec& spec, double x, double h = 1e-3);

} // namespace solsurf::laxpair
