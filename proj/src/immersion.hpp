#pragma once
// Deformation pairs (A, B) of the zero-curvature representation and the
// integrated surfaces they generate. An admissible pair satisfies
//
//     D_y A - D_x B + [A, M] + [L, B] = 0   on solutions,
//
// and then a surface F with D_x F = Phi^{-1} A Phi, D_y F = Phi^{-1} B Phi
// exists. Each supported term integrates in closed form:
//
//   term         A                    B                    F
//   translation  D_x L                D_x M                Phi^{-1} L Phi
//   spectral     a dL/dl              a dM/dl              a Phi^{-1} Phi_l
//   gauge        D_x S + [S, L]       D_y S + [S, M]       Phi^{-1} S Phi
//   dilation_x   L + x D_x L          x D_x M              x Phi^{-1} L Phi
//   dilation_y   0                    M                    y Phi^{-1} M Phi
//   symmetry     pr v_{u_x} L         pr v_{u_x} M         Phi^{-1} L Phi
//
// The symmetry characteristic is Q = u_x; its prolongation acts as the total
// x-derivative on x-free jet functions, so the pair coincides with the
// translation pair and shares its integral. A combined surface weights the
// terms by alpha[0..5] in the order of the table.

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "algebra.hpp"
#include "laxpair.hpp"
#include "model.hpp"
#include "wavefunction.hpp"

namespace solsurf::immersion {

using algebra::Mat2;
using algebra::Scalar;

enum class Term { translation, spectral, gauge, dilation_x, dilation_y, symmetry };
enum class GaugeKind { e1, e2, e3, lax_l, lax_m };
enum class SymmetryKind { ux };

const char* term_name(Term t);
// Accepts the canonical names plus the CLI shorthand "st" for spectral.
std::optional<Term> term_from_name(const std::string& name);
const char* gauge_name(GaugeKind g);
std::optional<GaugeKind> gauge_from_name(const std::string& name);

// Weights and choices assembling a combined surface. alpha slots follow
// kTermOrder; a_lambda is the constant scalar weight of the spectral term.
struct ImmersionSpec {
    std::array<double, 6> alpha{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    double a_lambda = 1.0;
    GaugeKind gauge = GaugeKind::e1;
    SymmetryKind symmetry = SymmetryKind::ux;
};

inline constexpr std::array<Term, 6> kTermOrder = {
    Term::translation, Term::spectral,  Term::gauge,
    Term::dilation_x,  Term::dilation_y, Term::symmetry};

// Un-conjugated tangents (A, B) at a point, with the analytic derivatives
// the admissibility residual needs. lin_indep_measure is the parallelogram
// area spanned by A and B in basis coefficients — |A| times the norm of B's
// component orthogonal to A — and vanishes exactly when the pair fails to
// span a plane (either tangent zero, or the two parallel).
struct TangentPair {
    Mat2 a, b;
    Mat2 a_dy, b_dx;
    double x = 0.0, y = 0.0;
    double lin_indep_measure = 0.0;
};

// The lin_indep_measure of an (A, B) pair; see TangentPair.
double pair_independence(const Mat2& a, const Mat2& b);

TangentPair term_tangents(const laxpair::SpectralContext& ctx, Term term,
                          const model::JetPoint& p, double y = 0.0, double a_lambda = 1.0,
                          GaugeKind gauge = GaugeKind::e1);

// Weighted sum of the six term pairs (all fields are linear in the pair).
TangentPair combined_tangents(const laxpair::SpectralContext& ctx, const ImmersionSpec& spec,
                              const model::JetPoint& p, double y = 0.0);

// max-abs entry of D_y A - D_x B + [A, M] + [L, B] at the pair's base point,
// using the pair's analytic derivatives.
double ab_condition_residual(const laxpair::SpectralContext& ctx, const TangentPair& pair);

// A combined surface F(x, y) evaluated through the integrated frame. The
// spectral term differentiates the frame in lambda, so constructing a field
// with alpha[1] != 0 can raise branch_crossing near discriminant roots.
// prepare() tabulates frame propagators over [x_min, x_max]; evaluation is
// const and thread-safe afterwards.
class ImmersionField {
  public:
    ImmersionField(const model::ModelSpec& model, double lambda, const ImmersionSpec& spec,
                   std::optional<laxpair::FormKind> form = std::nullopt);

    void prepare(double x_min, double x_max);

    const laxpair::SpectralContext& context() const { return ctx_; }
    const ImmersionSpec& spec() const { return spec_; }

    // F(x, y), projected back onto zero trace when numerical drift from the
    // spectral term's frame differencing exceeds 1e-12.
    Mat2 value(double x, double y) const;

    // Combined (A, B) at the point.
    TangentPair tangents(double x, double y) const;

    // (Phi^{-1} A Phi, Phi^{-1} B Phi): the surface's analytic tangents.
    std::pair<Mat2, Mat2> conjugated_tangents(double x, double y) const;

    Mat2 frame(double x, double y) const { return cache_.phi(x, y); }

  private:
    laxpair::SpectralContext ctx_;
    ImmersionSpec spec_;
    wavefunction::FrameCache cache_;
    std::optional<wavefunction::LambdaDerivative> dlambda_;
};

// Plain central differences of value() at step h against the analytic
// conjugated tangents; returns (x-error, y-error), each O(h^2).
std::pair<double, double> tangent_consistency(const ImmersionField& field, double x, double y,
                                              double h = 1e-3);

} // namespace solsurf::immersion
