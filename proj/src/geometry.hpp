#pragma once

// Fundamental forms, unit normals, and Gaussian/mean curvature of the
// immersed surfaces, under two ambient metrics on the span of (e1,e2,e3):
//
//   killing    <X,Y> = tr(XY)/2, Gram diag(1,1,-1) — signature (2,1).
//              Conjugation-invariant, so everything is evaluated on the
//              un-conjugated pair (A, B). The second derivatives of the
//              surface pull back to the moving frame as
//                  F_xx ~ D_x A + [A, L],   F_xy ~ [A, M],   F_yy ~ [B, M],
//              so only D_x A needs a finite difference (central, fd_step);
//              the mixed and yy terms are analytic.
//   euclidean  <X,Y> = sum of basis coefficients, Gram diag(1,1,1). Not
//              conjugation-invariant, so the conjugated tangents
//              Phi^{-1}APhi, Phi^{-1}BPhi are used directly and all three
//              second derivatives are central differences of those tangents
//              at step fd_step.
//
// Stored convention: I = E dx^2 + 2 Fc dxdy + G dy^2, and likewise
// II = e dx^2 + 2 f dxdy + g2 dy^2 (symmetric-matrix coefficients). The
// closed-form reference records below keep their conventional display shape
// instead, where the cross coefficient multiplies dxdy directly; comparison
// code converts explicitly and never mixes the two silently.
//
// The normal is the solution of <N, Fx> = <N, Fy> = 0 in coefficient space
// with |<N,N>| = 1, oriented so its e1-component is >= 0 (tie-break: e2-
// component >= 0). normal_sign = sign <N,N> (always +1 in the Euclidean
// metric); it enters the curvature formulas in the standard way for
// indefinite ambients. A lightlike normal — equivalently a degenerate
// induced metric — cannot be unit-normalized: such points keep a Euclidean-
// normalized direction, get normal_sign 0, and are flagged degenerate by
// curvatures_at.

#include <optional>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "immersion.hpp"
#include "model.hpp"

namespace solsurf::geometry {

using algebra::Mat2;

enum class Metric { euclidean, killing };

const char* metric_name(Metric m);
std::optional<Metric> metric_from_name(const std::string& name);

struct FundamentalForms {
    double x = 0.0, y = 0.0;
    Metric metric = Metric::killing;
    double E = 0.0, Fc = 0.0, G = 0.0;  // I  = E dx^2 + 2 Fc dxdy + G dy^2
    double e = 0.0, f = 0.0, g2 = 0.0;  // II = e dx^2 + 2 f  dxdy + g2 dy^2
    // Unit normal in the frame matching the metric: the moving frame for
    // killing, the conjugated frame for euclidean.
    Mat2 normal;
    double normal_sign = 1.0;  // sign of <N,N>; 0 marks a lightlike normal
};

struct CurvaturePoint {
    double K = 0.0;
    double H = 0.0;
    bool degenerate = false;  // |EG - Fc^2| below tolerance; K, H are NaN
};

// Second derivatives of the surface in the metric's frame (see the header
// comment for the two routes). Exposed for reporting and tests.
struct SecondDerivatives {
    Mat2 fxx, fxy, fyy;
};

SecondDerivatives second_derivatives(const immersion::ImmersionField& field, double x, double y,
                                     Metric metric, double fd_step = 1e-4);

// Raises degenerate_tangents when the tangent pair fails to span a plane
// (independence measure below 1e-10 in the frame the metric uses).
FundamentalForms forms_at(const immersion::ImmersionField& field, double x, double y,
                          Metric metric, double fd_step = 1e-4);

// K = sign (e g2 - f^2) / (EG - Fc^2), H = sign (E g2 - 2 Fc f + G e) /
// (2 (EG - Fc^2)); degenerate when |EG - Fc^2| < 1e-10 relative to the
// squared scale of the coefficients (K, H then NaN).
CurvaturePoint curvatures_at(const FundamentalForms& forms);

CurvaturePoint curvatures(const immersion::ImmersionField& field, double x, double y,
                          Metric metric, double fd_step = 1e-4);

// ---------------------------------------------------------------------------
// Closed-form reference records (comparison targets only).
//
// Literal transcriptions of the closed-form fundamental forms, normals and
// curvatures for the quartic sn-family model f(u) = (1-u^2)(1-k^2 u^2) in
// the killing metric. They are evaluated for side-by-side reporting against
// the numeric pipeline and are NOT asserted anywhere: the set is internally
// inconsistent in places (see comparison_report, which documents the known
// deviations instead of hiding them). Surfaces are keyed by immersion term:
// spectral (the Sym-Tafel surface), symmetry (the u_x surface), dilation_x
// (first form only).

// Display-convention record: coefficients of dx^2, dxdy, dy^2 as displayed
// (the cross coefficient is the full dxdy factor, twice the stored Fc).
struct FormRecord {
    double dx2 = 0.0, dxdy = 0.0, dy2 = 0.0;
};

FormRecord reference_first_form(immersion::Term surface, const model::JetPoint& p, double lambda,
                                double k);
// spectral and symmetry only; the symmetry dy^2 divides by u_x and is
// non-finite at turning points, as displayed.
FormRecord reference_second_form(immersion::Term surface, const model::JetPoint& p, double lambda,
                                 double k);
Mat2 reference_normal(immersion::Term surface, const model::JetPoint& p, double lambda, double k);
double reference_gauss(immersion::Term surface, const model::JetPoint& p, double lambda, double k);
double reference_mean(immersion::Term surface, const model::JetPoint& p, double lambda, double k);

// Alternate literal reading of the x-dilation cross coefficient: its source
// display contains the ambiguous factor "u^1 - 2"; the primary reading used
// by reference_first_form is u^2 - 1, this one evaluates u - 2 as written.
double reference_dilation_cross_literal(const model::JetPoint& p, double lambda, double k);

// Model-independent closed first forms in the killing metric for the
// spectral and symmetry surfaces, valid for any f. Both have no dx^2 term
// (the pairs are null in the dx direction). One denominator symbol in the
// spectral dy^2 term is ambiguous in its display and is evaluated as u;
// comparison_report records that choice in its notes.
FormRecord general_first_form(const model::ModelSpec& spec, immersion::Term surface,
                              const model::JetPoint& p, double lambda);

// ---------------------------------------------------------------------------
// Comparison report: closed-form reference values against the numeric
// pipeline, mapped to the display convention (inner product tr(XY), cross
// coefficients not doubled, reference normals used for the second forms).

struct ComparisonEntry {
    std::string surface;   // "st", "q", "dilation-x"
    std::string quantity;  // e.g. "I.dxdy", "II.dx2", "K", "N.alignment"
    double x = 0.0;
    double reference = 0.0;  // closed-form value (display convention)
    double numeric = 0.0;    // numeric value mapped to display convention
    double abs_dev = 0.0;
    double rel_dev = 0.0;  // abs_dev / max(1, |reference|)
    std::string note;
};

struct ComparisonReport {
    double k = 0.0;
    double lambda = 0.0;
    std::vector<double> xs;
    std::vector<ComparisonEntry> entries;
    std::vector<std::string> notes;

    std::string human_text() const;
};

// Builds the spectral, symmetry and x-dilation surfaces for the given model
// and evaluates every reference record against the numeric geometry at the
// sample abscissae (y = 0). Rows that cannot be evaluated (degenerate pair,
// turning point) become notes instead of entries. sn-family models only.
ComparisonReport comparison_report(const model::ModelSpec& spec, double lambda,
                                   const std::vector<double>& xs);

} // namespace solsurf::geometry
