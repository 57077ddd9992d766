#include "immersion.hpp"

#include <cmath>
#include <complex>

#include "errors.hpp"

namespace solsurf::immersion {

namespace {

const Mat2 kZero{0.0, 0.0, 0.0, 0.0};

Mat2 gauge_matrix(const laxpair::SpectralContext& ctx, GaugeKind g, const model::JetPoint& p) {
    switch (g) {
        case GaugeKind::e1: return algebra::kE1;
        case GaugeKind::e2: return algebra::kE2;
        case GaugeKind::e3: return algebra::kE3;
        case GaugeKind::lax_l: return laxpair::build_L(ctx, p);
        case GaugeKind::lax_m: return laxpair::build_M(ctx, p);
    }
    raise(errc::invalid_argument, "unknown gauge choice");
}

} // namespace

// Parallelogram area spanned by A and B in the basis-coefficient space with
// the Hermitian norm (the plain Euclidean norm on real data): |A| times the
// norm of B's component orthogonal to A. Zero exactly when the pair fails
// to span a plane — either tangent vanishing or the two being parallel.
double pair_independence(const Mat2& a, const Mat2& b) {
    const auto ca = algebra::decompose(a);
    const auto cb = algebra::decompose(b);
    const auto dot = [](const algebra::Coeffs& u, const algebra::Coeffs& v) {
        return std::conj(u.c1) * v.c1 + std::conj(u.c2) * v.c2 + std::conj(u.c3) * v.c3;
    };
    const double na2 = dot(ca, ca).real();
    const double nb2 = dot(cb, cb).real();
    const double cross = std::norm(dot(ca, cb));
    return std::sqrt(std::max(0.0, na2 * nb2 - cross));
}

const char* term_name(Term t) {
    switch (t) {
        case Term::translation: return "translation";
        case Term::spectral: return "spectral";
        case Term::gauge: return "gauge";
        case Term::dilation_x: return "dilation-x";
        case Term::dilation_y: return "dilation-y";
        case Term::symmetry: return "symmetry";
    }
    raise(errc::invalid_argument, "unknown immersion term");
}

std::optional<Term> term_from_name(const std::string& name) {
    if (name == "translation") return Term::translation;
    if (name == "spectral" || name == "st") return Term::spectral;
    if (name == "gauge") return Term::gauge;
    if (name == "dilation-x") return Term::dilation_x;
    if (name == "dilation-y") return Term::dilation_y;
    if (name == "symmetry") return Term::symmetry;
    return std::nullopt;
}

const char* gauge_name(GaugeKind g) {
    switch (g) {
        case GaugeKind::e1: return "e1";
        case GaugeKind::e2: return "e2";
        case GaugeKind::e3: return "e3";
        case GaugeKind::lax_l: return "L";
        case GaugeKind::lax_m: return "M";
    }
    raise(errc::invalid_argument, "unknown gauge choice");
}

std::optional<GaugeKind> gauge_from_name(const std::string& name) {
    if (name == "e1") return GaugeKind::e1;
    if (name == "e2") return GaugeKind::e2;
    if (name == "e3") return GaugeKind::e3;
    if (name == "L") return GaugeKind::lax_l;
    if (name == "M") return GaugeKind::lax_m;
    return std::nullopt;
}

TangentPair term_tangents(const laxpair::SpectralContext& ctx, Term term,
                          const model::JetPoint& p, double y, double a_lambda,
                          GaugeKind gauge) {
    TangentPair out;
    out.x = p.x;
    out.y = y;
    out.a_dy = kZero; // no term carries explicit y-dependence into A
    switch (term) {
        case Term::translation:
            out.a = laxpair::build_L_dx(ctx, p);
            out.b = laxpair::build_M_dx(ctx, p);
            out.b_dx = laxpair::build_M_dxx(ctx, p);
            break;
        case Term::spectral:
            out.a = a_lambda * laxpair::build_L_dlambda(ctx, p);
            out.b = a_lambda * laxpair::build_M_dlambda(ctx, p);
            out.b_dx = a_lambda * laxpair::build_M_dlambda_dx(ctx, p);
            break;
        case Term::gauge: {
            const Mat2 m_dx = laxpair::build_M_dx(ctx, p);
            if (gauge == GaugeKind::lax_l) {
                const Mat2 l = laxpair::build_L(ctx, p);
                const Mat2 l_dx = laxpair::build_L_dx(ctx, p);
                out.a = l_dx; // D_x L + [L, L], and [L, L] = 0
                out.b = algebra::commutator(l, laxpair::build_M(ctx, p));
                out.b_dx = algebra::commutator(l_dx, laxpair::build_M(ctx, p)) +
                           algebra::commutator(l, m_dx);
            } else if (gauge == GaugeKind::lax_m) {
                // A is the zero-curvature defect (vanishes on solutions);
                // B = D_y M + [M, M] = 0 identically.
                out.a = m_dx + algebra::commutator(laxpair::build_M(ctx, p),
                                                   laxpair::build_L(ctx, p));
                out.b = kZero;
                out.b_dx = kZero;
            } else {
                const Mat2 s = gauge_matrix(ctx, gauge, p);
                out.a = algebra::commutator(s, laxpair::build_L(ctx, p));
                out.b = algebra::commutator(s, laxpair::build_M(ctx, p));
                out.b_dx = algebra::commutator(s, m_dx);
            }
            break;
        }
        case Term::dilation_x:
            out.a = laxpair::build_L(ctx, p) + p.x * laxpair::build_L_dx(ctx, p);
            out.b = p.x * laxpair::build_M_dx(ctx, p);
            out.b_dx = laxpair::build_M_dx(ctx, p) + p.x * laxpair::build_M_dxx(ctx, p);
            break;
        case Term::dilation_y:
            out.a = kZero;
            out.b = laxpair::build_M(ctx, p);
            out.b_dx = laxpair::build_M_dx(ctx, p);
            break;
        case Term::symmetry:
            out.a = laxpair::prolong_L(ctx, p);
            out.b = laxpair::prolong_M(ctx, p);
            // pr v_{u_x} acts as D_x on the x-free entries, so the analytic
            // derivative of B coincides with the translation term's.
            out.b_dx = laxpair::build_M_dxx(ctx, p);
            break;
    }
    out.lin_indep_measure = pair_independence(out.a, out.b);
    return out;
}

TangentPair combined_tangents(const laxpair::SpectralContext& ctx, const ImmersionSpec& spec,
                              const model::JetPoint& p, double y) {
    bool any = false;
    for (double a : spec.alpha) any = any || (a != 0.0);
    if (!any) raise(errc::invalid_argument, "all immersion weights vanish");
    TangentPair out;
    out.x = p.x;
    out.y = y;
    out.a = out.b = out.a_dy = out.b_dx = kZero;
    for (std::size_t i = 0; i < kTermOrder.size(); ++i) {
        if (spec.alpha[i] == 0.0) continue;
        const TangentPair t =
            term_tangents(ctx, kTermOrder[i], p, y, spec.a_lambda, spec.gauge);
        out.a += spec.alpha[i] * t.a;
        out.b += spec.alpha[i] * t.b;
        out.a_dy += spec.alpha[i] * t.a_dy;
        out.b_dx += spec.alpha[i] * t.b_dx;
    }
    out.lin_indep_measure = pair_independence(out.a, out.b);
    return out;
}

double ab_condition_residual(const laxpair::SpectralContext& ctx, const TangentPair& pair) {
    const auto p = model::jet(ctx.model, pair.x);
    const Mat2 l = laxpair::build_L(ctx, p);
    const Mat2 m = laxpair::build_M(ctx, p);
    return algebra::max_abs(pair.a_dy - pair.b_dx + algebra::commutator(pair.a, m) +
                            algebra::commutator(l, pair.b));
}

ImmersionField::ImmersionField(const model::ModelSpec& model, double lambda,
                               const ImmersionSpec& spec,
                               std::optional<laxpair::FormKind> form)
    : ctx_(laxpair::make_context(model, lambda, form)), spec_(spec), cache_(ctx_) {
    bool any = false;
    for (double a : spec.alpha) any = any || (a != 0.0);
    if (!any) raise(errc::invalid_argument, "all immersion weights vanish");
    if (spec_.alpha[1] != 0.0) dlambda_.emplace(model, lambda, form);
}

void ImmersionField::prepare(double x_min, double x_max) {
    cache_.prepare(x_min, x_max);
    if (dlambda_) dlambda_->prepare(x_min, x_max);
}

Mat2 ImmersionField::value(double x, double y) const {
    const auto p = model::jet(ctx_.model, x);
    const Mat2 phi = cache_.phi(x, y);
    const Mat2 phi_inv = algebra::inverse(phi);
    const auto& al = spec_.alpha;
    Mat2 f = kZero;
    if (al[0] != 0.0 || al[3] != 0.0 || al[5] != 0.0) {
        // translation and the u_x-symmetry share the integral Phi^{-1} L Phi;
        // the x-dilation weights it by x.
        const Mat2 cl = phi_inv * laxpair::build_L(ctx_, p) * phi;
        f += (al[0] + al[5] + al[3] * x) * cl;
    }
    if (al[1] != 0.0) {
        f += (al[1] * spec_.a_lambda) * (phi_inv * dlambda_->phi_lambda(x, y));
    }
    if (al[2] != 0.0) {
        f += al[2] * (phi_inv * gauge_matrix(ctx_, spec_.gauge, p) * phi);
    }
    if (al[4] != 0.0) {
        f += (al[4] * y) * (phi_inv * laxpair::build_M(ctx_, p) * phi);
    }
    const Scalar tr = f.trace();
    if (std::abs(tr) > 1e-12) f -= (0.5 * tr) * algebra::kIdentity;
    return f;
}

TangentPair ImmersionField::tangents(double x, double y) const {
    return combined_tangents(ctx_, spec_, model::jet(ctx_.model, x), y);
}

std::pair<Mat2, Mat2> ImmersionField::conjugated_tangents(double x, double y) const {
    const TangentPair t = tangents(x, y);
    const Mat2 phi = cache_.phi(x, y);
    const Mat2 phi_inv = algebra::inverse(phi);
    return {phi_inv * t.a * phi, phi_inv * t.b * phi};
}

std::pair<double, double> tangent_consistency(const ImmersionField& field, double x, double y,
                                              double h) {
    if (!(h > 0.0) || !std::isfinite(h)) raise(errc::invalid_argument, "step must be positive");
    const auto [tx, ty] = field.conjugated_tangents(x, y);
    const Mat2 fx = (0.5 / h) * (field.value(x + h, y) - field.value(x - h, y));
    const Mat2 fy = (0.5 / h) * (field.value(x, y + h) - field.value(x, y - h));
    return {algebra::max_abs(fx - tx), algebra::max_abs(fy - ty)};
}

} // namespace solsurf::immersion
