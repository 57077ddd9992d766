#include "laxpair.hpp"

#include <array>
#include <cmath>

#include "fd.hpp"

namespace solsurf::laxpair {

namespace {

// Rational entries blow up on u + lambda = 0; reject a neighborhood scaled
// to the spectral parameter rather than the bare epsilon.
constexpr double kDenominatorFloor = 1e-12;

inline Scalar value_of(const Scalar& s) { return s; }
inline Scalar value_of(const Dual& d) { return d.v; }

void guard_denominator(Scalar w, double lambda) {
    if (std::abs(w) < kDenominatorFloor * (1.0 + std::abs(lambda))) {
        raise(errc::singular_denominator,
              "rational matrix entries are singular on u + lambda = 0");
    }
}

// Potential and first derivative generic over plain scalars and duals.
// Custom models go through their callbacks, with the chain rule supplying
// the dual derivative part; quartic kinds reuse the templated expressions.
Scalar f_as(const model::ModelSpec& spec, const Scalar& u) {
    if (spec.kind == model::Kind::custom) return model::f_of(spec, u.real());
    return model::potential<Scalar>(spec, u);
}

Dual f_as(const model::ModelSpec& spec, const Dual& u) {
    if (spec.kind == model::Kind::custom) {
        const double uv = u.v.real();
        return {model::f_of(spec, uv), model::fp_of(spec, uv) * u.d};
    }
    return model::potential<Dual>(spec, u);
}

Scalar fp_as(const model::ModelSpec& spec, const Scalar& u) {
    if (spec.kind == model::Kind::custom) return model::fp_of(spec, u.real());
    return model::potential_prime<Scalar>(spec, u);
}

Dual fp_as(const model::ModelSpec& spec, const Dual& u) {
    if (spec.kind == model::Kind::custom) {
        const double uv = u.v.real();
        return {model::fp_of(spec, uv), model::fpp_of(spec, uv) * u.d};
    }
    return model::potential_prime<Dual>(spec, u);
}

template <class T>
struct Jet {
    T u{}, ux{};
};

Jet<Scalar> lift(const model::JetPoint& p) {
    return {Scalar(p.u), Scalar(p.ux)};
}

// Forward-mode seeding: each jet variable carries its own x-derivative, so
// evaluating the entry expressions once yields values and total derivatives
// together.
Jet<Dual> lift_dx(const model::JetPoint& p) {
    return {Dual{p.u, p.ux}, Dual{p.ux, p.uxx}};
}

template <class T>
std::array<T, 4> entries_M(const SpectralContext& ctx, const Jet<T>& j) {
    const double l = ctx.lambda;
    const auto& m = ctx.model;
    if (ctx.form == FormKind::polynomial) {
        T quad = T(m.k2) * (j.u * j.u + T(l * l)) + T(m.k1 - m.k2);
        return {j.ux, (j.u - T(l)) * quad, j.u + T(l), -j.ux};
    }
    T w = j.u + T(l);
    guard_denominator(value_of(w), l);
    T fm = f_as(m, j.u) - T(ctx.g);
    return {j.ux, -fm / w, w, -j.ux};
}

template <class T>
std::array<T, 4> entries_L(const SpectralContext& ctx, const Jet<T>& j) {
    const double l = ctx.lambda;
    const auto& m = ctx.model;
    if (ctx.form == FormKind::polynomial) {
        T p = T(-3.0 * m.k2) * j.u * j.u + T(2.0 * l * m.k2) * j.u
            + T((m.k2 - m.k1) - m.k2 * l * l);
        return {T(0.0), T(0.5) * p, T(0.5), T(0.0)};
    }
    T w = j.u + T(l);
    guard_denominator(value_of(w), l);
    T fm = f_as(m, j.u) - T(ctx.g);
    T l12 = T(0.5) * (fp_as(m, j.u) / w - fm / (w * w));
    return {T(0.0), l12, T(0.5), T(0.0)};
}

// Lambda-derivative of the M entries at a fixed jet, generic like entries_M
// so the same expressions serve the value (plain scalars) and its total
// x-derivative (duals).
template <class T>
std::array<T, 4> entries_M_dlambda(const SpectralContext& ctx, const Jet<T>& j) {
    const double l = ctx.lambda;
    const auto& m = ctx.model;
    if (ctx.form == FormKind::polynomial) {
        T quad = T(m.k2) * (j.u * j.u + T(l * l)) + T(m.k1 - m.k2);
        T d12 = (j.u - T(l)) * T(2.0 * m.k2 * l) - quad;
        return {T(0.0), d12, T(1.0), T(0.0)};
    }
    T w = j.u + T(l);
    guard_denominator(value_of(w), l);
    const double gp = -model::fp_of(m, -l); // g(l) = f(-l)
    T fm = f_as(m, j.u) - T(ctx.g);
    return {T(0.0), T(gp) / w + fm / (w * w), T(1.0), T(0.0)};
}

// Entries of D_x M as jet functions: the diagonal is +-u_xx and the (1,2)
// entry is dM12/du * u_x = -2 L12 u_x (M12 has no u_x dependence and
// dM12/du = -2 L12 in both matrix forms). Evaluating with duals yields the
// second total derivative.
template <class T>
std::array<T, 4> entries_M_dx_of(const SpectralContext& ctx, const Jet<T>& j, const T& uxx) {
    const auto le = entries_L(ctx, j);
    T m12_du = T(-2.0) * le[1];
    return {uxx, m12_du * j.ux, j.ux, T(-1.0) * uxx};
}

Mat2 as_matrix(const std::array<Scalar, 4>& e) { return {e[0], e[1], e[2], e[3]}; }
Mat2 value_part(const std::array<Dual, 4>& e) { return {e[0].v, e[1].v, e[2].v, e[3].v}; }
Mat2 deriv_part(const std::array<Dual, 4>& e) { return {e[0].d, e[1].d, e[2].d, e[3].d}; }

} // namespace

const char* form_name(FormKind form) {
    return form == FormKind::polynomial ? "polynomial" : "rational";
}

std::optional<FormKind> form_from_name(const std::string& name) {
    if (name == "polynomial") return FormKind::polynomial;
    if (name == "rational") return FormKind::rational;
    return std::nullopt;
}

SpectralContext make_context(const model::ModelSpec& spec, double lambda,
                             std::optional<FormKind> form) {
    if (!std::isfinite(lambda)) {
        raise(errc::invalid_argument, "spectral parameter must be finite");
    }
    const FormKind chosen = form.value_or(
        spec.kind == model::Kind::custom ? FormKind::rational : FormKind::polynomial);
    if (chosen == FormKind::polynomial && spec.kind == model::Kind::custom) {
        raise(errc::invalid_argument,
              "polynomial matrix form requires the quartic potential");
    }
    SpectralContext ctx;
    ctx.model = spec;
    ctx.lambda = lambda;
    ctx.g = model::discriminant(spec, lambda);
    ctx.sqrt_g = std::sqrt(Scalar(ctx.g));
    if (std::abs(ctx.sqrt_g * ctx.sqrt_g - Scalar(ctx.g)) >
        1e-14 * std::max(1.0, std::abs(ctx.g))) {
        raise(errc::invariant_violation, "square of sqrt(g) deviates from g");
    }
    ctx.form = chosen;
    return ctx;
}

Mat2 build_M(const SpectralContext& ctx, const model::JetPoint& p) {
    return as_matrix(entries_M(ctx, lift(p)));
}

Mat2 build_L(const SpectralContext& ctx, const model::JetPoint& p) {
    return as_matrix(entries_L(ctx, lift(p)));
}

Mat2 build_M_dlambda(const SpectralContext& ctx, const model::JetPoint& p) {
    return as_matrix(entries_M_dlambda(ctx, lift(p)));
}

Mat2 build_L_dlambda(const SpectralContext& ctx, const model::JetPoint& p) {
    const double l = ctx.lambda;
    const auto& m = ctx.model;
    if (ctx.form == FormKind::polynomial) {
        return {0.0, m.k2 * (p.u - l), 0.0, 0.0};
    }
    const Scalar w{p.u + l};
    guard_denominator(w, l);
    const double gp = -model::fp_of(m, -l);
    const double fp = model::fp_of(m, p.u);
    const Scalar fm{model::f_of(m, p.u) - ctx.g};
    const Scalar d12 = 0.5 * (Scalar(gp - fp) / (w * w) + 2.0 * fm / (w * w * w));
    return {0.0, d12, 0.0, 0.0};
}

Mat2 build_M_dx(const SpectralContext& ctx, const model::JetPoint& p) {
    return deriv_part(entries_M(ctx, lift_dx(p)));
}

Mat2 build_L_dx(const SpectralContext& ctx, const model::JetPoint& p) {
    return deriv_part(entries_L(ctx, lift_dx(p)));
}

Mat2 build_M_dxx(const SpectralContext& ctx, const model::JetPoint& p) {
    return deriv_part(entries_M_dx_of(ctx, lift_dx(p), Dual{p.uxx, p.uxxx}));
}

Mat2 build_M_dlambda_dx(const SpectralContext& ctx, const model::JetPoint& p) {
    return deriv_part(entries_M_dlambda(ctx, lift_dx(p)));
}

double compatibility_residual(const SpectralContext& ctx, const model::JetPoint& p) {
    const auto m_entries = entries_M(ctx, lift_dx(p));
    const Mat2 m = value_part(m_entries);
    const Mat2 m_dx = deriv_part(m_entries);
    const Mat2 l = build_L(ctx, p);
    return algebra::max_abs(m_dx + algebra::commutator(m, l));
}

double det_defect(const SpectralContext& ctx, const model::JetPoint& p) {
    return std::abs(build_M(ctx, p).det() + Scalar(ctx.g));
}

Mat2 prolong_M(const SpectralContext& ctx, const model::JetPoint& p) {
    const double l = ctx.lambda;
    const auto& m = ctx.model;
    Scalar d12_du;
    if (ctx.form == FormKind::polynomial) {
        const double quad = m.k2 * (p.u * p.u + l * l) + (m.k1 - m.k2);
        d12_du = quad + (p.u - l) * (2.0 * m.k2 * p.u);
    } else {
        const Scalar w{p.u + l};
        guard_denominator(w, l);
        const Scalar fm{model::f_of(m, p.u) - ctx.g};
        d12_du = (fm / w - model::fp_of(m, p.u)) / w;
    }
    // Diagonal +-u_x differentiates to +-u_xx; the w entry contributes u_x.
    return {p.uxx, d12_du * p.ux, p.ux, -p.uxx};
}

Mat2 prolong_L(const SpectralContext& ctx, const model::JetPoint& p) {
    const double l = ctx.lambda;
    const auto& m = ctx.model;
    Scalar d12_du;
    if (ctx.form == FormKind::polynomial) {
        d12_du = m.k2 * (l - 3.0 * p.u);
    } else {
        const Scalar w{p.u + l};
        guard_denominator(w, l);
        const Scalar fm{model::f_of(m, p.u) - ctx.g};
        const double fp = model::fp_of(m, p.u);
        const double fpp = model::fpp_of(m, p.u);
        d12_du = 0.5 * (Scalar(fpp) / w - 2.0 * Scalar(fp) / (w * w)
                        + 2.0 * fm / (w * w * w));
    }
    return {0.0, d12_du * p.ux, 0.0, 0.0};
}

double determining_residual(const model::ModelSpec& spec, double x, double h) {
    const model::JetPoint p = model::jet(spec, x);
    const double d2q = fd::derivative(
        [&](double t) { return model::jet(spec, t).uxx; }, x, h);
    return std::abs(d2q - 0.5 * model::fpp_of(spec, p.u) * p.ux);
}

} // namespace solsurf::laxpair
