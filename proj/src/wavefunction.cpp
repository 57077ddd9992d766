#include "wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fd.hpp"
#include "special.hpp"

namespace solsurf::wavefunction {

namespace {

Mat2 l_matrix(const laxpair::SpectralContext& ctx, double x) {
    return laxpair::build_L(ctx, model::jet(ctx.model, x));
}

Mat2 m_matrix(const laxpair::SpectralContext& ctx, double x) {
    return laxpair::build_M(ctx, model::jet(ctx.model, x));
}

} // namespace

Mat2 scaled_exponential(const Mat2& m, Scalar mu, double y) {
    const Scalar z = mu * y;
    const Scalar c = std::cosh(z);
    Scalar s; // sinh(mu y) / mu = y sinh(z)/z, by series near z = 0
    if (std::abs(z) < 1e-2) {
        const Scalar z2 = z * z;
        s = y * (1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0)));
    } else {
        s = std::sinh(z) / mu;
    }
    return c * algebra::kIdentity + s * m;
}

Mat2 integrate_linear(const std::function<Mat2(double)>& a_of_x, Mat2 y0,
                      double x0, double x1, double rtol, double atol) {
    if (!std::isfinite(x0) || !std::isfinite(x1)) {
        raise(errc::invalid_argument, "integration endpoints must be finite");
    }
    if (x0 == x1) return y0;

    const double direction = (x1 > x0) ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    double x = x0;
    Mat2 y = y0;
    double h = direction * std::min(span, 0.1);

    constexpr long kMaxSteps = 2'000'000;
    for (long step = 0; step < kMaxSteps; ++step) {
        if ((x - x1) * direction >= 0.0) return y;
        if ((x + h - x1) * direction > 0.0) h = x1 - x;

        // Dormand-Prince 5(4) stages.
        const Mat2 k1 = a_of_x(x) * y;
        const Mat2 k2 = a_of_x(x + h * (1.0 / 5.0))
                      * (y + (h * (1.0 / 5.0)) * k1);
        const Mat2 k3 = a_of_x(x + h * (3.0 / 10.0))
                      * (y + (h * (3.0 / 40.0)) * k1 + (h * (9.0 / 40.0)) * k2);
        const Mat2 k4 = a_of_x(x + h * (4.0 / 5.0))
                      * (y + (h * (44.0 / 45.0)) * k1 - (h * (56.0 / 15.0)) * k2
                         + (h * (32.0 / 9.0)) * k3);
        const Mat2 k5 = a_of_x(x + h * (8.0 / 9.0))
                      * (y + (h * (19372.0 / 6561.0)) * k1 - (h * (25360.0 / 2187.0)) * k2
                         + (h * (64448.0 / 6561.0)) * k3 - (h * (212.0 / 729.0)) * k4);
        const Mat2 k6 = a_of_x(x + h)
                      * (y + (h * (9017.0 / 3168.0)) * k1 - (h * (355.0 / 33.0)) * k2
                         + (h * (46732.0 / 5247.0)) * k3 + (h * (49.0 / 176.0)) * k4
                         - (h * (5103.0 / 18656.0)) * k5);
        const Mat2 y5 = y + (h * (35.0 / 384.0)) * k1 + (h * (500.0 / 1113.0)) * k3
                      + (h * (125.0 / 192.0)) * k4 - (h * (2187.0 / 6784.0)) * k5
                      + (h * (11.0 / 84.0)) * k6;
        const Mat2 k7 = a_of_x(x + h) * y5;
        const Mat2 err = (h * (71.0 / 57600.0)) * k1 - (h * (71.0 / 16695.0)) * k3
                       + (h * (71.0 / 1920.0)) * k4 - (h * (17253.0 / 339200.0)) * k5
                       + (h * (22.0 / 525.0)) * k6 - (h * (1.0 / 40.0)) * k7;

        const double scale = atol + rtol * std::max(algebra::max_abs(y), algebra::max_abs(y5));
        const double err_norm = algebra::max_abs(err) / scale;

        if (!std::isfinite(err_norm)) {
            h *= 0.5;
        } else {
            if (err_norm <= 1.0) {
                x += h;
                y = y5;
            }
            const double factor = (err_norm == 0.0)
                ? 5.0
                : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
            h *= factor;
        }
        if (std::abs(h) < span * 1e-14) {
            raise(errc::invariant_violation, "adaptive step size underflow");
        }
    }
    raise(errc::invariant_violation, "adaptive integrator exceeded its step budget");
}

FrameCache::FrameCache(laxpair::SpectralContext ctx)
    : ctx_(std::move(ctx)), m_origin_(m_matrix(ctx_, 0.0)) {
    checkpoints_.emplace(0L, algebra::kIdentity);
}

void FrameCache::prepare(double x_min, double x_max) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || x_min > x_max) {
        raise(errc::invalid_argument, "invalid preparation range");
    }
    const long lo = static_cast<long>(std::floor(x_min / dx_));
    const long hi = static_cast<long>(std::ceil(x_max / dx_));
    auto rhs = [this](double t) { return l_matrix(ctx_, t); };
    for (long i = checkpoints_.rbegin()->first; i < hi; ++i) {
        checkpoints_.emplace(i + 1, integrate_linear(rhs, checkpoints_.at(i),
                                                     static_cast<double>(i) * dx_,
                                                     static_cast<double>(i + 1) * dx_));
    }
    for (long i = checkpoints_.begin()->first; i > lo; --i) {
        checkpoints_.emplace(i - 1, integrate_linear(rhs, checkpoints_.at(i),
                                                     static_cast<double>(i) * dx_,
                                                     static_cast<double>(i - 1) * dx_));
    }
}

Mat2 FrameCache::propagator(double x) const {
    if (!std::isfinite(x)) raise(errc::invalid_argument, "x must be finite");
    const long lo = checkpoints_.begin()->first;
    const long hi = checkpoints_.rbegin()->first;
    const long key = std::clamp(std::lround(x / dx_), lo, hi);
    return continue_propagator(checkpoints_.at(key), static_cast<double>(key) * dx_, x);
}

Mat2 FrameCache::continue_propagator(const Mat2& base, double x_from, double x_to) const {
    return integrate_linear([this](double t) { return l_matrix(ctx_, t); },
                            base, x_from, x_to);
}

Mat2 FrameCache::base_exponential(double y) const {
    return scaled_exponential(m_origin_, ctx_.sqrt_g, y);
}

Mat2 FrameCache::phi(double x, double y, PathOrder order) const {
    const Mat2 p = propagator(x);
    if (order == PathOrder::y_then_x) {
        return p * base_exponential(y);
    }
    return scaled_exponential(m_matrix(ctx_, x), ctx_.sqrt_g, y) * p;
}

DetDrift FrameCache::det_drift(double x, double y) const {
    return {std::abs(propagator(x).det() - Scalar(1.0)),
            std::abs(base_exponential(y).det() - Scalar(1.0))};
}

LspResidual lsp_residual(const FrameCache& cache, double x, double y, double h) {
    const auto& ctx = cache.context();
    // Anchor the whole x-stencil on one propagator value so the table/
    // integration error is common mode and cancels in the differences.
    const double anchor = x - 2.0 * h;
    const Mat2 base = cache.propagator(anchor);
    const Mat2 ey = cache.base_exponential(y);
    auto phi_of_x = [&](double t) {
        return cache.continue_propagator(base, anchor, t) * ey;
    };
    const Mat2 phi0 = phi_of_x(x);
    const Mat2 dx = fd::derivative(phi_of_x, x, h);
    const double rx = algebra::max_abs(dx - l_matrix(ctx, x) * phi0);

    const Mat2 p0 = cache.continue_propagator(base, anchor, x);
    auto phi_of_y = [&](double t) { return p0 * cache.base_exponential(t); };
    const Mat2 dy = fd::derivative(phi_of_y, y, h);
    const double ry = algebra::max_abs(dy - m_matrix(ctx, x) * phi0);
    return {rx, ry};
}

double path_disagreement(const FrameCache& cache, double x, double y) {
    return algebra::max_abs(cache.phi(x, y, PathOrder::y_then_x)
                            - cache.phi(x, y, PathOrder::x_then_y));
}

// ------------------------------------------------------------- scalars ----

Scalar half_reciprocal_antiderivative(const laxpair::SpectralContext& ctx, double x) {
    if (!std::isfinite(x)) raise(errc::invalid_argument, "x must be finite");
    const double lambda = ctx.lambda;
    const double lo = std::min(0.0, x);
    const double hi = std::max(0.0, x);

    // Deterministic pre-scan: the integrand 1/(2 (u + lambda)) has a
    // non-integrable pole wherever u + lambda vanishes.
    if (hi > lo) {
        constexpr int kScan = 1024;
        double min_abs = std::numeric_limits<double>::infinity();
        double first_sign = 0.0;
        for (int i = 0; i <= kScan; ++i) {
            const double t = lo + (hi - lo) * static_cast<double>(i) / kScan;
            const double w = model::jet(ctx.model, t).u + lambda;
            min_abs = std::min(min_abs, std::abs(w));
            const double sign = (w > 0.0) ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
            if (first_sign == 0.0) {
                first_sign = sign;
            } else if (sign != 0.0 && sign != first_sign) {
                raise(errc::pole_on_path, "u + lambda changes sign on the integration range");
            }
        }
        if (min_abs < 1e-3 * (1.0 + std::abs(lambda))) {
            raise(errc::pole_on_path, "u + lambda nearly vanishes on the integration range");
        }
    }

    return special::antiderivative_along_x(
        [&](double t) { return Scalar(0.5 / (model::jet(ctx.model, t).u + lambda), 0.0); },
        0.0, x);
}

Scalar psi_exponent(const laxpair::SpectralContext& ctx, double x, double y) {
    return ctx.sqrt_g * (Scalar(y) + half_reciprocal_antiderivative(ctx, x));
}

std::pair<Scalar, Scalar> psi_pair(const laxpair::SpectralContext& ctx, double x, double y) {
    const Scalar e = psi_exponent(ctx, x, y);
    return {std::exp(e), std::exp(-e)};
}

const char* psi_variant_name(PsiVariant v) {
    switch (v) {
        case PsiVariant::quarter_log_reduced: return "quarter-log-reduced";
        case PsiVariant::quarter_log: return "quarter-log";
        case PsiVariant::eighth_log: return "eighth-log";
    }
    raise(errc::invalid_argument, "unknown exponent variant");
}

std::optional<PsiVariant> psi_variant_from_name(const std::string& name) {
    if (name == "quarter-log-reduced") return PsiVariant::quarter_log_reduced;
    if (name == "quarter-log") return PsiVariant::quarter_log;
    if (name == "eighth-log") return PsiVariant::eighth_log;
    return std::nullopt;
}

Scalar sqrtg_antiderivative_closed(const laxpair::SpectralContext& ctx, double x,
                                   PsiVariant variant) {
    const auto& spec = ctx.model;
    if (spec.kind == model::Kind::custom) {
        raise(errc::invalid_argument, "closed exponent requires the quartic potential");
    }
    if (!(spec.k1 > 0.0) || spec.k2 > 0.0) {
        raise(errc::domain_error, "closed exponent requires k1 > 0 and k2 <= 0");
    }
    if (!(ctx.g > 0.0)) {
        raise(errc::domain_error, "closed exponent requires a positive discriminant");
    }
    if (ctx.lambda == 0.0) {
        raise(errc::domain_error, "closed exponent is undefined at lambda = 0");
    }
    if (!std::isfinite(x)) raise(errc::invalid_argument, "x must be finite");

    // The substitution t -> u(t) behind the closed form needs u monotone on
    // [0, x]; refuse ranges over which u_x turns.
    {
        const double lo = std::min(0.0, x);
        const double hi = std::max(0.0, x);
        constexpr int kScan = 256;
        int sign0 = 0;
        for (int i = 0; i <= kScan; ++i) {
            const double t = lo + (hi - lo) * static_cast<double>(i) / kScan;
            const double ux = model::jet(spec, t).ux;
            if (std::abs(ux) < 1e-9) {
                raise(errc::turning_point, "u_x vanishes on the closed-exponent range");
            }
            const int s = (ux > 0.0) ? 1 : -1;
            if (sign0 == 0) {
                sign0 = s;
            } else if (s != sign0) {
                raise(errc::turning_point, "u_x changes sign on the closed-exponent range");
            }
        }
    }

    const double lambda = ctx.lambda;
    const double kappa = std::sqrt(-spec.k2 / spec.k1);
    const double alpha2 = 1.0 / (lambda * lambda);
    const double u = model::jet(spec, x).u;
    const double u0 = model::jet(spec, 0.0).u;
    const double eps = static_cast<double>(spec.epsilon);
    const Scalar sg = ctx.sqrt_g;

    const double pi_weight = (variant == PsiVariant::eighth_log) ? 0.5 : 1.0;
    const double log_weight = (variant == PsiVariant::eighth_log) ? 0.125 : 0.25;
    const double n_u2 = (variant == PsiVariant::quarter_log_reduced)
        ? -2.0 * spec.k2 * lambda * lambda
        : (spec.k2 - spec.k1) - 2.0 * spec.k2 * lambda * lambda;

    auto n_of = [&](double uu) {
        return n_u2 * uu * uu + (spec.k2 - spec.k1) * lambda * lambda + 2.0 * spec.k1;
    };
    auto log_r = [&](double uu) {
        const double fu = model::f_of(spec, uu);
        if (fu < 0.0) {
            raise(errc::domain_error, "closed exponent left the real branch f(u) >= 0");
        }
        const Scalar root = 2.0 * sg * std::sqrt(fu);
        const double n = n_of(uu);
        const Scalar den = root - Scalar(n);
        if (std::abs(den) < 1e-12 * (std::abs(root) + std::abs(n))) {
            raise(errc::singular_denominator, "logarithm argument degenerates");
        }
        return std::log((root + Scalar(n)) / den);
    };

    const double pi_term = special::elliptic_pi_incomplete(u, alpha2, kappa)
                         - special::elliptic_pi_incomplete(u0, alpha2, kappa);
    return sg * Scalar(eps * pi_weight / (lambda * std::sqrt(spec.k1)) * pi_term)
         - Scalar(eps * log_weight) * (log_r(u) - log_r(u0));
}

Scalar psi_exponent_closed(const laxpair::SpectralContext& ctx, double x, double y,
                           PsiVariant variant) {
    return sqrtg_antiderivative_closed(ctx, x, variant) + ctx.sqrt_g * Scalar(y);
}

// ---------------------------------------------------------- assemblies ----

const char* closed_variant_name(ClosedVariant v) {
    switch (v) {
        case ClosedVariant::symmetric_mixed: return "symmetric-mixed";
        case ClosedVariant::rearranged_mixed: return "rearranged-mixed";
        case ClosedVariant::eigen_basis: return "eigen-basis";
    }
    raise(errc::invalid_argument, "unknown assembly variant");
}

std::optional<ClosedVariant> closed_variant_from_name(const std::string& name) {
    if (name == "symmetric-mixed") return ClosedVariant::symmetric_mixed;
    if (name == "rearranged-mixed") return ClosedVariant::rearranged_mixed;
    if (name == "eigen-basis") return ClosedVariant::eigen_basis;
    return std::nullopt;
}

Mat2 phi_closed(const laxpair::SpectralContext& ctx, double x, double y,
                ClosedVariant variant) {
    if (std::abs(ctx.g) < 1e-12) {
        raise(errc::degenerate_spectrum,
              "closed assemblies divide by sqrt(g); the spectrum is degenerate");
    }
    const auto p = model::jet(ctx.model, x);
    const Scalar sg = ctx.sqrt_g;
    const Scalar w{p.u + ctx.lambda};
    if (std::abs(w) < 1e-12 * (1.0 + std::abs(ctx.lambda))) {
        raise(errc::singular_denominator, "assembly is singular on u + lambda = 0");
    }
    const Scalar sw = std::sqrt(w);
    const auto [pp, pm] = psi_pair(ctx, x, y);

    const Scalar f1p = (sg + Scalar(p.ux)) * pp / sw;
    const Scalar f1m = (-sg + Scalar(p.ux)) * pm / sw;
    const Scalar f2p = sw * pp;
    const Scalar f2m = sw * pm;
    const double r2 = 1.0 / std::sqrt(2.0);
    const Scalar two_sg = 2.0 * sg;

    switch (variant) {
        case ClosedVariant::symmetric_mixed:
            return {(f1p + f1m) * r2, -(f1p - f1m) / two_sg,
                    (f2p + f2m) * r2, (f2p - f2m) / two_sg};
        case ClosedVariant::eigen_basis:
            return {(f1p + f1m) * r2, -(f1p - f1m) / two_sg,
                    (f2p + f2m) * r2, -(f2p - f2m) / two_sg};
        case ClosedVariant::rearranged_mixed:
            return {((sg - Scalar(p.ux)) * pp - (sg + Scalar(p.ux)) * pm) / (2.0 * sw),
                    ((sg + Scalar(p.ux)) * pm - (sg - Scalar(p.ux)) * pp) / (two_sg * sw),
                    sw * (pp + pm) * 0.5,
                    sw * (pm - pp) / two_sg};
    }
    raise(errc::invalid_argument, "unknown assembly variant");
}

LspResidual lsp_residual_closed(const laxpair::SpectralContext& ctx, ClosedVariant variant,
                                double x, double y, double h) {
    const Mat2 phi0 = phi_closed(ctx, x, y, variant);
    const Mat2 dx = fd::derivative(
        [&](double t) { return phi_closed(ctx, t, y, variant); }, x, h);
    const Mat2 dy = fd::derivative(
        [&](double t) { return phi_closed(ctx, x, t, variant); }, y, h);
    return {algebra::max_abs(dx - l_matrix(ctx, x) * phi0),
            algebra::max_abs(dy - m_matrix(ctx, x) * phi0)};
}

double closed_form_match(const FrameCache& cache, ClosedVariant variant,
                         double x, double y) {
    const auto& ctx = cache.context();
    const Mat2 origin = phi_closed(ctx, 0.0, 0.0, variant);
    const Mat2 value = phi_closed(ctx, x, y, variant);
    return algebra::max_abs(cache.phi(x, y) - value * algebra::inverse(origin));
}

// ------------------------------------------------- spectral derivative ----

namespace {

double validated_step(double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        raise(errc::invalid_argument, "derivative step must be positive and finite");
    }
    return h;
}

} // namespace

LambdaDerivative::LambdaDerivative(const model::ModelSpec& spec, double lambda,
                                   std::optional<laxpair::FormKind> form, double h)
    : h_(validated_step(h)),
      outer_minus_(laxpair::make_context(spec, lambda - h, form)),
      inner_minus_(laxpair::make_context(spec, lambda - 0.5 * h, form)),
      inner_plus_(laxpair::make_context(spec, lambda + 0.5 * h, form)),
      outer_plus_(laxpair::make_context(spec, lambda + h, form)) {
    const double g_lo = outer_minus_.context().g;
    const double g_hi = outer_plus_.context().g;
    if (g_lo == 0.0 || g_hi == 0.0 || (g_lo < 0.0) != (g_hi < 0.0)) {
        raise(errc::branch_crossing,
              "discriminant changes sign inside the spectral stencil");
    }
}

void LambdaDerivative::prepare(double x_min, double x_max) {
    outer_minus_.prepare(x_min, x_max);
    inner_minus_.prepare(x_min, x_max);
    inner_plus_.prepare(x_min, x_max);
    outer_plus_.prepare(x_min, x_max);
}

Mat2 LambdaDerivative::phi_lambda(double x, double y) const {
    auto quotient = [&](const FrameCache& plus, const FrameCache& minus, double step) {
        return (plus.phi(x, y) - minus.phi(x, y)) * (0.5 / step);
    };
    const Mat2 coarse = quotient(outer_plus_, outer_minus_, h_);
    const Mat2 fine = quotient(inner_plus_, inner_minus_, 0.5 * h_);
    return (1.0 / 3.0) * (4.0 * fine - coarse);
}

} // namespace solsurf::wavefunction
