#include "validation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>

#include "errors.hpp"
#include "geometry.hpp"
#include "immersion.hpp"
#include "laxpair.hpp"
#include "model.hpp"
#include "special.hpp"
#include "wavefunction.hpp"

namespace solsurf::validation {

namespace {

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
    return xs;
}

CheckResult guarded(const std::string& name, double tolerance,
                    const std::function<CheckResult()>& body) {
    try {
        return body();
    } catch (const Error& err) {
        CheckResult r;
        r.name = name;
        r.pass = false;
        r.worst = std::numeric_limits<double>::quiet_NaN();
        r.tolerance = tolerance;
        r.detail = std::string("error: ") + err.what();
        return r;
    }
}

CheckResult residual_result(const std::string& name, double worst, double tolerance,
                            std::string detail) {
    CheckResult r;
    r.name = name;
    r.worst = worst;
    r.tolerance = tolerance;
    r.pass = std::isfinite(worst) && worst < tolerance;
    r.detail = std::move(detail);
    return r;
}

// Longest x-interval on which the model solution is monotone (the closed
// antiderivatives substitute t -> u(t) and need it); empty when unknown.
std::pair<double, double> monotone_interval(const model::ModelSpec& spec) {
    if (spec.kind == model::Kind::custom) return {0.0, 0.0};
    const double k = std::min(spec.k, 0.999);
    const double quarter = special::elliptic_k(k);
    switch (spec.kind) {
        case model::Kind::sn: return {-0.9 * quarter, 0.9 * quarter};
        case model::Kind::cn: return {0.1 * quarter, 1.8 * quarter};
        case model::Kind::dn: return {0.1 * quarter, 0.9 * quarter};
        default: return {0.0, 0.0};
    }
}

CheckResult check_first_integral(const surfio::GridConfig& config) {
    double worst = 0.0;
    for (double x : linspace(config.x_min, config.x_max, 64))
        worst = std::max(worst, model::first_integral_residual(config.model, x));
    return residual_result("model.first-integral", worst, 1e-10,
                           "max |u_x^2 - f(u)| over 64 x-samples");
}

CheckResult check_determining(const surfio::GridConfig& config) {
    double worst = 0.0;
    for (double x : linspace(config.x_min + 0.05, config.x_max - 0.05, 16))
        worst = std::max(worst, laxpair::determining_residual(config.model, x));
    return residual_result("model.determining", worst, 1e-5,
                           "max |D_x u_xx - f''(u) u_x / 2|, differenced at h = 1e-3");
}

CheckResult check_compatibility(const surfio::GridConfig& config) {
    double worst = 0.0;
    int contexts = 0;
    for (double dl : {0.0, -0.8, -0.35, 0.35, 0.8}) {
        laxpair::SpectralContext ctx;
        try {
            ctx = laxpair::make_context(config.model, config.lambda + dl, config.form);
        } catch (const Error&) {
            continue;  // offset landed on an invalid spectral point
        }
        ++contexts;
        for (double x : linspace(config.x_min, config.x_max, 64)) {
            try {
                const auto p = model::jet(config.model, x);
                worst = std::max(worst, laxpair::compatibility_residual(ctx, p));
            } catch (const Error&) {
                // rational realization poles are legal skip points
            }
        }
    }
    return residual_result("lax.compatibility", worst, 1e-9,
                           fmt("max |D_x M + [M, L]| over 64 x-samples x %d spectral points",
                               contexts));
}

CheckResult check_discriminant(const surfio::GridConfig& config) {
    double worst = 0.0;
    for (double dl : {0.0, -0.8, -0.35, 0.35, 0.8}) {
        laxpair::SpectralContext ctx;
        try {
            ctx = laxpair::make_context(config.model, config.lambda + dl, config.form);
        } catch (const Error&) {
            continue;
        }
        for (double x : linspace(config.x_min, config.x_max, 32)) {
            try {
                const auto p = model::jet(config.model, x);
                const auto det = laxpair::build_M(ctx, p).det();
                worst = std::max(worst, std::abs(det + algebra::Scalar(ctx.g)));
            } catch (const Error&) {
            }
        }
    }
    return residual_result("lax.discriminant", worst, 1e-12,
                           "max |det M + g(lambda)| over the compatibility sampling");
}

CheckResult check_frame(const surfio::GridConfig& config, const char* which) {
    const auto ctx = laxpair::make_context(config.model, config.lambda, config.form);
    wavefunction::FrameCache cache(ctx);
    cache.prepare(config.x_min - 0.1, config.x_max + 0.1);
    double worst = 0.0;
    for (double x : linspace(config.x_min, config.x_max, 5)) {
        for (double y : linspace(config.y_min, config.y_max, 5)) {
            if (std::string(which) == "lsp") {
                const auto r = wavefunction::lsp_residual(cache, x, y);
                worst = std::max({worst, r.x_part, r.y_part});
            } else if (std::string(which) == "det") {
                const auto d = cache.det_drift(x, y);
                worst = std::max({worst, d.x_leg, d.y_leg});
            } else {
                worst = std::max(worst, wavefunction::path_disagreement(cache, x, y));
            }
        }
    }
    return residual_result(std::string("frame.") + which, worst, 1e-8,
                           "5x5 samples over the configured ranges");
}

CheckResult check_closed_variants(const surfio::GridConfig& config) {
    const auto ctx = laxpair::make_context(config.model, config.lambda, config.form);
    const auto [lo, hi] = monotone_interval(config.model);
    if (lo == hi)
        return residual_result("frame.closed-variant", 0.0, 1e-6,
                               "skipped: no tabulated monotone branch for this model");
    double best = std::numeric_limits<double>::infinity();
    std::string detail;
    for (auto variant : {wavefunction::ClosedVariant::symmetric_mixed,
                         wavefunction::ClosedVariant::rearranged_mixed,
                         wavefunction::ClosedVariant::eigen_basis}) {
        double worst = 0.0;
        int used = 0;
        for (double x : linspace(lo + 0.05, hi - 0.05, 4)) {
            for (double y : {-1.0, 0.5, 2.0}) {
                try {
                    const auto r = wavefunction::lsp_residual_closed(ctx, variant, x, y);
                    worst = std::max({worst, r.x_part, r.y_part});
                    ++used;
                } catch (const Error&) {
                }
            }
        }
        if (used == 0) worst = std::numeric_limits<double>::quiet_NaN();
        detail += fmt("%s%s: %.3g (%d pts)", detail.empty() ? "" : "; ",
                      wavefunction::closed_variant_name(variant), worst, used);
        if (used > 0) best = std::min(best, worst);
    }
    if (!std::isfinite(best)) {
        CheckResult r = residual_result("frame.closed-variant", 0.0, 1e-6, detail);
        r.detail = "skipped: assemblies unavailable on the sampled branch; " + detail;
        return r;
    }
    CheckResult r = residual_result("frame.closed-variant", best, 1e-6, detail);
    r.detail = "best assembly vs linear problem; " + detail;
    return r;
}

CheckResult check_admissibility(const surfio::GridConfig& config) {
    const auto ctx = laxpair::make_context(config.model, config.lambda, config.form);
    double worst = 0.0;
    int used = 0;
    for (double x : linspace(config.x_min, config.x_max, 32)) {
        for (double y : {0.0, 1.3}) {
            try {
                const auto p = model::jet(config.model, x);
                const auto pair = immersion::combined_tangents(ctx, config.spec, p, y);
                worst = std::max(worst, immersion::ab_condition_residual(ctx, pair));
                for (std::size_t t = 0; t < config.spec.alpha.size(); ++t) {
                    if (config.spec.alpha[t] == 0.0) continue;
                    const auto single =
                        immersion::term_tangents(ctx, immersion::kTermOrder[t], p, y,
                                                 config.spec.a_lambda, config.spec.gauge);
                    worst = std::max(worst, immersion::ab_condition_residual(ctx, single));
                }
                ++used;
            } catch (const Error&) {
            }
        }
    }
    return residual_result("surface.admissibility", worst, 1e-9,
                           fmt("combined + active single terms at %d jet points", used));
}

CheckResult check_tangent_consistency(const surfio::GridConfig& config) {
    immersion::ImmersionField field(config.model, config.lambda, config.spec, config.form);
    const double lo = std::max(config.x_min, -2.0), hi = std::min(config.x_max, 2.0);
    field.prepare(lo - 0.1, hi + 0.1);
    double worst = 0.0;
    int used = 0;
    for (double x : linspace(lo + 0.1, hi - 0.1, 4)) {
        for (double y : {-0.8, 0.6}) {
            try {
                const auto [ex, ey] = immersion::tangent_consistency(field, x, y);
                worst = std::max({worst, ex, ey});
                ++used;
            } catch (const Error&) {
            }
        }
    }
    return residual_result("surface.tangent-consistency", worst, 1e-5,
                           fmt("central differences of F at h = 1e-3, %d points", used));
}

CheckResult check_null_direction(const surfio::GridConfig& config) {
    const auto ctx = laxpair::make_context(config.model, config.lambda, config.form);
    double worst = 0.0;
    for (double x : linspace(config.x_min, config.x_max, 16)) {
        try {
            const auto p = model::jet(config.model, x);
            for (auto term : {immersion::Term::spectral, immersion::Term::symmetry}) {
                const auto pair = immersion::term_tangents(ctx, term, p);
                const auto b = algebra::killing_form(pair.a, pair.a);
                worst = std::max(worst, std::abs(b));
            }
        } catch (const Error&) {
        }
    }
    return residual_result("surface.null-direction", worst, 1e-12,
                           "B(D_x F, D_x F) for the spectral and symmetry surfaces");
}

CheckResult check_normal_anchor(const surfio::GridConfig& config) {
    immersion::ImmersionSpec st;
    st.alpha = {0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
    const immersion::ImmersionField field(config.model, config.lambda, st, config.form);
    double worst = 0.0;
    int used = 0;
    for (double x : linspace(config.x_min, config.x_max, 8)) {
        try {
            const auto forms =
                geometry::forms_at(field, x, 0.0, geometry::Metric::killing);
            const auto n = algebra::decompose(forms.normal);
            worst = std::max({worst, std::abs(n.c2), std::abs(n.c3)});
            ++used;
        } catch (const Error&) {
        }
    }
    return residual_result("surface.normal-anchor", worst, 1e-10,
                           fmt("off-axis components of the spectral-surface normal, %d points",
                               used));
}

CheckResult check_jacobi(const surfio::GridConfig& config) {
    const double k = std::clamp(config.model.k, 0.0, 1.0);
    double worst = 0.0;
    for (double x : linspace(-10.0, 10.0, 2000)) {
        const auto t = special::jacobi(x, k);
        worst = std::max(worst, std::abs(t.sn * t.sn + t.cn * t.cn - 1.0));
        worst = std::max(worst, std::abs(t.dn * t.dn - 1.0 + k * k * t.sn * t.sn));
    }
    for (double x : linspace(-6.0, 6.0, 500)) {
        worst = std::max(worst, std::abs(special::jacobi(x, 0.0).sn - std::sin(x)));
        worst = std::max(worst, std::abs(special::jacobi(x, 1.0).sn - std::tanh(x)));
    }
    return residual_result("special.jacobi", worst, 1e-12,
                           fmt("Pythagorean and limit identities, k = %g plus k = 0, 1", k));
}

CheckResult check_third_kind(const surfio::GridConfig&) {
    double worst = 0.0;
    int used = 0;
    for (double x : {0.15, 0.45, 0.75, 0.95}) {
        for (double a2 : {-2.0, -0.5, 0.3, 0.9}) {
            for (double k : {0.0, 0.5, 0.9}) {
                if (a2 * x * x >= 0.98) continue;
                const double closed = special::elliptic_pi_incomplete(x, a2, k);
                const auto quad = special::antiderivative_along_x(
                    [a2, k](double t) {
                        return std::complex<double>(
                            1.0 / ((1.0 - a2 * t * t) * std::sqrt(1.0 - t * t) *
                                   std::sqrt(1.0 - k * k * t * t)));
                    },
                    0.0, x, 1e-12);
                worst = std::max(worst, std::abs(closed - quad.real()));
                ++used;
            }
        }
    }
    return residual_result("special.third-kind", worst, 1e-10,
                           fmt("third-kind integral vs adaptive quadrature, %d cases", used));
}

CheckResult check_convergence(const surfio::GridConfig& config) {
    immersion::ImmersionField field(config.model, config.lambda, config.spec, config.form);
    const double lo = std::max(config.x_min, -2.0), hi = std::min(config.x_max, 2.0);
    field.prepare(lo - 0.1, hi + 0.1);
    const double span = hi - lo;
    CheckResult r;
    r.name = "geometry.convergence";
    r.tolerance = 2.0;
    for (double frac : {0.61, 0.37, 0.82}) {
        const double x = lo + frac * span;
        try {
            const double k8 = geometry::curvatures(field, x, 0.3, config.metric, 8e-3).K;
            const double k4 = geometry::curvatures(field, x, 0.3, config.metric, 4e-3).K;
            const double k2 = geometry::curvatures(field, x, 0.3, config.metric, 2e-3).K;
            if (!std::isfinite(k8) || !std::isfinite(k4) || !std::isfinite(k2)) continue;
            const double d1 = k8 - k4, d2 = k4 - k2;
            if (std::abs(d1) < 1e-11 && std::abs(d2) < 1e-11) {
                r.pass = true;
                r.worst = 2.0;
                r.detail = fmt("differences below noise floor at x = %.3f", x);
                return r;
            }
            const double order = std::log2(std::abs(d1 / d2));
            r.worst = order;
            r.pass = order >= 1.6;
            r.detail = fmt("measured order %.2f from K(8e-3,4e-3,2e-3) at x = %.3f "
                           "(target >= 2, pass above 1.6)",
                           order, x);
            return r;
        } catch (const Error&) {
            continue;  // degenerate sample point; try the next candidate
        }
    }
    r.pass = false;
    r.worst = std::numeric_limits<double>::quiet_NaN();
    r.detail = "no non-degenerate sample point found";
    return r;
}

CheckResult check_determinism(const surfio::GridConfig& config) {
    surfio::GridConfig coarse = config;
    coarse.nx = 9;
    coarse.ny = 7;
    const auto g1 = surfio::sample_grid(coarse);
    const auto g2 = surfio::sample_grid(coarse);
    int mismatches = 0;
    for (auto fmt_id : {surfio::Format::obj, surfio::Format::csv, surfio::Format::json})
        if (surfio::render(g1, fmt_id) != surfio::render(g2, fmt_id)) ++mismatches;
    CheckResult r = residual_result("export.determinism", mismatches, 0.5,
                                    "two samplings of a 9x7 grid, bytes compared per format");
    return r;
}

} // namespace

std::vector<CheckResult> run_validation(const surfio::GridConfig& config) {
    std::vector<CheckResult> out;
    auto add = [&](const std::string& name, double tol,
                   const std::function<CheckResult()>& body) {
        out.push_back(guarded(name, tol, body));
    };
    add("model.first-integral", 1e-10, [&] { return check_first_integral(config); });
    add("model.determining", 1e-5, [&] { return check_determining(config); });
    add("lax.compatibility", 1e-9, [&] { return check_compatibility(config); });
    add("lax.discriminant", 1e-12, [&] { return check_discriminant(config); });
    add("frame.lsp", 1e-8, [&] { return check_frame(config, "lsp"); });
    add("frame.det", 1e-8, [&] { return check_frame(config, "det"); });
    add("frame.path-order", 1e-8, [&] { return check_frame(config, "path-order"); });
    add("frame.closed-variant", 1e-6, [&] { return check_closed_variants(config); });
    add("surface.admissibility", 1e-9, [&] { return check_admissibility(config); });
    add("surface.tangent-consistency", 1e-5,
        [&] { return check_tangent_consistency(config); });
    add("surface.null-direction", 1e-12, [&] { return check_null_direction(config); });
    add("surface.normal-anchor", 1e-10, [&] { return check_normal_anchor(config); });
    add("special.jacobi", 1e-12, [&] { return check_jacobi(config); });
    add("special.third-kind", 1e-10, [&] { return check_third_kind(config); });
    add("geometry.convergence", 2.0, [&] { return check_convergence(config); });
    add("export.determinism", 0.5, [&] { return check_determinism(config); });
    return out;
}

std::string validation_text(const surfio::GridConfig& config,
                            const std::vector<CheckResult>& results) {
    std::string out = fmt("validation: model=%s k=%g lambda=%g form=%s metric=%s\n",
                          model::kind_name(config.model.kind), config.model.k, config.lambda,
                          config.form ? laxpair::form_name(*config.form) : "default",
                          geometry::metric_name(config.metric));
    int failures = 0;
    for (const auto& r : results) {
        if (!r.pass) ++failures;
        out += fmt("[%s] %-28s worst=%-12.4g tol=%-8.3g %s\n", r.pass ? "PASS" : "FAIL",
                   r.name.c_str(), r.worst, r.tolerance, r.detail.c_str());
    }
    out += fmt("%d/%zu checks passed\n", static_cast<int>(results.size()) - failures,
               results.size());
    try {
        const auto rep = geometry::comparison_report(config.model, config.lambda,
                                                     {0.0, 0.8, 1.5});
        out += "\n";
        out += rep.human_text();
    } catch (const Error& err) {
        out += fmt("\nclosed-form comparison skipped: %s\n", err.what());
    }
    return out;
}

std::string wavefunction_text(const surfio::GridConfig& config,
                              std::optional<wavefunction::PsiVariant> phase_variant) {
    const auto ctx = laxpair::make_context(config.model, config.lambda, config.form);
    wavefunction::FrameCache cache(ctx);
    cache.prepare(config.x_min - 0.1, config.x_max + 0.1);

    std::string out = fmt("frame diagnostics: model=%s k=%g lambda=%g g=%.12g (%s regime)\n",
                          model::kind_name(config.model.kind), config.model.k, config.lambda,
                          ctx.g, ctx.g < 0.0 ? "periodic" : (ctx.g > 0.0 ? "exponential"
                                                                         : "degenerate"));
    out += fmt("%10s %10s %12s %12s %12s %12s\n", "x", "y", "lsp_x", "lsp_y", "det_drift",
               "path_diff");
    for (double x : linspace(config.x_min, config.x_max, 4)) {
        for (double y : linspace(config.y_min, config.y_max, 3)) {
            const auto r = wavefunction::lsp_residual(cache, x, y);
            const auto d = cache.det_drift(x, y);
            const double p = wavefunction::path_disagreement(cache, x, y);
            out += fmt("%10.4f %10.4f %12.3e %12.3e %12.3e %12.3e\n", x, y, r.x_part,
                       r.y_part, std::max(d.x_leg, d.y_leg), p);
        }
    }

    const auto [lo, hi] = monotone_interval(config.model);
    if (lo == hi) {
        out += "closed-form assemblies skipped: no tabulated monotone branch\n";
        return out;
    }
    out += "closed-form assemblies on the monotone branch (max over samples):\n";
    for (auto variant : {wavefunction::ClosedVariant::symmetric_mixed,
                         wavefunction::ClosedVariant::rearranged_mixed,
                         wavefunction::ClosedVariant::eigen_basis}) {
        double lsp = 0.0, match = 0.0;
        int used = 0;
        for (double x : linspace(lo + 0.05, hi - 0.05, 4)) {
            for (double y : {-1.0, 0.5, 2.0}) {
                try {
                    const auto r = wavefunction::lsp_residual_closed(ctx, variant, x, y);
                    lsp = std::max({lsp, r.x_part, r.y_part});
                    match = std::max(match,
                                     wavefunction::closed_form_match(cache, variant, x, y));
                    ++used;
                } catch (const Error&) {
                }
            }
        }
        out += fmt("  %-18s lsp=%-12.4g frame-match=%-12.4g (%d pts)\n",
                   wavefunction::closed_variant_name(variant), lsp, match, used);
    }

    const bool phase_shape = config.model.k1 > 0.0 && config.model.k2 <= 0.0 && ctx.g > 0.0;
    if (!phase_shape) {
        out += "closed phase antiderivative skipped: needs k1 > 0 >= k2 and g > 0\n";
        return out;
    }
    out += "closed phase sqrt(g) I(x) vs quadrature (max over samples):\n";
    for (auto variant : {wavefunction::PsiVariant::quarter_log_reduced,
                         wavefunction::PsiVariant::quarter_log,
                         wavefunction::PsiVariant::eighth_log}) {
        if (phase_variant && variant != *phase_variant) continue;
        double worst = 0.0;
        int used = 0;
        for (double x : linspace(lo + 0.05, hi - 0.05, 5)) {
            try {
                const auto closed = wavefunction::sqrtg_antiderivative_closed(ctx, x, variant);
                const auto quad = ctx.sqrt_g * wavefunction::half_reciprocal_antiderivative(
                                                   ctx, x);
                worst = std::max(worst, std::abs(closed - quad));
                ++used;
            } catch (const Error&) {
            }
        }
        out += fmt("  %-20s dev=%-12.4g (%d pts)\n", wavefunction::psi_variant_name(variant),
                   worst, used);
    }
    return out;
}

} // namespace solsurf::validation
