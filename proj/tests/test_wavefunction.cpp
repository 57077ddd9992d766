#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fd.hpp"
#include "wavefunction.hpp"

using namespace solsurf;
using algebra::Mat2;
using algebra::Scalar;
using model::Kind;
using model::ModelSpec;
using wavefunction::ClosedVariant;
using wavefunction::FrameCache;
using wavefunction::PathOrder;
using wavefunction::PsiVariant;

namespace {

double dist(const Mat2& x, const Mat2& y) { return algebra::max_abs(x - y); }

FrameCache prepared_cache(const ModelSpec& spec, double lambda, double x0 = -8.0,
                          double x1 = 8.0) {
    FrameCache cache(laxpair::make_context(spec, lambda));
    cache.prepare(x0, x1);
    return cache;
}

} // namespace

TEST_CASE("adaptive integrator reproduces the rotation group") {
    const Mat2 generator{0.0, 1.0, -1.0, 0.0};
    const double t = 2.0;
    const Mat2 got = wavefunction::integrate_linear(
        [&](double) { return generator; }, algebra::kIdentity, 0.0, t);
    const Mat2 expected{std::cos(t), std::sin(t), -std::sin(t), std::cos(t)};
    CHECK(dist(got, expected) < 1e-12);
    // Reversed direction returns to the start.
    const Mat2 back = wavefunction::integrate_linear(
        [&](double) { return generator; }, got, t, 0.0);
    CHECK(dist(back, algebra::kIdentity) < 1e-12);
}

TEST_CASE("closed-form exponential agrees with integrating the y-leg") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    for (double lambda : {0.5, 1.2}) {
        const auto ctx = laxpair::make_context(spec, lambda);
        const Mat2 m = laxpair::build_M(ctx, model::jet(spec, 0.7));
        for (double y : {-2.0, 0.4, 3.0}) {
            const Mat2 closed = wavefunction::scaled_exponential(m, ctx.sqrt_g, y);
            const Mat2 integrated = wavefunction::integrate_linear(
                [&](double) { return m; }, algebra::kIdentity, 0.0, y);
            CHECK(dist(closed, integrated) < 1e-11);
            CHECK(std::abs(closed.det() - Scalar(1.0)) < 1e-13);
        }
    }
}

TEST_CASE("exponential handles the degenerate (nilpotent-direction) spectrum") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto ctx = laxpair::make_context(spec, 1.0); // g(1) = 0
    CHECK(std::abs(ctx.g) < 1e-15);
    const Mat2 m = laxpair::build_M(ctx, model::jet(spec, 0.3));
    const double y = 1.7;
    const Mat2 closed = wavefunction::scaled_exponential(m, ctx.sqrt_g, y);
    // With both eigenvalues zero, exp(y M) = I + y M exactly.
    CHECK(dist(closed, algebra::kIdentity + y * m) < 1e-12);
}

TEST_CASE("frame is the identity at the origin and unimodular everywhere") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto cache = prepared_cache(spec, 0.5);
    CHECK(dist(cache.phi(0.0, 0.0), algebra::kIdentity) < 1e-14);
    for (double x : {-8.0, -3.1, 0.6, 4.4, 8.0}) {
        for (double y : {-8.0, -1.2, 2.5, 8.0}) {
            const auto drift = cache.det_drift(x, y);
            CHECK(drift.x_leg < 1e-10);
            // cosh^2 - sinh^2 is 1 up to rounding at the scale of cosh^2;
            // at |y| = 8 that scale is ~2e5, so the observable floor is
            // ~1e-11 even though the leg is exact by construction.
            CHECK(drift.y_leg < (std::abs(y) > 4.0 ? 1e-10 : 1e-12));
        }
    }
}

TEST_CASE("frame satisfies both legs of the linear problem") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    for (double lambda : {0.5, 1.2}) {
        const auto cache = prepared_cache(spec, lambda);
        for (double x : {-2.3, 0.8, 3.6}) {
            for (double y : {-1.4, 2.2}) {
                const auto r = wavefunction::lsp_residual(cache, x, y);
                CHECK(r.x_part < 1e-9);
                CHECK(r.y_part < 1e-9);
            }
        }
        // Far corners, where the exponential regime amplifies everything.
        const auto corner = wavefunction::lsp_residual(cache, -7.5, 7.5);
        CHECK(corner.x_part < 1e-8);
        CHECK(corner.y_part < 1e-8);
    }
}

TEST_CASE("the two integration-path orders agree") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    for (double lambda : {0.5, 1.2}) {
        const auto cache = prepared_cache(spec, lambda);
        for (double x : {-6.0, 1.5, 7.0}) {
            for (double y : {-7.0, 0.9, 6.5}) {
                CHECK(wavefunction::path_disagreement(cache, x, y) < 1e-8);
            }
        }
    }
}

TEST_CASE("negative discriminant: the frame is periodic in y") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto cache = prepared_cache(spec, 1.2, -2.0, 2.0);
    // Period 2 pi / sqrt(-g), frozen from a 30-digit computation.
    const double period = 11.840322813743537;
    for (double x : {-1.0, 0.7}) {
        for (double y : {0.3, 1.7}) {
            const Mat2 a = cache.phi(x, y);
            const Mat2 b = cache.phi(x, y + period);
            CHECK(dist(a, b) < 1e-10 * std::max(1.0, algebra::max_abs(a)));
        }
    }
}

TEST_CASE("positive discriminant: the frame grows at rate sqrt(g)") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto cache = prepared_cache(spec, 0.5, -2.0, 2.0);
    const double sg = std::sqrt(0.703125);
    const double r8 = algebra::max_abs(cache.phi(1.0, 8.0));
    const double r6 = algebra::max_abs(cache.phi(1.0, 6.0));
    CHECK(std::abs(0.5 * std::log(r8 / r6) - sg) < 1e-3);
}

TEST_CASE("antiderivative of 1/(2(u + lambda)) matches frozen references") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto far = laxpair::make_context(spec, 2.0);
    CHECK(wavefunction::half_reciprocal_antiderivative(far, 1.0).real()
          == doctest::Approx(0.20586370450332977822).epsilon(5e-12));
    const auto near = laxpair::make_context(spec, 0.5);
    CHECK(wavefunction::half_reciprocal_antiderivative(near, 0.9).real()
          == doctest::Approx(0.52663583342440486427).epsilon(5e-12));
    // sqrt(g) I(0.4), same frozen run.
    CHECK(wavefunction::psi_exponent(near, 0.4, 0.0).real()
          == doctest::Approx(0.24727856911335290414).epsilon(5e-12));
}

TEST_CASE("antiderivative refuses paths through the pole of the integrand") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto ctx = laxpair::make_context(spec, 0.5);
    // u(t) reaches -lambda = -0.5 near t = -0.53.
    CHECK_THROWS_AS(wavefunction::half_reciprocal_antiderivative(ctx, -2.0), Error);
}

TEST_CASE("scalar eigen-solutions satisfy their first-order equation") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto ctx = laxpair::make_context(spec, 0.5);
    for (double x : {0.3, 0.9}) {
        const double h = 1e-3;
        auto plus = [&](double t) { return wavefunction::psi_pair(ctx, t, 0.2).first; };
        const Scalar dx = fd::derivative(plus, x, h);
        const Scalar expected = ctx.sqrt_g
            / Scalar(2.0 * (model::jet(spec, x).u + ctx.lambda))
            * wavefunction::psi_pair(ctx, x, 0.2).first;
        CHECK(std::abs(dx - expected) < 1e-8);
    }
}

TEST_CASE("closed exponent: the eighth-log normalization reproduces the quadrature") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto ctx = laxpair::make_context(spec, 0.5);
    for (double x : {0.2, 0.3, 0.4, 0.45}) {
        const Scalar truth = ctx.sqrt_g * wavefunction::half_reciprocal_antiderivative(ctx, x);
        const Scalar closed =
            wavefunction::sqrtg_antiderivative_closed(ctx, x, PsiVariant::eighth_log);
        CHECK(std::abs(closed - truth) < 1e-10);
    }
    // A second spectral point, checked across the monotone branch of u
    // through x = 0 (the substitution behind the closed form needs u
    // monotone, so the usable range ends at the first turning point).
    const auto wide = laxpair::make_context(spec, 3.0);
    for (double x : {-1.0, 0.5, 1.5}) {
        const Scalar truth = wide.sqrt_g * wavefunction::half_reciprocal_antiderivative(wide, x);
        const Scalar closed =
            wavefunction::sqrtg_antiderivative_closed(wide, x, PsiVariant::eighth_log);
        CHECK(std::abs(closed - truth) < 1e-9);
    }
    // Past the turning point (~1.686 for k = 0.5) the closed form refuses.
    CHECK_THROWS_AS(wavefunction::sqrtg_antiderivative_closed(wide, 3.0, PsiVariant::eighth_log),
                    Error);
}

TEST_CASE("closed exponent: the quarter-log normalizations deviate measurably") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto ctx = laxpair::make_context(spec, 0.5);
    const double x = 0.4;
    const Scalar truth = ctx.sqrt_g * wavefunction::half_reciprocal_antiderivative(ctx, x);
    for (PsiVariant v : {PsiVariant::quarter_log_reduced, PsiVariant::quarter_log}) {
        CHECK(std::abs(wavefunction::sqrtg_antiderivative_closed(ctx, x, v) - truth) > 1e-3);
    }
}

TEST_CASE("closed exponent: domain guards") {
    const ModelSpec sn = model::make_model(Kind::sn, 0.5);
    // Partial-fraction pole: the elliptic-integral term hits 1 - u^2/l^2 = 0.
    const auto ctx = laxpair::make_context(sn, 0.5);
    CHECK_THROWS_AS(wavefunction::sqrtg_antiderivative_closed(ctx, 0.9, PsiVariant::eighth_log),
                    Error);
    // Negative discriminant regime is out of scope for the closed branch.
    const auto osc = laxpair::make_context(sn, 1.2);
    CHECK_THROWS_AS(wavefunction::sqrtg_antiderivative_closed(osc, 0.3, PsiVariant::eighth_log),
                    Error);
    // Families with k2 > 0 or k1 < 0 are rejected.
    const auto cn = laxpair::make_context(model::make_model(Kind::cn, 0.5), 0.4);
    CHECK_THROWS_AS(wavefunction::sqrtg_antiderivative_closed(cn, 0.3, PsiVariant::eighth_log),
                    Error);
}

TEST_CASE("assemblies: only the eigen-basis variant satisfies the linear problem") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    for (double lambda : {0.5, 1.2}) {
        const auto ctx = laxpair::make_context(spec, lambda);
        for (auto [x, y] : {std::pair{0.8, 0.6}, std::pair{1.5, -1.0}}) {
            const auto good = wavefunction::lsp_residual_closed(
                ctx, ClosedVariant::eigen_basis, x, y);
            CHECK(good.x_part < 1e-8);
            CHECK(good.y_part < 1e-8);
            for (ClosedVariant bad :
                 {ClosedVariant::symmetric_mixed, ClosedVariant::rearranged_mixed}) {
                const auto r = wavefunction::lsp_residual_closed(ctx, bad, x, y);
                CHECK(std::max(r.x_part, r.y_part) > 1e-3);
            }
        }
    }
}

TEST_CASE("eigen-basis assembly has constant determinant sqrt(2)") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto ctx = laxpair::make_context(spec, 0.5);
    const Scalar d0 = wavefunction::phi_closed(ctx, 0.0, 0.0, ClosedVariant::eigen_basis).det();
    CHECK(std::abs(d0 - Scalar(std::sqrt(2.0))) < 1e-12);
    for (auto [x, y] : {std::pair{0.8, 0.6}, std::pair{1.5, -1.0}}) {
        const Scalar d = wavefunction::phi_closed(ctx, x, y, ClosedVariant::eigen_basis).det();
        CHECK(std::abs(d - d0) < 1e-11);
    }
}

TEST_CASE("eigen-basis assembly equals the integrated frame up to a constant factor") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    for (double lambda : {0.5, 1.2}) {
        const auto cache = prepared_cache(spec, lambda, -1.0, 3.5);
        for (auto [x, y] : {std::pair{0.8, 0.6}, std::pair{1.5, -1.0}, std::pair{3.0, 2.0}}) {
            CHECK(wavefunction::closed_form_match(cache, ClosedVariant::eigen_basis, x, y)
                  < 1e-8);
        }
    }
}

TEST_CASE("assemblies reject the degenerate spectrum") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto ctx = laxpair::make_context(spec, 1.0); // g = 0
    CHECK_THROWS_AS(wavefunction::phi_closed(ctx, 0.5, 0.5, ClosedVariant::eigen_basis), Error);
}

TEST_CASE("variant names round-trip") {
    for (PsiVariant v : {PsiVariant::quarter_log_reduced, PsiVariant::quarter_log,
                         PsiVariant::eighth_log}) {
        const auto back = wavefunction::psi_variant_from_name(wavefunction::psi_variant_name(v));
        REQUIRE(back.has_value());
        CHECK(*back == v);
    }
    for (ClosedVariant v : {ClosedVariant::symmetric_mixed, ClosedVariant::rearranged_mixed,
                            ClosedVariant::eigen_basis}) {
        const auto back =
            wavefunction::closed_variant_from_name(wavefunction::closed_variant_name(v));
        REQUIRE(back.has_value());
        CHECK(*back == v);
    }
    CHECK_FALSE(wavefunction::psi_variant_from_name("nope").has_value());
    CHECK_FALSE(wavefunction::closed_variant_from_name("nope").has_value());
}

TEST_CASE("spectral derivative satisfies the differentiated linear problem") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const double lambda = 0.5;
    wavefunction::LambdaDerivative ld(spec, lambda);
    ld.prepare(-1.0, 2.0);
    FrameCache cache(laxpair::make_context(spec, lambda));
    cache.prepare(-1.0, 2.0);
    const auto ctx = cache.context();

    for (auto [x, y] : {std::pair{0.6, 0.8}, std::pair{1.4, -0.7}}) {
        // d/dx (Phi_lambda) = L_lambda Phi + L Phi_lambda.
        const Mat2 lhs = fd::derivative(
            [&](double t) { return ld.phi_lambda(t, y); }, x, 1e-3);
        const auto p = model::jet(spec, x);
        const Mat2 rhs = laxpair::build_L_dlambda(ctx, p) * cache.phi(x, y)
                       + laxpair::build_L(ctx, p) * ld.phi_lambda(x, y);
        CHECK(dist(lhs, rhs) < 1e-6);

        // Unimodularity in lambda: tr(Phi^{-1} Phi_lambda) = d/dl log det = 0.
        const Scalar trace =
            (algebra::inverse(cache.phi(x, y)) * ld.phi_lambda(x, y)).trace();
        CHECK(std::abs(trace) < 1e-8);
    }
}

TEST_CASE("spectral derivative refuses stencils across a branch point") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    CHECK_THROWS_AS(wavefunction::LambdaDerivative(spec, 1.0), Error); // g(1) = 0
}
