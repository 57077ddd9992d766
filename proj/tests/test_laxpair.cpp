#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fd.hpp"
#include "laxpair.hpp"
#include "special.hpp"

using namespace solsurf;
using algebra::Mat2;
using laxpair::FormKind;
using model::Kind;
using model::ModelSpec;

namespace {

double dist(const Mat2& x, const Mat2& y) { return algebra::max_abs(x - y); }

model::CustomCallbacks sn_replica_callbacks(double k) {
    const double k1 = 1.0;
    const double k2 = -k * k;
    model::CustomCallbacks cb;
    cb.f = [k1, k2](double u) { return (1.0 - u * u) * (k1 + k2 * u * u); };
    cb.fp = [k1, k2](double u) { return 2.0 * (k2 - k1) * u - 4.0 * k2 * u * u * u; };
    cb.fpp = [k1, k2](double u) { return 2.0 * (k2 - k1) - 12.0 * k2 * u * u; };
    cb.solution = [k](double x) { return special::jacobi(x, k).sn; };
    return cb;
}

} // namespace

TEST_CASE("matrix entries at the reference point (sn, k = 0.5, lambda = 0.5, x = 0)") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto ctx = laxpair::make_context(spec, 0.5);
    const auto p = model::jet(spec, 0.0);

    const Mat2 m = laxpair::build_M(ctx, p);
    CHECK(m.a.real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.b.real() == doctest::Approx(-0.59375).epsilon(1e-15));
    CHECK(m.c.real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.d.real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(m.det().real() + 0.703125) < 1e-15);

    const Mat2 l = laxpair::build_L(ctx, p);
    CHECK(l.b.real() == doctest::Approx(-0.59375).epsilon(1e-15));
    CHECK(l.c.real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(l.a) < 1e-16);
    CHECK(std::abs(l.d) < 1e-16);
}

TEST_CASE("both matrices are traceless") {
    const ModelSpec spec = model::make_model(Kind::cn, 0.65);
    const auto ctx = laxpair::make_context(spec, 0.8);
    for (double x : {-1.7, 0.2, 2.4}) {
        const auto p = model::jet(spec, x);
        CHECK(std::abs(laxpair::build_M(ctx, p).trace()) < 1e-15);
        CHECK(std::abs(laxpair::build_L(ctx, p).trace()) < 1e-15);
    }
}

TEST_CASE("zero-curvature and determinant defects vanish across the sweep") {
    for (Kind kind : {Kind::sn, Kind::cn, Kind::dn}) {
        for (double k : {0.35, 0.6, 0.85}) {
            const ModelSpec spec = model::make_model(kind, k);
            for (double lambda : {0.1, 0.5, 0.9, 1.2, 2.0}) {
                const auto ctx = laxpair::make_context(spec, lambda);
                for (double x = -2.0; x <= 2.0; x += 0.57) {
                    const auto p = model::jet(spec, x);
                    CHECK(laxpair::compatibility_residual(ctx, p) < 1e-13);
                    CHECK(laxpair::det_defect(ctx, p) < 1e-13);
                }
            }
        }
    }
}

TEST_CASE("polynomial and rational realizations coincide for the quartic") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    const auto poly = laxpair::make_context(spec, 0.8);
    const auto rat = laxpair::make_context(spec, 0.8, FormKind::rational);
    CHECK(poly.form == FormKind::polynomial);
    CHECK(rat.form == FormKind::rational);
    for (double x : {-1.3, 0.3, 0.9, 2.1}) {
        const auto p = model::jet(spec, x);
        CHECK(dist(laxpair::build_M(poly, p), laxpair::build_M(rat, p)) < 1e-12);
        CHECK(dist(laxpair::build_L(poly, p), laxpair::build_L(rat, p)) < 1e-12);
        CHECK(dist(laxpair::build_M_dlambda(poly, p), laxpair::build_M_dlambda(rat, p)) < 1e-11);
        CHECK(dist(laxpair::build_L_dlambda(poly, p), laxpair::build_L_dlambda(rat, p)) < 1e-11);
        CHECK(dist(laxpair::build_M_dx(poly, p), laxpair::build_M_dx(rat, p)) < 1e-12);
        CHECK(dist(laxpair::build_L_dx(poly, p), laxpair::build_L_dx(rat, p)) < 1e-12);
    }
}

TEST_CASE("rational realization rejects the singular locus u + lambda = 0") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    // sn(0.5, 0.5) frozen from a 30-digit computation.
    const double lambda = -0.47508293602853651008;
    const auto ctx = laxpair::make_context(spec, lambda, FormKind::rational);
    const auto p = model::jet(spec, 0.5);
    CHECK_THROWS_AS(laxpair::build_M(ctx, p), Error);
    CHECK_THROWS_AS(laxpair::build_L(ctx, p), Error);
    // The polynomial realization is regular there.
    const auto poly = laxpair::make_context(spec, lambda);
    CHECK(laxpair::compatibility_residual(poly, p) < 1e-13);
}

TEST_CASE("analytic lambda-derivatives match extrapolated differences") {
    for (auto form : {FormKind::polynomial, FormKind::rational}) {
        const ModelSpec spec = model::make_model(Kind::dn, 0.6);
        const auto p = model::jet(spec, 0.7);
        for (double lambda : {0.3, 0.9, 1.5}) {
            const auto ctx = laxpair::make_context(spec, lambda, form);
            const Mat2 fd_m = fd::derivative(
                [&](double l) { return laxpair::build_M(laxpair::make_context(spec, l, form), p); },
                lambda, 1e-4);
            const Mat2 fd_l = fd::derivative(
                [&](double l) { return laxpair::build_L(laxpair::make_context(spec, l, form), p); },
                lambda, 1e-4);
            CHECK(dist(laxpair::build_M_dlambda(ctx, p), fd_m) < 1e-9);
            CHECK(dist(laxpair::build_L_dlambda(ctx, p), fd_l) < 1e-9);
        }
    }
}

TEST_CASE("dual-number x-derivatives match extrapolated differences") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.72);
    const auto ctx = laxpair::make_context(spec, 0.6);
    for (double x : {-0.9, 0.25, 1.4}) {
        const auto p = model::jet(spec, x);
        const Mat2 fd_m = fd::derivative(
            [&](double t) { return laxpair::build_M(ctx, model::jet(spec, t)); }, x, 1e-4);
        const Mat2 fd_l = fd::derivative(
            [&](double t) { return laxpair::build_L(ctx, model::jet(spec, t)); }, x, 1e-4);
        CHECK(dist(laxpair::build_M_dx(ctx, p), fd_m) < 1e-9);
        CHECK(dist(laxpair::build_L_dx(ctx, p), fd_l) < 1e-9);
    }
}

TEST_CASE("prolonged symmetry action equals the total x-derivative on solutions") {
    for (auto form : {FormKind::polynomial, FormKind::rational}) {
        const ModelSpec spec = model::make_model(Kind::cn, 0.55);
        const auto ctx = laxpair::make_context(spec, 1.1, form);
        for (double x : {-1.6, 0.45, 1.3}) {
            const auto p = model::jet(spec, x);
            CHECK(dist(laxpair::prolong_M(ctx, p), laxpair::build_M_dx(ctx, p)) < 1e-12);
            CHECK(dist(laxpair::prolong_L(ctx, p), laxpair::build_L_dx(ctx, p)) < 1e-12);
        }
    }
}

TEST_CASE("the characteristic u_x satisfies the linearized equation") {
    for (Kind kind : {Kind::sn, Kind::cn, Kind::dn}) {
        const ModelSpec spec = model::make_model(kind, 0.64);
        for (double x : {-1.2, 0.3, 0.8, 1.7}) {
            CHECK(laxpair::determining_residual(spec, x) < 1e-11);
        }
    }
}

TEST_CASE("spectral context: discriminant branch and validation") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);

    const auto pos = laxpair::make_context(spec, 0.5);
    CHECK(pos.g == doctest::Approx(0.703125).epsilon(1e-15));
    CHECK(pos.sqrt_g.real() == doctest::Approx(std::sqrt(0.703125)).epsilon(1e-15));
    CHECK(std::abs(pos.sqrt_g.imag()) < 1e-16);

    const auto neg = laxpair::make_context(spec, 1.2);
    CHECK(neg.g == doctest::Approx(-0.2816).epsilon(1e-14));
    CHECK(std::abs(neg.sqrt_g.real()) < 1e-16);
    CHECK(neg.sqrt_g.imag() == doctest::Approx(std::sqrt(0.2816)).epsilon(1e-14));
    CHECK(std::abs(neg.sqrt_g * neg.sqrt_g - algebra::Scalar(neg.g)) < 1e-15);

    CHECK_THROWS_AS(laxpair::make_context(spec, std::nan("")), Error);
}

TEST_CASE("custom models use the rational realization and satisfy the pair") {
    const ModelSpec custom = model::make_custom(sn_replica_callbacks(0.6));
    CHECK_THROWS_AS(laxpair::make_context(custom, 0.5, FormKind::polynomial), Error);
    const auto ctx = laxpair::make_context(custom, 0.5);
    CHECK(ctx.form == FormKind::rational);
    for (double x : {-0.4, 0.3, 0.9}) {
        const auto p = model::jet(custom, x);
        CHECK(laxpair::compatibility_residual(ctx, p) < 1e-10);
        CHECK(laxpair::det_defect(ctx, p) < 1e-12);
    }
    // Agreement with the built-in polynomial realization of the same model.
    const ModelSpec builtin = model::make_model(Kind::sn, 0.6);
    const auto poly = laxpair::make_context(builtin, 0.5);
    const auto p = model::jet(builtin, 0.3);
    CHECK(dist(laxpair::build_M(ctx, p), laxpair::build_M(poly, p)) < 1e-11);
    CHECK(dist(laxpair::build_L(ctx, p), laxpair::build_L(poly, p)) < 1e-11);
}

TEST_CASE("second x-derivative and mixed lambda-x derivative of M") {
    const ModelSpec spec = model::make_model(Kind::sn, 0.5);
    for (FormKind form : {FormKind::polynomial, FormKind::rational}) {
        const auto ctx = laxpair::make_context(spec, 0.7, form);
        for (double x : {-1.1, 0.4, 1.6}) {
            const auto p = model::jet(spec, x);
            // D_x^2 M against differentiation of the analytic first derivative.
            const Mat2 second = laxpair::build_M_dxx(ctx, p);
            const Mat2 fd_second = fd::derivative(
                [&](double t) { return laxpair::build_M_dx(ctx, model::jet(spec, t)); }, x, 1e-3);
            CHECK(dist(second, fd_second) < 1e-9);
            // ... and against second-differencing of M itself.
            const Mat2 fd2 = fd::second_derivative(
                [&](double t) { return laxpair::build_M(ctx, model::jet(spec, t)); }, x, 1e-3);
            CHECK(dist(second, fd2) < 1e-7);
            // Mixed derivative: differentiate the analytic lambda-derivative in x.
            const Mat2 mixed = laxpair::build_M_dlambda_dx(ctx, p);
            const Mat2 fd_mixed = fd::derivative(
                [&](double t) { return laxpair::build_M_dlambda(ctx, model::jet(spec, t)); }, x,
                1e-3);
            CHECK(dist(mixed, fd_mixed) < 1e-9);
        }
    }
}
