#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "special.hpp"

using namespace solsurf;

// Reference values below were computed independently with mpmath at 30
// significant digits and frozen here.

TEST_CASE("complete elliptic integral of the first kind") {
    CHECK(special::elliptic_k(0.3) == doctest::Approx(1.6080486199305128013).epsilon(5e-16));
    CHECK(special::elliptic_k(0.5) == doctest::Approx(1.6857503548125960429).epsilon(5e-16));
    CHECK(special::elliptic_k(0.9) == doctest::Approx(2.2805491384227702046).epsilon(5e-16));
    CHECK(special::elliptic_k(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK_THROWS_AS(special::elliptic_k(1.0), Error);
    CHECK_THROWS_AS(special::elliptic_k(-0.1), Error);
}

TEST_CASE("Jacobi elliptic functions match high-precision references") {
    struct Row {
        double x, k, sn, cn, dn;
    };
    const Row rows[] = {
        {0.7, 0.6, 0.62991711532348681044, 0.77666236410845673098, 0.92582589832868324581},
        {1.3, 0.5, 0.94404856749122019742, 0.3298064617586730423, 0.88158554636203273337},
        {2.9, 0.9, 0.95994257654738556567, -0.28019680535574777275, 0.50358048242815081428},
        {-1.1, 0.3, -0.88400298105947611452, 0.46748126109819580012, 0.96419317859701556605},
        {0.5, 0.5, 0.47508293602853651008, 0.87994102296375834214, 0.97137739883817884282},
    };
    for (const Row& r : rows) {
        const auto j = special::jacobi(r.x, r.k);
        CHECK(j.sn == doctest::Approx(r.sn).epsilon(2e-14));
        CHECK(j.cn == doctest::Approx(r.cn).epsilon(2e-14));
        CHECK(j.dn == doctest::Approx(r.dn).epsilon(2e-14));
    }
}

TEST_CASE("Jacobi algebraic identities hold along the real line") {
    for (double k : {0.15, 0.5, 0.85}) {
        for (double x = -6.0; x <= 6.0; x += 0.37) {
            const auto j = special::jacobi(x, k);
            CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0) < 1e-13);
            CHECK(std::abs(j.dn * j.dn + k * k * j.sn * j.sn - 1.0) < 1e-13);
        }
    }
}

TEST_CASE("Jacobi periodicity: period 4K in x") {
    const double k = 0.5;
    const double period = 4.0 * special::elliptic_k(k);
    for (double x : {0.3, 1.1, 2.7}) {
        const auto a = special::jacobi(x, k);
        const auto b = special::jacobi(x + period, k);
        CHECK(a.sn == doctest::Approx(b.sn).epsilon(5e-13));
        CHECK(a.cn == doctest::Approx(b.cn).epsilon(5e-13));
        CHECK(a.dn == doctest::Approx(b.dn).epsilon(5e-13));
    }
}

TEST_CASE("Jacobi degenerate moduli reduce to circular and hyperbolic functions") {
    for (double x : {-1.2, 0.4, 2.0}) {
        const auto j0 = special::jacobi(x, 0.0);
        CHECK(j0.sn == doctest::Approx(std::sin(x)).epsilon(1e-14));
        CHECK(j0.cn == doctest::Approx(std::cos(x)).epsilon(1e-14));
        CHECK(j0.dn == doctest::Approx(1.0).epsilon(1e-15));
        const auto j1 = special::jacobi(x, 1.0);
        CHECK(j1.sn == doctest::Approx(std::tanh(x)).epsilon(1e-14));
        CHECK(j1.cn == doctest::Approx(1.0 / std::cosh(x)).epsilon(1e-14));
        CHECK(j1.dn == doctest::Approx(1.0 / std::cosh(x)).epsilon(1e-14));
    }
}

TEST_CASE("Jacobi derivative identity sn' = cn dn at a reference point") {
    // cn(0.7, 0.6) * dn(0.7, 0.6), frozen from the same 30-digit run.
    const double expected = 0.71905413094879082909;
    const double h = 1e-5;
    const double fd = (special::jacobi(0.7 + h, 0.6).sn - special::jacobi(0.7 - h, 0.6).sn)
                    / (2.0 * h);
    CHECK(fd == doctest::Approx(expected).epsilon(1e-9));
    const auto j = special::jacobi(0.7, 0.6);
    CHECK(j.cn * j.dn == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("Carlson symmetric integrals match references") {
    CHECK(special::carlson_rf(1.0, 2.0, 4.0)
          == doctest::Approx(0.68508581663343596691).epsilon(1e-15));
    CHECK(special::carlson_rf(0.5, 1.0, 1.0)
          == doctest::Approx(1.1107207345395915547).epsilon(1e-15));
    CHECK(special::carlson_rc(1.0, 2.0)
          == doctest::Approx(0.78539816339744830256).epsilon(1e-15)); // = pi/4
    CHECK(special::carlson_rj(1.0, 2.0, 4.0, 3.0)
          == doctest::Approx(0.26377357847854025444).epsilon(1e-14));
    CHECK(special::carlson_rj(2.0, 3.0, 4.0, 5.0)
          == doctest::Approx(0.14297579667156753833).epsilon(1e-14));
}

TEST_CASE("Carlson RF homogeneity") {
    const double t = 3.7;
    CHECK(special::carlson_rf(t * 1.0, t * 2.0, t * 4.0)
          == doctest::Approx(special::carlson_rf(1.0, 2.0, 4.0) / std::sqrt(t))
                 .epsilon(1e-14));
}

TEST_CASE("incomplete elliptic integral of the third kind") {
    CHECK(special::elliptic_pi_incomplete(0.5, 0.3, 0.5)
          == doctest::Approx(0.54395740731866198311).epsilon(1e-13));
    CHECK(special::elliptic_pi_incomplete(0.8, -1.0, 0.7)
          == doctest::Approx(0.81241679891265206379).epsilon(1e-13));
    CHECK(special::elliptic_pi_incomplete(0.9, 0.5, 0.2)
          == doctest::Approx(1.3824126631032838882).epsilon(1e-13));
    CHECK(special::elliptic_pi_incomplete(0.3, 2.0, 0.9)
          == doctest::Approx(0.32988083964534204096).epsilon(1e-13));
    // Odd in x.
    CHECK(special::elliptic_pi_incomplete(-0.5, 0.3, 0.5)
          == doctest::Approx(-0.54395740731866198311).epsilon(1e-13));
    // Characteristic pole a2 x^2 >= 1 inside the integration range.
    CHECK_THROWS_AS(special::elliptic_pi_incomplete(0.9, 2.0, 0.5), Error);
}

TEST_CASE("adaptive quadrature reproduces frozen antiderivatives") {
    using std::complex;
    // Elementary check: integral of exp over [0,1].
    const auto ex = special::antiderivative_along_x(
        [](double t) { return complex<double>(std::exp(t), 0.0); }, 0.0, 1.0);
    CHECK(ex.real() == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    CHECK(std::abs(ex.imag()) < 1e-15);

    // int_0^1 dt / (2 (sn(t, 0.5) + 2))
    const auto i1 = special::antiderivative_along_x(
        [](double t) { return complex<double>(0.5 / (special::jacobi(t, 0.5).sn + 2.0), 0.0); },
        0.0, 1.0);
    CHECK(i1.real() == doctest::Approx(0.20586370450332977822).epsilon(5e-12));

    // int_0^0.9 dt / (2 (sn(t, 0.5) + 0.5))
    const auto i2 = special::antiderivative_along_x(
        [](double t) { return complex<double>(0.5 / (special::jacobi(t, 0.5).sn + 0.5), 0.0); },
        0.0, 0.9);
    CHECK(i2.real() == doctest::Approx(0.52663583342440486427).epsilon(5e-12));

    // Reversed orientation flips the sign.
    const auto rev = special::antiderivative_along_x(
        [](double t) { return complex<double>(std::exp(t), 0.0); }, 1.0, 0.0);
    CHECK(rev.real() == doctest::Approx(-(std::exp(1.0) - 1.0)).epsilon(1e-13));
}

TEST_CASE("adaptive quadrature rejects non-integrable singularities") {
    CHECK_THROWS_AS(special::antiderivative_along_x(
                        [](double t) { return std::complex<double>(1.0 / (t - 0.5), 0.0); },
                        0.0, 1.0),
                    Error);
}

TEST_CASE("modulus helper computes the complement stably") {
    const auto m = special::make_modulus(0.6);
    CHECK(m.k == doctest::Approx(0.6));
    CHECK(m.kp == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(m.m() == doctest::Approx(0.36).epsilon(1e-15));
    CHECK_THROWS_AS(special::make_modulus(1.5), Error);
}
