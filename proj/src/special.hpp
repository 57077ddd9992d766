#pragma once

// Elliptic special functions and adaptive quadrature.
//
// All primitives here are implemented from scratch against the classical
// algorithms so that the test suite can check them against independent
// oracles (quadrature inversion, high-precision anchors):
//   - jacobi:      arithmetic-geometric-mean descending Landen recurrence,
//                  Abramowitz & Stegun 16.4.
//   - elliptic_k:  complete integral of the first kind via AGM.
//   - carlson_*:   Carlson symmetric integrals R_F, R_C, R_J by the
//                  duplication algorithms of Carlson (1995).
//   - elliptic_pi_incomplete: Legendre incomplete third-kind integral in
//                  algebraic form, reduced to R_F/R_J (DLMF 19.25.14).
//   - antiderivative_along_x: adaptive 15-point Gauss-Kronrod bisection,
//                  complex-capable integrand.

#include <complex>
#include <functional>

#include "errors.hpp"

namespace solsurf::special {

struct EllipticModulus {
    double k;  // modulus, in [0, 1]
    double kp; // complementary modulus sqrt(1 - k^2)

    double m() const { return k * k; }
};

// Raises domain_error outside [0,1]. Guarantees k^2 + kp^2 = 1 within 1e-14.
EllipticModulus make_modulus(double k);

struct JacobiTriple {
    double sn, cn, dn;
};

// Jacobi elliptic functions for real argument and modulus k in [0,1].
// k = 0 and k = 1 degenerate to (sin, cos, 1) and (tanh, sech, sech).
JacobiTriple jacobi(double x, double k);

// Complete elliptic integral of the first kind, K(k), for k in [0,1).
// AGM iteration, stopping at |a_n - b_n| <= 1e-15 * a_n.
double elliptic_k(double k);

// Carlson symmetric forms. Arguments must be nonnegative (at most one of
// x,y,z zero); carlson_rj additionally requires p > 0.
double carlson_rf(double x, double y, double z);
double carlson_rc(double x, double y);
double carlson_rj(double x, double y, double z, double p);

// Incomplete third-kind integral in algebraic form:
//   Pi(x, a2, k) = int_0^x dt / ((1 - a2 t^2) sqrt(1 - t^2) sqrt(1 - k^2 t^2)).
// Odd in x. Raises pole_on_path when a2 x^2 >= 1 (the integrand pole falls
// on the path), domain_error when |x| > 1 or k outside [0,1).
double elliptic_pi_incomplete(double x, double a2, double k);

// Definite integral of a complex-valued integrand over [x0, x1] by adaptive
// Gauss-Kronrod (G7,K15) bisection to absolute tolerance abs_tol. Raises
// singular_integrand (carrying the abscissa in the message) when the
// integrand evaluates non-finite or an interval cannot be resolved before
// the depth limit.
using Integrand = std::function<std::complex<double>(double)>;
std::complex<double> antiderivative_along_x(const Integrand& f, double x0, double x1,
                                            double abs_tol = 1e-11);

} // namespace solsurf::special
