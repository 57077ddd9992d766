#pragma once

// The autonomous second-order model u_xx = f'(u)/2 with first integral
// u_x^2 = f(u), and its elliptic solution families.
//
// For the quartic potential f(u) = (1 - u^2)(k1 + k2 u^2) the bounded
// solutions are Jacobi elliptic functions; the built-in kinds fix
//   sn: (k1, k2) = (1,      -k^2)     u = sn(x,k)
//   cn: (k1, k2) = (1-k^2,   k^2)     u = cn(x,k)
//   dn: (k1, k2) = (k^2-1,   1)       u = dn(x,k)
// and the equation of motion reads u_xx = -2 k2 u^3 + (k2 - k1) u.
//
// A custom model supplies callbacks for f, f', f'' and a solution x -> u(x);
// its jets use u_x = epsilon sqrt(f(u)) on a monotone branch and are
// cross-checked against the solution callback (model_inconsistent on
// disagreement).

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "errors.hpp"
#include "special.hpp"

namespace solsurf::model {

enum class Kind { sn, cn, dn, custom };

const char* kind_name(Kind kind);
std::optional<Kind> kind_from_name(const std::string& name);

struct CustomCallbacks {
    std::function<double(double)> f;        // potential f(u)
    std::function<double(double)> fp;       // f'(u)
    std::function<double(double)> fpp;      // f''(u)
    std::function<double(double)> solution; // x -> u(x)
};

struct ModelSpec {
    Kind kind = Kind::sn;
    double k = 0.5;   // elliptic modulus (elliptic kinds)
    int epsilon = 1;  // branch sign in u_x = epsilon sqrt(f(u))
    double k1 = 1.0;  // quartic potential coefficients (elliptic kinds)
    double k2 = -0.25;
    std::optional<CustomCallbacks> custom;
};

// Built-in elliptic model; raises domain_error for k outside [0,1] or
// invalid_argument for epsilon not in {-1, +1}.
ModelSpec make_model(Kind kind, double k, int epsilon = 1);

// Custom model from callbacks (all four required).
ModelSpec make_custom(CustomCallbacks callbacks, int epsilon = 1);

struct JetPoint {
    double x;
    double u;
    double ux;
    double uxx;
    double uxxx; // = f''(u) u_x / 2, needed by the symmetry prolongations
};

// Evaluate the solution jet at x. Elliptic kinds use the Jacobi derivative
// identities (sn' = cn dn, cn' = -sn dn, dn' = -k^2 sn cn); custom models
// use the callbacks plus the first integral.
JetPoint jet(const ModelSpec& spec, double x);

// Potential and derivatives as functions of u. Templated so that dual-number
// evaluation (total x-derivatives) reuses the same expressions.
template <class T>
T potential(const ModelSpec& spec, const T& u) {
    return (T(1.0) - u * u) * (T(spec.k1) + T(spec.k2) * u * u);
}

template <class T>
T potential_prime(const ModelSpec& spec, const T& u) {
    return T(2.0 * (spec.k2 - spec.k1)) * u - T(4.0 * spec.k2) * u * u * u;
}

template <class T>
T potential_second(const ModelSpec& spec, const T& u) {
    return T(2.0 * (spec.k2 - spec.k1)) - T(12.0 * spec.k2) * u * u;
}

double f_of(const ModelSpec& spec, double u);
double fp_of(const ModelSpec& spec, double u);
double fpp_of(const ModelSpec& spec, double u);

// |u_x^2 - f(u)| at x; the first-integral defect.
double first_integral_residual(const ModelSpec& spec, double x);

// Residual of the quadrature identity int_{u(x0)}^{u(x1)} du / sqrt(f(u)) =
// +-(x1 - x0) on a monotone branch. Raises turning_point if u_x changes sign
// or vanishes inside [x0, x1].
double integral_solution_check(const ModelSpec& spec, double x0, double x1);

// Discriminant g(lambda) = f(-lambda).
double discriminant(const ModelSpec& spec, double lambda);

// Coefficients {c0, c2, c4} of g(lambda) = c0 + c2 lambda^2 + c4 lambda^4,
// once computed by expanding (1 - lambda^2)(k1 + k2 lambda^2) and once by
// reflecting the expansion of f. The two must agree exactly.
std::array<double, 3> g_coefficients(const ModelSpec& spec);
std::array<double, 3> f_reflected_coefficients(const ModelSpec& spec);

} // namespace solsurf::model
