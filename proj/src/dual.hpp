#pragma once

// First-order forward-mode scalar for total x-derivatives.
//
// A Dual carries (value, d/dx). Seeding the jet variables with their known
// x-derivatives (u -> u_x, u_x -> u_xx, u_xx -> u_xxx, x -> 1) turns any
// algebraic matrix expression into its exact total x-derivative in one
// evaluation pass — no symbolic differentiation and no finite differencing
// in the analytic residuals.

#include <complex>

namespace solsurf::algebra {

struct Dual {
    std::complex<double> v{}; // value
    std::complex<double> d{}; // total d/dx

    Dual() = default;
    Dual(std::complex<double> value) : v(value), d(0.0) {}
    Dual(std::complex<double> value, std::complex<double> deriv) : v(value), d(deriv) {}
    Dual(double value) : v(value), d(0.0) {}

    Dual operator-() const { return {-v, -d}; }

    friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
    friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
    friend Dual operator*(const Dual& a, const Dual& b) {
        return {a.v * b.v, a.d * b.v + a.v * b.d};
    }
    friend Dual operator/(const Dual& a, const Dual& b) {
        const std::complex<double> q = a.v / b.v;
        return {q, (a.d - q * b.d) / b.v};
    }

    Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
    Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
};

} // namespace solsurf::algebra
