#pragma once

// Extrapolated central differences.
//
// Both routines evaluate a symmetric stencil at steps h and h/2 and cancel
// the leading error term (Richardson), giving fourth-order accuracy. They
// are deliberately generic: any value type with +, -, and double scaling
// works (scalars, complex numbers, 2x2 matrices), so the same code produces
// the finite-difference sides of every derivative cross-check.

namespace solsurf::fd {

// d/dx f at x; error O(h^4) + O(eps/h).
template <class F>
auto derivative(F&& f, double x, double h) {
    auto quotient = [&](double step) {
        return (f(x + step) - f(x - step)) * (0.5 / step);
    };
    auto coarse = quotient(h);
    auto fine = quotient(0.5 * h);
    return (1.0 / 3.0) * (4.0 * fine - coarse);
}

// d^2/dx^2 f at x; error O(h^4) + O(eps/h^2).
template <class F>
auto second_derivative(F&& f, double x, double h) {
    auto center = f(x);
    auto quotient = [&](double step) {
        return (f(x + step) - 2.0 * center + f(x - step)) * (1.0 / (step * step));
    };
    auto coarse = quotient(h);
    auto fine = quotient(0.5 * h);
    return (1.0 / 3.0) * (4.0 * fine - coarse);
}

} // namespace solsurf::fd
