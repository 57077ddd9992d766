#pragma once

// Scalars, 2x2 matrices and the sl(2,R) coefficient calculus.
//
// Everything downstream works over complex scalars so that square roots of
// negative discriminants and complex-valued closed forms flow through one
// code path; reality is asserted only at output boundaries (see
// is_effectively_real). Matrices are dense 2x2, row-major.
//
// The traceless basis used for coefficient triples is
//   e1 = [[1,0],[0,-1]],  e2 = [[0,1],[1,0]],  e3 = [[0,-1],[1,0]],
// with X = X^1 e1 + X^2 e2 + X^3 e3 recovered by
//   X^1 = m11,  X^2 = (m12+m21)/2,  X^3 = (m21-m12)/2.
// Two bilinear pairings matter: the Euclidean pairing sum_i X^i Y^i on
// coefficient triples, and the Killing-type form B(X,Y) = tr(XY)/2 whose
// Gram matrix in (e1,e2,e3) is diag(1,1,-1) — signature (2,1), invariant
// under conjugation X -> P^{-1} X P.

#include <array>
#include <cmath>
#include <complex>

#include "errors.hpp"

namespace solsurf::algebra {

using Scalar = std::complex<double>;

// |Im z| <= tol * max(1, |Re z|): "real up to tolerance", scale-aware for
// large values but absolute near zero.
inline bool is_effectively_real(Scalar z, double tol) {
    return std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z.real()));
}

// Extract the real part, raising invariant_violation when the imaginary
// part is beyond tolerance. Used wherever a real quantity leaves the core.
double real_checked(Scalar z, double tol = 1e-9);

struct Mat2 {
    Scalar a{}, b{}, c{}, d{}; // [[a, b], [c, d]]

    Scalar trace() const { return a + d; }
    Scalar det() const { return a * d - b * c; }

    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator-() const { return {-a, -b, -c, -d}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2& operator+=(const Mat2& o) { a += o.a; b += o.b; c += o.c; d += o.d; return *this; }
    Mat2& operator-=(const Mat2& o) { a -= o.a; b -= o.b; c -= o.c; d -= o.d; return *this; }

    friend Mat2 operator*(Scalar s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
    friend Mat2 operator*(double s, const Mat2& m) { return Scalar(s) * m; }
    friend Mat2 operator*(const Mat2& m, Scalar s) { return s * m; }
};

inline const Mat2 kIdentity{1.0, 0.0, 0.0, 1.0};
inline const Mat2 kE1{1.0, 0.0, 0.0, -1.0};
inline const Mat2 kE2{0.0, 1.0, 1.0, 0.0};
inline const Mat2 kE3{0.0, -1.0, 1.0, 0.0};

// max |entry|; the matrix norm used for residuals and tolerances.
double max_abs(const Mat2& m);

// Inverse; raises singular_frame when |det| is numerically zero.
Mat2 inverse(const Mat2& m);

// frame^{-1} * x * frame
Mat2 conjugate(const Mat2& frame, const Mat2& x);

inline Mat2 commutator(const Mat2& x, const Mat2& y) { return x * y - y * x; }

// X - (tr X / 2) I
Mat2 traceless_part(const Mat2& m);

// Scale a group element to unit determinant (principal square root of det);
// raises singular_frame on det == 0.
Mat2 normalized_unit_det(const Mat2& m);

struct Coeffs {
    Scalar c1{}, c2{}, c3{};
};

// Coefficients of a traceless matrix in (e1,e2,e3). Raises
// invariant_violation if |tr| exceeds trace_tol * max(1, |X|).
Coeffs decompose(const Mat2& x, double trace_tol = 1e-12);

Mat2 compose(const Coeffs& c);

inline Scalar euclidean_inner(const Coeffs& x, const Coeffs& y) {
    return x.c1 * y.c1 + x.c2 * y.c2 + x.c3 * y.c3;
}

// B(X,Y) = tr(XY)/2 evaluated on matrices.
inline Scalar killing_form(const Mat2& x, const Mat2& y) {
    return 0.5 * (x * y).trace();
}

// Same form evaluated on coefficient triples: diag(1,1,-1).
inline Scalar killing_inner(const Coeffs& x, const Coeffs& y) {
    return x.c1 * y.c1 + x.c2 * y.c2 - x.c3 * y.c3;
}

// Gram matrix B(e_i, e_j); exactly diag(1,1,-1).
std::array<std::array<double, 3>, 3> killing_matrix();

} // namespace solsurf::algebra
