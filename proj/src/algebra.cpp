#include "algebra.hpp"

#include <algorithm>

namespace solsurf::algebra {

double real_checked(Scalar z, double tol) {
    if (!is_effectively_real(z, tol)) {
        raise(errc::invariant_violation,
              "value expected real, got imaginary part " + std::to_string(z.imag()) +
                  " against real part " + std::to_string(z.real()));
    }
    return z.real();
}

double max_abs(const Mat2& m) {
    return std::max(std::max(std::abs(m.a), std::abs(m.b)),
                    std::max(std::abs(m.c), std::abs(m.d)));
}

Mat2 inverse(const Mat2& m) {
    const Scalar det = m.det();
    // Scale-aware singularity test: det of a 2x2 is O(|m|^2).
    const double scale = max_abs(m);
    if (std::abs(det) <= 1e-14 * std::max(1.0, scale * scale)) {
        raise(errc::singular_frame, "2x2 inverse of numerically singular matrix, |det| = " +
                                        std::to_string(std::abs(det)));
    }
    const Scalar inv = Scalar(1.0) / det;
    return {inv * m.d, -inv * m.b, -inv * m.c, inv * m.a};
}

Mat2 conjugate(const Mat2& frame, const Mat2& x) {
    return inverse(frame) * x * frame;
}

Mat2 traceless_part(const Mat2& m) {
    const Scalar half_trace = 0.5 * m.trace();
    return {m.a - half_trace, m.b, m.c, m.d - half_trace};
}

Mat2 normalized_unit_det(const Mat2& m) {
    const Scalar det = m.det();
    if (std::abs(det) == 0.0) {
        raise(errc::singular_frame, "cannot normalize matrix with zero determinant");
    }
    const Scalar s = Scalar(1.0) / std::sqrt(det); // principal branch
    return s * m;
}

Coeffs decompose(const Mat2& x, double trace_tol) {
    const double scale = std::max(1.0, max_abs(x));
    if (std::abs(x.trace()) > trace_tol * scale) {
        raise(errc::invariant_violation,
              "matrix is not traceless: |tr| = " + std::to_string(std::abs(x.trace())));
    }
    return {x.a, 0.5 * (x.b + x.c), 0.5 * (x.c - x.b)};
}

Mat2 compose(const Coeffs& c) {
    return {c.c1, c.c2 - c.c3, c.c2 + c.c3, -c.c1};
}

std::array<std::array<double, 3>, 3> killing_matrix() {
    const Mat2 basis[3] = {kE1, kE2, kE3};
    std::array<std::array<double, 3>, 3> gram{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            gram[i][j] = killing_form(basis[i], basis[j]).real();
    return gram;
}

} // namespace solsurf::algebra
