#include "special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace solsurf::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

} // namespace

EllipticModulus make_modulus(double k) {
    if (!(k >= 0.0 && k <= 1.0)) {
        raise(errc::domain_error, "modulus k must lie in [0,1], got " + std::to_string(k));
    }
    // (1-k)(1+k) avoids cancellation in 1 - k^2 near k = 1.
    return {k, std::sqrt((1.0 - k) * (1.0 + k))};
}

JacobiTriple jacobi(double x, double k) {
    const EllipticModulus mod = make_modulus(k);
    if (k == 1.0) {
        const double s = 1.0 / std::cosh(x);
        return {std::tanh(x), s, s};
    }

    // Range reduction: the backward amplitude recurrence keeps full
    // precision only for small phases, and the dn ratio below cancels near
    // the quarter period. Use 2K-antiperiodicity of sn, cn, oddness of sn,
    // and the quarter-period shift identities (A&S 16.8) to confine the
    // evaluation to [-K/2, K/2].
    double sn_sign = 1.0, cn_sign = 1.0;
    const double quarter = elliptic_k(k);
    {
        int quo = 0;
        x = std::remquo(x, 2.0 * quarter, &quo);
        if (quo & 1) {
            sn_sign = -sn_sign;
            cn_sign = -cn_sign;
        }
    }
    if (x < 0.0) {
        x = -x;
        sn_sign = -sn_sign;
    }
    const bool shifted = x > 0.5 * quarter;
    if (shifted) x -= quarter;

    // Descending Landen / AGM scales, A&S 16.4. c_n -> 0 quadratically.
    constexpr int kMaxScale = 32;
    std::array<double, kMaxScale> a{}, c{};
    a[0] = 1.0;
    c[0] = mod.k;
    double b = mod.kp;
    int n = 0;
    while (std::abs(c[n]) > kEps * a[n] && n + 1 < kMaxScale) {
        const double an = 0.5 * (a[n] + b);
        const double cn = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
        a[n] = an;
        c[n] = cn;
    }

    // Backward amplitude recurrence: phi_{n-1} = (phi_n + asin(c_n/a_n sin phi_n)) / 2.
    double phi = std::ldexp(a[n] * x, n);
    double phi_prev = phi; // phi_1, needed for dn
    for (int i = n; i >= 1; --i) {
        const double s = std::asin(clamp_unit(c[i] / a[i] * std::sin(phi)));
        phi_prev = phi;
        phi = 0.5 * (phi + s);
    }

    double sn = std::sin(phi);
    double cn = std::cos(phi);
    double dn = (n == 0) ? 1.0 : cn / std::cos(phi_prev - phi);
    if (shifted) {
        // sn(u + K) = cn/dn, cn(u + K) = -k' sn/dn, dn(u + K) = k'/dn.
        const double s = sn, c = cn, d = dn;
        sn = c / d;
        cn = -mod.kp * s / d;
        dn = mod.kp / d;
    }
    return {sn_sign * sn, cn_sign * cn, dn};
}

double elliptic_k(double k) {
    const EllipticModulus mod = make_modulus(k);
    if (k == 1.0) {
        raise(errc::domain_error, "K(k) diverges at k = 1");
    }
    double a = 1.0, b = mod.kp;
    while (std::abs(a - b) > 1e-15 * a) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (2.0 * a);
}

namespace {

void require_carlson_args(double x, double y, double z) {
    if (x < 0.0 || y < 0.0 || z < 0.0 || (x + y) == 0.0 || (y + z) == 0.0 || (x + z) == 0.0) {
        raise(errc::domain_error, "Carlson arguments must be nonnegative with at most one zero");
    }
}

} // namespace

// Carlson (1995), algorithm for R_F: duplicate until the arguments are close
// enough to their mean that the 5th-order Taylor expansion is at rounding level.
double carlson_rf(double x, double y, double z) {
    require_carlson_args(x, y, z);
    double a = (x + y + z) / 3.0;
    const double q = std::pow(3.0 * kEps, -1.0 / 6.0) *
                     std::max({std::abs(a - x), std::abs(a - y), std::abs(a - z)});
    double scale = 1.0;
    while (q * scale >= std::abs(a)) {
        const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        const double lam = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        a = 0.25 * (a + lam);
        scale *= 0.25;
    }
    // x,y,z and a were updated in lockstep, so (a - x)/a equals the scaled
    // deviation (A0 - x0) 4^{-n} / A_n of Carlson's expansion variables.
    const double X = (a - x) / a;
    const double Y = (a - y) / a;
    const double Z = -X - Y;
    const double e2 = X * Y - Z * Z;
    const double e3 = X * Y * Z;
    return (1.0 + (e2 * (e2 / 24.0 - e3 * 3.0 / 44.0 - 0.1) + e3 / 14.0)) / std::sqrt(a);
}

double carlson_rc(double x, double y) {
    if (x < 0.0 || y <= 0.0) {
        raise(errc::domain_error, "R_C requires x >= 0, y > 0");
    }
    double a = (x + 2.0 * y) / 3.0;
    const double q = std::pow(3.0 * kEps, -1.0 / 8.0) * std::abs(a - x);
    double scale = 1.0;
    while (q * scale >= std::abs(a)) {
        const double lam = 2.0 * std::sqrt(x) * std::sqrt(y) + y;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        a = 0.25 * (a + lam);
        scale *= 0.25;
    }
    const double s = (y - a) / a;
    // Taylor series DLMF 19.36.2 truncated at s^7.
    const double series = 1.0 + s * s * (3.0 / 10.0 + s * (1.0 / 7.0 + s * (3.0 / 8.0 + s * (9.0 / 22.0 + s * (159.0 / 208.0 + s * 9.0 / 8.0)))));
    return series / std::sqrt(a);
}

double carlson_rj(double x, double y, double z, double p) {
    require_carlson_args(x, y, z);
    if (p <= 0.0) {
        raise(errc::domain_error, "R_J implemented for p > 0 only");
    }
    double a = (x + y + z + 2.0 * p) / 5.0;
    const double delta = (p - x) * (p - y) * (p - z);
    const double q = std::pow(0.25 * kEps, -1.0 / 6.0) *
                     std::max({std::abs(a - x), std::abs(a - y), std::abs(a - z), std::abs(a - p)});
    double scale = 1.0; // 4^{-n}
    double sum = 0.0;
    while (q * scale >= std::abs(a)) {
        const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z), sp = std::sqrt(p);
        const double lam = sx * sy + sy * sz + sz * sx;
        const double d = (sp + sx) * (sp + sy) * (sp + sz);
        const double e = delta * scale * scale * scale / (d * d);
        sum += scale / d * carlson_rc(1.0, 1.0 + e);
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        p = 0.25 * (p + lam);
        a = 0.25 * (a + lam);
        scale *= 0.25;
    }
    const double X = (a - x) / a;
    const double Y = (a - y) / a;
    const double Z = (a - z) / a;
    const double P = -0.5 * (X + Y + Z);
    const double e2 = X * Y + Y * Z + Z * X - 3.0 * P * P;
    const double e3 = X * Y * Z + 2.0 * e2 * P + 4.0 * P * P * P;
    const double e4 = (2.0 * X * Y * Z + e2 * P + 3.0 * P * P * P) * P;
    const double e5 = X * Y * Z * P * P;
    const double series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 -
                          3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
    return scale * series / (a * std::sqrt(a)) + 6.0 * sum;
}

double elliptic_pi_incomplete(double x, double a2, double k) {
    if (!(k >= 0.0 && k < 1.0)) {
        raise(errc::domain_error, "third-kind integral implemented for k in [0,1)");
    }
    if (std::abs(x) > 1.0) {
        raise(errc::domain_error, "third-kind integral requires |x| <= 1");
    }
    if (x == 0.0) return 0.0;
    if (x < 0.0) return -elliptic_pi_incomplete(-x, a2, k); // integrand even in t
    if (a2 * x * x >= 1.0) {
        raise(errc::pole_on_path, "pole 1 - a2 t^2 = 0 crossed on [0, x] with a2 = " +
                                      std::to_string(a2) + ", x = " + std::to_string(x));
    }
    const double c2 = (1.0 - x) * (1.0 + x);
    const double d2 = 1.0 - k * k * x * x;
    const double p = 1.0 - a2 * x * x;
    // DLMF 19.25.14 with s = sin(phi) = x.
    double value = x * carlson_rf(c2, d2, 1.0);
    if (a2 != 0.0) {
        value += a2 / 3.0 * x * x * x * carlson_rj(c2, d2, 1.0, p);
    }
    return value;
}

namespace {

// 15-point Kronrod / 7-point Gauss pair on [-1,1] (QUADPACK dqk15 constants).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

using Cplx = std::complex<double>;

struct GkEstimate {
    Cplx kronrod;
    double error;
};

bool finite(Cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

GkEstimate gk15(const Integrand& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Cplx fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - half * kXgk[i]);
        fv[14 - i] = f(mid + half * kXgk[i]);
    }
    fv[7] = f(mid);
    for (int i = 0; i < 15; ++i) {
        if (!finite(fv[i])) {
            const double t = (i < 7) ? mid - half * kXgk[i] : (i == 7 ? mid : mid + half * kXgk[14 - i]);
            raise(errc::singular_integrand, "integrand non-finite at x = " + std::to_string(t));
        }
    }
    Cplx kron = kWgk[7] * fv[7];
    Cplx gauss = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kron += kWgk[i] * (fv[i] + fv[14 - i]);
    }
    for (int i = 0; i < 3; ++i) { // Gauss nodes are the odd-index Kronrod nodes
        gauss += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    }
    kron *= half;
    gauss *= half;
    return {kron, std::abs(kron - gauss)};
}

Cplx adapt(const Integrand& f, double a, double b, double tol, int depth) {
    const GkEstimate est = gk15(f, a, b);
    if (est.error <= std::max(tol, 50.0 * kEps * std::abs(est.kronrod))) {
        return est.kronrod;
    }
    if (depth >= 60) {
        raise(errc::singular_integrand,
              "quadrature failed to converge near x = " + std::to_string(0.5 * (a + b)));
    }
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, depth + 1) + adapt(f, mid, b, 0.5 * tol, depth + 1);
}

} // namespace

Cplx antiderivative_along_x(const Integrand& f, double x0, double x1, double abs_tol) {
    if (!(abs_tol > 0.0)) {
        raise(errc::invalid_argument, "abs_tol must be positive");
    }
    if (x0 == x1) return {0.0, 0.0};
    return adapt(f, x0, x1, abs_tol, 0);
}

} // namespace solsurf::special
