#include "model.hpp"

#include <cmath>

namespace solsurf::model {

const char* kind_name(Kind kind) {
    switch (kind) {
        case Kind::sn: return "sn";
        case Kind::cn: return "cn";
        case Kind::dn: return "dn";
        case Kind::custom: return "custom";
    }
    return "unknown";
}

std::optional<Kind> kind_from_name(const std::string& name) {
    if (name == "sn") return Kind::sn;
    if (name == "cn") return Kind::cn;
    if (name == "dn") return Kind::dn;
    if (name == "custom") return Kind::custom;
    return std::nullopt;
}

namespace {

void require_epsilon(int epsilon) {
    if (epsilon != 1 && epsilon != -1) {
        raise(errc::invalid_argument, "epsilon must be +1 or -1");
    }
}

} // namespace

ModelSpec make_model(Kind kind, double k, int epsilon) {
    require_epsilon(epsilon);
    if (kind == Kind::custom) {
        raise(errc::invalid_argument, "custom models are created via make_custom");
    }
    const special::EllipticModulus mod = special::make_modulus(k);
    ModelSpec spec;
    spec.kind = kind;
    spec.k = k;
    spec.epsilon = epsilon;
    switch (kind) {
        case Kind::sn:
            spec.k1 = 1.0;
            spec.k2 = -k * k;
            break;
        case Kind::cn:
            spec.k1 = mod.kp * mod.kp;
            spec.k2 = k * k;
            break;
        case Kind::dn:
            spec.k1 = -mod.kp * mod.kp;
            spec.k2 = 1.0;
            break;
        case Kind::custom:
            break;
    }
    return spec;
}

ModelSpec make_custom(CustomCallbacks callbacks, int epsilon) {
    require_epsilon(epsilon);
    if (!callbacks.f || !callbacks.fp || !callbacks.fpp || !callbacks.solution) {
        raise(errc::invalid_argument, "custom model requires f, f', f'' and a solution callback");
    }
    ModelSpec spec;
    spec.kind = Kind::custom;
    spec.epsilon = epsilon;
    spec.k1 = 0.0;
    spec.k2 = 0.0;
    spec.custom = std::move(callbacks);
    return spec;
}

double f_of(const ModelSpec& spec, double u) {
    if (spec.kind == Kind::custom) return spec.custom->f(u);
    return potential<double>(spec, u);
}

double fp_of(const ModelSpec& spec, double u) {
    if (spec.kind == Kind::custom) return spec.custom->fp(u);
    return potential_prime<double>(spec, u);
}

double fpp_of(const ModelSpec& spec, double u) {
    if (spec.kind == Kind::custom) return spec.custom->fpp(u);
    return potential_second<double>(spec, u);
}

JetPoint jet(const ModelSpec& spec, double x) {
    JetPoint p{};
    p.x = x;
    if (spec.kind == Kind::custom) {
        const auto& cb = *spec.custom;
        p.u = cb.solution(x);
        const double fu = cb.f(p.u);
        if (fu < 0.0) {
            raise(errc::model_inconsistent,
                  "custom solution leaves the classically allowed region: f(u) = " +
                      std::to_string(fu));
        }
        p.ux = spec.epsilon * std::sqrt(fu);
        // Consistency of the declared branch with the solution callback.
        const double h = 1e-5;
        const double fd = (cb.solution(x + h) - cb.solution(x - h)) / (2.0 * h);
        if (std::abs(fd - p.ux) > 1e-5 * (1.0 + std::abs(p.ux)) + 1e-6) {
            raise(errc::model_inconsistent,
                  "solution callback derivative " + std::to_string(fd) +
                      " disagrees with epsilon sqrt(f(u)) = " + std::to_string(p.ux));
        }
        p.uxx = 0.5 * cb.fp(p.u);
        p.uxxx = 0.5 * cb.fpp(p.u) * p.ux;
        return p;
    }

    const special::JacobiTriple j = special::jacobi(x, spec.k);
    const double m = spec.k * spec.k;
    switch (spec.kind) {
        case Kind::sn:
            p.u = j.sn;
            p.ux = j.cn * j.dn;
            break;
        case Kind::cn:
            p.u = j.cn;
            p.ux = -j.sn * j.dn;
            break;
        case Kind::dn:
            p.u = j.dn;
            p.ux = -m * j.sn * j.cn;
            break;
        case Kind::custom:
            break;
    }
    p.uxx = -2.0 * spec.k2 * p.u * p.u * p.u + (spec.k2 - spec.k1) * p.u;
    p.uxxx = 0.5 * fpp_of(spec, p.u) * p.ux;
    return p;
}

double first_integral_residual(const ModelSpec& spec, double x) {
    const JetPoint p = jet(spec, x);
    return std::abs(p.ux * p.ux - f_of(spec, p.u));
}

double integral_solution_check(const ModelSpec& spec, double x0, double x1) {
    if (x0 == x1) return 0.0;
    if (x0 > x1) std::swap(x0, x1);

    // The branch must be strictly monotone: scan u_x for zeros / sign flips.
    const int n_scan = 129;
    double sign0 = 0.0;
    for (int i = 0; i < n_scan; ++i) {
        const double x = x0 + (x1 - x0) * i / (n_scan - 1);
        const double ux = jet(spec, x).ux;
        if (std::abs(ux) < 1e-9) {
            raise(errc::turning_point, "u_x vanishes near x = " + std::to_string(x));
        }
        const double s = (ux > 0.0) ? 1.0 : -1.0;
        if (sign0 == 0.0) sign0 = s;
        if (s != sign0) {
            raise(errc::turning_point, "u_x changes sign inside [" + std::to_string(x0) +
                                           ", " + std::to_string(x1) + "]");
        }
    }

    const double u0 = jet(spec, x0).u;
    const double u1 = jet(spec, x1).u;
    const auto integrand = [&spec](double u) -> std::complex<double> {
        return 1.0 / std::sqrt(f_of(spec, u));
    };
    const std::complex<double> quad = special::antiderivative_along_x(integrand, u0, u1, 1e-11);
    return std::abs(quad.real() - sign0 * (x1 - x0));
}

double discriminant(const ModelSpec& spec, double lambda) {
    return f_of(spec, -lambda);
}

namespace {

// Product of (1 - s) and (k1 + k2 s) in the even variable s = u^2 or lambda^2.
std::array<double, 3> quartic_even_coefficients(double k1, double k2) {
    const double p[2] = {1.0, -1.0};
    const double q[2] = {k1, k2};
    return {p[0] * q[0], p[0] * q[1] + p[1] * q[0], p[1] * q[1]};
}

} // namespace

std::array<double, 3> g_coefficients(const ModelSpec& spec) {
    if (spec.kind == Kind::custom) {
        raise(errc::invalid_argument, "coefficient expansion applies to the quartic potential only");
    }
    // g(lambda) = (1 - lambda^2)(k1 + k2 lambda^2), expanded in lambda^2.
    return quartic_even_coefficients(spec.k1, spec.k2);
}

std::array<double, 3> f_reflected_coefficients(const ModelSpec& spec) {
    if (spec.kind == Kind::custom) {
        raise(errc::invalid_argument, "coefficient expansion applies to the quartic potential only");
    }
    // Expand f(u) in u^2, then substitute u = -lambda: the entry for u^{2n}
    // picks up (-1)^{2n} = +1, so reflection fixes every stored coefficient.
    std::array<double, 3> f_even = quartic_even_coefficients(spec.k1, spec.k2);
    for (std::size_t n = 0; n < f_even.size(); ++n) {
        f_even[n] *= std::pow(-1.0, 2.0 * static_cast<double>(n));
    }
    return f_even;
}

} // namespace solsurf::model
