#pragma once

// Error model shared by every module: a single exception type carrying a
// stable error code. The C API maps these codes 1:1 onto its status enum,
// so new codes must be appended, never reordered.

#include <stdexcept>
#include <string>

namespace solsurf {

enum class errc {
    ok = 0,
    invalid_argument,     // bad parameter (range, enum value, null handle)
    domain_error,         // input outside a function's mathematical domain
    singular_denominator, // u + lambda too close to zero in a rational form
    singular_frame,       // frame matrix not invertible
    singular_integrand,   // quadrature hit a non-finite or unresolvable point
    pole_on_path,         // integration path crosses a pole
    turning_point,        // u_x vanishes inside an interval that requires monotonicity
    model_inconsistent,   // custom model callbacks violate the first integral
    branch_crossing,      // discriminant changes sign across a finite-difference stencil
    degenerate_spectrum,  // |g(lambda)| too small for a closed form that divides by sqrt(g)
    degenerate_tangents,  // tangent pair does not span a 2-plane
    invariant_violation,  // a structural invariant (trace, reality, determinant) failed
    io_error,             // file/stream failure
};

// Human-readable identifier, stable across releases (used in messages and logs).
const char* errc_name(errc code);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw Error(code, message);
}

inline const char* errc_name(errc code) {
    switch (code) {
        case errc::ok: return "ok";
        case errc::invalid_argument: return "invalid_argument";
        case errc::domain_error: return "domain_error";
        case errc::singular_denominator: return "singular_denominator";
        case errc::singular_frame: return "singular_frame";
        case errc::singular_integrand: return "singular_integrand";
        case errc::pole_on_path: return "pole_on_path";
        case errc::turning_point: return "turning_point";
        case errc::model_inconsistent: return "model_inconsistent";
        case errc::branch_crossing: return "branch_crossing";
        case errc::degenerate_spectrum: return "degenerate_spectrum";
        case errc::degenerate_tangents: return "degenerate_tangents";
        case errc::invariant_violation: return "invariant_violation";
        case errc::io_error: return "io_error";
    }
    return "unknown";
}

} // namespace solsurf
