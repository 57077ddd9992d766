#pragma once
// Config-scoped invariant suite. Every identity the library relies on is
// re-evaluated for the configured model, spectral parameter, and surface,
// and reported as a named residual against its tolerance. The CLI `validate`
// subcommand prints this; the acceptance tests run the same identities at
// their full published scale.

#include <optional>
#include <string>
#include <vector>

#include "surfio.hpp"
#include "wavefunction.hpp"

namespace solsurf::validation {

struct CheckResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;      // observed extreme (residual, deviation, or order)
    double tolerance = 0.0;  // bound it was judged against
    std::string detail;      // sampling context and per-part numbers
};

// Runs every check that applies to the configuration. Individual check
// failures never throw; they come back with pass = false.
std::vector<CheckResult> run_validation(const surfio::GridConfig& config);

// Human-readable report: one PASS/FAIL line per check plus the closed-form
// geometry comparison when the model supports it.
std::string validation_text(const surfio::GridConfig& config,
                            const std::vector<CheckResult>& results);

// Frame diagnostics along the configured ranges: integrated residuals,
// determinant drift, path-order agreement, and the closed-form assemblies'
// per-variant residuals and match against the integrated frame. When
// `phase_variant` is set, the closed phase-antiderivative section reports
// that variant alone; by default all variants are compared.
std::string wavefunction_text(
    const surfio::GridConfig& config,
    std::optional<wavefunction::PsiVariant> phase_variant = std::nullopt);

} // namespace solsurf::validation
