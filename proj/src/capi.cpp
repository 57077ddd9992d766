#include "solsurf/solsurf.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "surfio.hpp"
#include "validation.hpp"

using solsurf::Error;
using solsurf::errc;

struct solsurf_grid {
    solsurf::surfio::SurfaceGrid grid;
};

namespace {

constexpr const char* kVersion = "1.0.0";

thread_local std::string g_last_error;

// The C status values 1-13 are defined to mirror errc; keep that pinned.
static_assert(static_cast<int>(errc::invalid_argument) == SOLSURF_INVALID_ARGUMENT);
static_assert(static_cast<int>(errc::domain_error) == SOLSURF_DOMAIN_ERROR);
static_assert(static_cast<int>(errc::singular_denominator) == SOLSURF_SINGULAR_DENOMINATOR);
static_assert(static_cast<int>(errc::singular_frame) == SOLSURF_SINGULAR_FRAME);
static_assert(static_cast<int>(errc::singular_integrand) == SOLSURF_SINGULAR_INTEGRAND);
static_assert(static_cast<int>(errc::pole_on_path) == SOLSURF_POLE_ON_PATH);
static_assert(static_cast<int>(errc::turning_point) == SOLSURF_TURNING_POINT);
static_assert(static_cast<int>(errc::model_inconsistent) == SOLSURF_MODEL_INCONSISTENT);
static_assert(static_cast<int>(errc::branch_crossing) == SOLSURF_BRANCH_CROSSING);
static_assert(static_cast<int>(errc::degenerate_spectrum) == SOLSURF_DEGENERATE_SPECTRUM);
static_assert(static_cast<int>(errc::degenerate_tangents) == SOLSURF_DEGENERATE_TANGENTS);
static_assert(static_cast<int>(errc::invariant_violation) == SOLSURF_INVARIANT_VIOLATION);
static_assert(static_cast<int>(errc::io_error) == SOLSURF_IO_ERROR);

template <typename Fn>
int wrap(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return SOLSURF_OK;
    } catch (const Error& err) {
        g_last_error = err.what();
        return static_cast<int>(err.code());
    } catch (const std::exception& err) {
        g_last_error = err.what();
        return SOLSURF_INTERNAL_ERROR;
    } catch (...) {
        g_last_error = "unknown exception";
        return SOLSURF_INTERNAL_ERROR;
    }
}

int fail_argument(const char* message) {
    g_last_error = message;
    return SOLSURF_INVALID_ARGUMENT;
}

// Out-strings cross the boundary as malloc storage so solsurf_string_free
// stays allocator-compatible for plain C callers.
char* dup_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

solsurf::surfio::Format parse_format(const char* format) {
    const auto parsed = solsurf::surfio::format_from_name(format);
    if (!parsed)
        solsurf::raise(errc::invalid_argument,
                       std::string("unknown export format '") + format + "'");
    return *parsed;
}

} // namespace

extern "C" {

const char* solsurf_version(void) { return kVersion; }

const char* solsurf_status_name(int status) {
    if (status == SOLSURF_INTERNAL_ERROR) return "internal_error";
    if (status >= 0 && status <= static_cast<int>(errc::io_error))
        return solsurf::errc_name(static_cast<errc>(status));
    return "unknown";
}

const char* solsurf_last_error(void) { return g_last_error.c_str(); }

void solsurf_string_free(char* text) { std::free(text); }

int solsurf_grid_sample(const char* config_json, solsurf_grid** out_grid) {
    if (!config_json) return fail_argument("config_json is NULL");
    if (!out_grid) return fail_argument("out_grid is NULL");
    *out_grid = nullptr;
    return wrap([&] {
        const auto config = solsurf::surfio::parse_config(config_json);
        auto owned = new solsurf_grid{solsurf::surfio::sample_grid(config)};
        *out_grid = owned;
    });
}

void solsurf_grid_free(solsurf_grid* grid) { delete grid; }

int solsurf_grid_render(const solsurf_grid* grid, const char* format, char** out_bytes) {
    if (!grid) return fail_argument("grid is NULL");
    if (!format) return fail_argument("format is NULL");
    if (!out_bytes) return fail_argument("out_bytes is NULL");
    *out_bytes = nullptr;
    return wrap([&] {
        *out_bytes = dup_string(solsurf::surfio::render(grid->grid, parse_format(format)));
    });
}

int solsurf_grid_export(const solsurf_grid* grid, const char* format, const char* path) {
    if (!grid) return fail_argument("grid is NULL");
    if (!format) return fail_argument("format is NULL");
    if (!path) return fail_argument("path is NULL");
    return wrap(
        [&] { solsurf::surfio::export_grid(grid->grid, parse_format(format), path); });
}

int solsurf_grid_summary(const solsurf_grid* grid, char** out_text) {
    if (!grid) return fail_argument("grid is NULL");
    if (!out_text) return fail_argument("out_text is NULL");
    *out_text = nullptr;
    return wrap([&] {
        const auto& g = grid->grid;
        char head[256];
        std::snprintf(head, sizeof head,
                      "grid %dx%d on [%g, %g] x [%g, %g]: OK %zu, SINGULAR %zu, "
                      "DEGENERATE %zu, COMPLEX %zu\n",
                      g.config.nx, g.config.ny, g.config.x_min, g.config.x_max,
                      g.config.y_min, g.config.y_max, g.mask_counts[0], g.mask_counts[1],
                      g.mask_counts[2], g.mask_counts[3]);
        std::string text = head;
        for (const auto& note : g.notes) text += note + "\n";
        *out_text = dup_string(text);
    });
}

int solsurf_grid_mask_counts(const solsurf_grid* grid, size_t counts[4]) {
    if (!grid) return fail_argument("grid is NULL");
    if (!counts) return fail_argument("counts is NULL");
    for (int i = 0; i < 4; ++i) counts[i] = grid->grid.mask_counts[i];
    g_last_error.clear();
    return SOLSURF_OK;
}

int solsurf_validate(const char* config_json, char** out_report, int* out_failures) {
    if (!config_json) return fail_argument("config_json is NULL");
    if (!out_report) return fail_argument("out_report is NULL");
    *out_report = nullptr;
    return wrap([&] {
        const auto config = solsurf::surfio::parse_config(config_json);
        const auto results = solsurf::validation::run_validation(config);
        int failures = 0;
        for (const auto& r : results)
            if (!r.pass) ++failures;
        if (out_failures) *out_failures = failures;
        *out_report = dup_string(solsurf::validation::validation_text(config, results));
    });
}

int solsurf_wavefunction_report(const char* config_json, char** out_text) {
    if (!config_json) return fail_argument("config_json is NULL");
    if (!out_text) return fail_argument("out_text is NULL");
    *out_text = nullptr;
    return wrap([&] {
        // This entry point accepts one key beyond the grid schema: an optional
        // top-level "psi_variant" restricting the closed phase section.
        std::optional<solsurf::wavefunction::PsiVariant> variant;
        std::string grid_json = config_json;
        auto j = nlohmann::json::parse(grid_json, nullptr, false);
        if (j.is_object() && j.contains("psi_variant")) {
            if (!j["psi_variant"].is_null()) {
                const auto name = j["psi_variant"].get<std::string>();
                variant = solsurf::wavefunction::psi_variant_from_name(name);
                if (!variant)
                    solsurf::raise(solsurf::errc::invalid_argument,
                                   "unknown psi variant '" + name + "'");
            }
            j.erase("psi_variant");
            grid_json = j.dump();
        }
        const auto config = solsurf::surfio::parse_config(grid_json);
        *out_text = dup_string(solsurf::validation::wavefunction_text(config, variant));
    });
}

} // extern "C"
