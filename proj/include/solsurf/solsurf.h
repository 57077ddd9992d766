#ifndef SOLSURF_H
#define SOLSURF_H

/* C interface to the soliton-surface library.
 *
 * Every entry point returns a status code (0 = success). On failure the
 * thread-local message from solsurf_last_error() describes what went wrong.
 * Strings returned through char** out-parameters are heap-allocated and
 * must be released with solsurf_string_free().
 *
 * Configurations are JSON objects in the same schema as the `config` block
 * of the library's JSON export, for example:
 *
 *   {
 *     "model":   {"kind": "sn", "k": 0.5, "epsilon": 1},
 *     "lambda":  1.2,
 *     "form":    "polynomial",
 *     "surface": {"alpha": [1,0,0,0,0,0], "a_lambda": 1.0,
 *                 "gauge": "e1", "symmetry": "ux"},
 *     "metric":  "killing",
 *     "x_range": [-8, 8], "y_range": [-8, 8],
 *     "nx": 64, "ny": 64, "center": false, "fd_step": 1e-4
 *   }
 *
 * Missing keys take the defaults shown above.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 1-13 mirror the library's internal error conditions
 * one-to-one; the list is append-only. */
typedef enum solsurf_status {
    SOLSURF_OK = 0,
    SOLSURF_INVALID_ARGUMENT = 1,
    SOLSURF_DOMAIN_ERROR = 2,
    SOLSURF_SINGULAR_DENOMINATOR = 3,
    SOLSURF_SINGULAR_FRAME = 4,
    SOLSURF_SINGULAR_INTEGRAND = 5,
    SOLSURF_POLE_ON_PATH = 6,
    SOLSURF_TURNING_POINT = 7,
    SOLSURF_MODEL_INCONSISTENT = 8,
    SOLSURF_BRANCH_CROSSING = 9,
    SOLSURF_DEGENERATE_SPECTRUM = 10,
    SOLSURF_DEGENERATE_TANGENTS = 11,
    SOLSURF_INVARIANT_VIOLATION = 12,
    SOLSURF_IO_ERROR = 13,
    SOLSURF_INTERNAL_ERROR = 100 /* unexpected exception; message has detail */
} solsurf_status;

/* Library version, "major.minor.patch". Static storage; do not free. */
const char* solsurf_version(void);

/* Stable identifier for a status code ("ok", "io_error", ...). Static
 * storage; do not free. */
const char* solsurf_status_name(int status);

/* Message of the calling thread's most recent failure; empty string after a
 * success. Static storage; do not free. */
const char* solsurf_last_error(void);

/* Release a string returned through a char** out-parameter. NULL is a no-op. */
void solsurf_string_free(char* text);

/* A sampled surface lattice. Opaque; release with solsurf_grid_free. */
typedef struct solsurf_grid solsurf_grid;

/* Sample the surface described by config_json (see the schema above).
 * On success *out_grid owns the result. */
int solsurf_grid_sample(const char* config_json, solsurf_grid** out_grid);

void solsurf_grid_free(solsurf_grid* grid);

/* Render the grid as "obj", "csv", or "json"; *out_bytes receives the exact
 * file bytes (also NUL-terminated). Byte-identical for identical configs. */
int solsurf_grid_render(const solsurf_grid* grid, const char* format, char** out_bytes);

/* Render directly to a file. */
int solsurf_grid_export(const solsurf_grid* grid, const char* format, const char* path);

/* One-paragraph human summary: lattice shape, mask tallies, regime notes. */
int solsurf_grid_summary(const solsurf_grid* grid, char** out_text);

/* Point tallies by classification: counts[0] = OK, [1] = SINGULAR,
 * [2] = DEGENERATE, [3] = COMPLEX. */
int solsurf_grid_mask_counts(const solsurf_grid* grid, size_t counts[4]);

/* Run the config-scoped invariant suite. *out_report receives the full
 * PASS/FAIL text; *out_failures (optional, may be NULL) the number of
 * failed checks. Returns 0 even when checks fail - the status reports
 * whether the suite itself could run. */
int solsurf_validate(const char* config_json, char** out_report, int* out_failures);

/* Frame diagnostics along the configured ranges: linear-problem residuals,
 * determinant drift, path-order agreement, closed-form assembly report.
 * Accepts the grid config schema plus one optional top-level key,
 * "psi_variant" ("quarter-log-reduced" | "quarter-log" | "eighth-log"),
 * restricting the closed phase-antiderivative section to one variant. */
int solsurf_wavefunction_report(const char* config_json, char** out_text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SOLSURF_H */
