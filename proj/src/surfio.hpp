#pragma once
// Grid sampling of an immersed surface and mesh/report export.
//
// sample_grid runs the full per-point pipeline (jet -> Lax matrices ->
// frame -> immersion -> fundamental forms -> curvatures) over a rectangular
// (x, y) lattice and classifies every point:
//
//   OK          finite, real to tolerance, non-degenerate tangent plane
//   SINGULAR    pre-masked before evaluation: |u(x) + lambda| falls inside
//               the band 0.02 (1 + |lambda|) around the locus u = -lambda
//               where the rational realization and the closed-form phase
//               are singular
//   DEGENERATE  the tangent pair or the induced metric degenerates, or a
//               computed value is non-finite
//   COMPLEX     an imaginary residue of the surface coefficients exceeds
//               1e-6 (1 + |Re|)
//
// Exported meshes keep OK points only. All three writers format numbers at
// 17 significant digits and iterate the lattice in a fixed order, so a fixed
// config reproduces identical bytes; sampling is parallel by grid column
// (each column shares its frame propagator), which does not affect the
// output because points never interact.

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "immersion.hpp"
#include "laxpair.hpp"
#include "model.hpp"

namespace solsurf::surfio {

enum class Mask { ok, singular, degenerate, complex_tainted };

// "OK", "SINGULAR", "DEGENERATE", "COMPLEX".
const char* mask_name(Mask mask);

enum class Format { obj, csv, json };

const char* format_name(Format format);
std::optional<Format> format_from_name(const std::string& name);

// Everything a sampling run depends on. Mirrored verbatim into the JSON
// export so a result can be reproduced from its own config echo.
struct GridConfig {
    model::ModelSpec model;
    double lambda = 1.2;
    immersion::ImmersionSpec spec;
    std::optional<laxpair::FormKind> form;  // empty = kind default
    geometry::Metric metric = geometry::Metric::killing;
    double x_min = -8.0, x_max = 8.0;
    double y_min = -8.0, y_max = 8.0;
    int nx = 64, ny = 64;
    bool center = false;    // subtract F(0, 0) from every sample
    double fd_step = 1e-4;  // geometry differencing step
};

inline constexpr double kGridNaN = std::numeric_limits<double>::quiet_NaN();

// One lattice sample. Fields stay NaN when masking stopped the pipeline
// before they were computed; coefficient triples are e-basis components.
struct GridPoint {
    double x = 0.0, y = 0.0;
    Mask mask = Mask::ok;
    std::array<double, 3> coeffs{kGridNaN, kGridNaN, kGridNaN};
    std::array<double, 3> coeffs_im{kGridNaN, kGridNaN, kGridNaN};
    std::array<double, 3> tangent_x{kGridNaN, kGridNaN, kGridNaN};
    std::array<double, 3> tangent_y{kGridNaN, kGridNaN, kGridNaN};
    double E = kGridNaN, Fc = kGridNaN, G = kGridNaN;
    double e = kGridNaN, f = kGridNaN, g2 = kGridNaN;
    std::array<double, 3> normal{kGridNaN, kGridNaN, kGridNaN};
    double normal_sign = 0.0;
    double K = kGridNaN, H = kGridNaN;
    bool curv_degenerate = false;
};

struct SurfaceGrid {
    GridConfig config;
    laxpair::FormKind form_used = laxpair::FormKind::polynomial;
    double g = 0.0;  // discriminant at the run's lambda
    std::vector<GridPoint> points;  // row-major, index iy * nx + ix
    std::array<std::size_t, 4> mask_counts{};  // indexed by Mask
    std::optional<geometry::ComparisonReport> comparison;
    std::vector<std::string> notes;

    double x_at(int ix) const;
    double y_at(int iy) const;
    const GridPoint& at(int ix, int iy) const;
};

// Width of the pre-mask band around u = -lambda.
double singular_band(double lambda);

// Parse a JSON object in the schema of the export's `config` block. Missing
// keys keep their defaults; unknown keys, malformed values, and the custom
// model kind raise invalid_argument. The derived quartic coefficients k1,
// k2 are accepted for round-tripping but recomputed from kind and k.
GridConfig parse_config(const std::string& json_text);

// Samples the configured lattice. Raises invalid_argument for a lattice
// smaller than 2x2 or an empty range, and domain_error when every point
// masks; a partially masked grid is a legal result.
SurfaceGrid sample_grid(const GridConfig& config);

// The exact bytes of the export in the given format.
//   OBJ:  vertices of OK points, lattice quads split into triangles, faces
//         dropped when any corner is masked, indices compacted.
//   CSV:  header x,y,F1,F2,F3,K,H,mask then one row per lattice point.
//   JSON: config echo, spectral diagnostics, the closed-form comparison
//         report when available, and every per-point record.
std::string render(const SurfaceGrid& grid, Format format);

// render() to a file; I/O failures raise io_error naming the path.
void export_grid(const SurfaceGrid& grid, Format format, const std::string& path);

} // namespace solsurf::surfio
