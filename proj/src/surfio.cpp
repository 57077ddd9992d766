#include "surfio.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>
#include <utility>

#include <json.hpp>

#include "errors.hpp"

namespace solsurf::surfio {

namespace {

using json = nlohmann::ordered_json;

constexpr double kSingularBandScale = 0.02;   // half-width factor of the u = -lambda band
constexpr double kImaginaryTol = 1e-6;        // OK-point bound on |Im| / (1 + |Re|)
constexpr double kPi = 3.14159265358979323846;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::array<double, 3> real_parts(const algebra::Coeffs& c) {
    return {c.c1.real(), c.c2.real(), c.c3.real()};
}

std::array<double, 3> imag_parts(const algebra::Coeffs& c) {
    return {c.c1.imag(), c.c2.imag(), c.c3.imag()};
}

bool finite3(const std::array<double, 3>& a) {
    return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

// Fills every field the pipeline can reach; the caller has already handled
// the SINGULAR pre-mask. F00 is the centering offset (zero when disabled).
void sample_point(const immersion::ImmersionField& field, const algebra::Mat2& f00,
                  const GridConfig& config, GridPoint& pt) {
    try {
        const algebra::Mat2 fval = field.value(pt.x, pt.y) - f00;
        const algebra::Coeffs fc = algebra::decompose(algebra::traceless_part(fval));
        pt.coeffs = real_parts(fc);
        pt.coeffs_im = imag_parts(fc);
        bool tainted = false;
        for (int i = 0; i < 3; ++i)
            if (std::abs(pt.coeffs_im[i]) >= kImaginaryTol * (1.0 + std::abs(pt.coeffs[i])))
                tainted = true;

        const auto conj = field.conjugated_tangents(pt.x, pt.y);
        pt.tangent_x = real_parts(algebra::decompose(algebra::traceless_part(conj.first)));
        pt.tangent_y = real_parts(algebra::decompose(algebra::traceless_part(conj.second)));

        const auto forms =
            geometry::forms_at(field, pt.x, pt.y, config.metric, config.fd_step);
        pt.E = forms.E;
        pt.Fc = forms.Fc;
        pt.G = forms.G;
        pt.e = forms.e;
        pt.f = forms.f;
        pt.g2 = forms.g2;
        pt.normal = real_parts(algebra::decompose(forms.normal));
        pt.normal_sign = forms.normal_sign;

        const auto curv = geometry::curvatures_at(forms);
        pt.K = curv.K;
        pt.H = curv.H;
        pt.curv_degenerate = curv.degenerate;

        if (curv.degenerate) {
            pt.mask = Mask::degenerate;
            return;
        }
        if (tainted) {
            pt.mask = Mask::complex_tainted;
            return;
        }
        const bool finite = finite3(pt.coeffs) && finite3(pt.tangent_x) &&
                            finite3(pt.tangent_y) && finite3(pt.normal) &&
                            std::isfinite(pt.E) && std::isfinite(pt.Fc) &&
                            std::isfinite(pt.G) && std::isfinite(pt.e) &&
                            std::isfinite(pt.f) && std::isfinite(pt.g2) &&
                            std::isfinite(pt.K) && std::isfinite(pt.H);
        pt.mask = finite ? Mask::ok : Mask::degenerate;
    } catch (const Error&) {
        pt.mask = Mask::degenerate;
    }
}

std::string render_obj(const SurfaceGrid& grid) {
    const int nx = grid.config.nx, ny = grid.config.ny;
    std::vector<int> vid(grid.points.size(), 0);
    std::string vertices;
    int count = 0;
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        const GridPoint& pt = grid.points[i];
        if (pt.mask != Mask::ok) continue;
        vid[i] = ++count;  // OBJ indices are 1-based
        vertices += "v " + num(pt.coeffs[0]) + " " + num(pt.coeffs[1]) + " " +
                    num(pt.coeffs[2]) + "\n";
    }
    std::string faces;
    int nfaces = 0;
    auto idx = [nx](int ix, int iy) { return static_cast<std::size_t>(iy) * nx + ix; };
    for (int iy = 0; iy + 1 < ny; ++iy) {
        for (int ix = 0; ix + 1 < nx; ++ix) {
            const int a = vid[idx(ix, iy)], b = vid[idx(ix + 1, iy)];
            const int c = vid[idx(ix + 1, iy + 1)], d = vid[idx(ix, iy + 1)];
            if (!a || !b || !c || !d) continue;  // a masked corner drops the quad
            faces += "f " + std::to_string(a) + " " + std::to_string(b) + " " +
                     std::to_string(c) + "\n";
            faces += "f " + std::to_string(a) + " " + std::to_string(c) + " " +
                     std::to_string(d) + "\n";
            nfaces += 2;
        }
    }
    std::string out = "# surface mesh: " + std::to_string(count) + " vertices, " +
                      std::to_string(nfaces) + " triangles\n";
    out += vertices;
    out += faces;
    return out;
}

std::string render_csv(const SurfaceGrid& grid) {
    std::string out = "x,y,F1,F2,F3,K,H,mask\n";
    for (const GridPoint& pt : grid.points) {
        out += num(pt.x) + "," + num(pt.y) + "," + num(pt.coeffs[0]) + "," +
               num(pt.coeffs[1]) + "," + num(pt.coeffs[2]) + "," + num(pt.K) + "," +
               num(pt.H) + "," + mask_name(pt.mask) + "\n";
    }
    return out;
}

json config_json(const SurfaceGrid& grid) {
    const GridConfig& c = grid.config;
    json j;
    j["model"] = {{"kind", model::kind_name(c.model.kind)},
                  {"k", c.model.k},
                  {"epsilon", c.model.epsilon},
                  {"k1", c.model.k1},
                  {"k2", c.model.k2}};
    j["lambda"] = c.lambda;
    j["form"] = laxpair::form_name(grid.form_used);
    json alpha = json::array();
    for (double a : c.spec.alpha) alpha.push_back(a);
    j["surface"] = {{"alpha", alpha},
                    {"a_lambda", c.spec.a_lambda},
                    {"gauge", immersion::gauge_name(c.spec.gauge)},
                    {"symmetry", "ux"}};
    j["metric"] = geometry::metric_name(c.metric);
    j["x_range"] = {c.x_min, c.x_max};
    j["y_range"] = {c.y_min, c.y_max};
    j["nx"] = c.nx;
    j["ny"] = c.ny;
    j["center"] = c.center;
    j["fd_step"] = c.fd_step;
    return j;
}

json diagnostics_json(const SurfaceGrid& grid) {
    json j;
    j["g"] = grid.g;
    j["sqrt_abs_g"] = std::sqrt(std::abs(grid.g));
    if (grid.g < 0.0) {
        j["regime"] = "periodic";
        j["y_period"] = 2.0 * kPi / std::sqrt(-grid.g);
    } else if (grid.g > 0.0) {
        j["regime"] = "exponential";
        j["growth_rate"] = 2.0 * std::sqrt(grid.g);
    } else {
        j["regime"] = "degenerate";
    }
    j["singular_band"] = singular_band(grid.config.lambda);
    j["mask_counts"] = {{"OK", grid.mask_counts[0]},
                        {"SINGULAR", grid.mask_counts[1]},
                        {"DEGENERATE", grid.mask_counts[2]},
                        {"COMPLEX", grid.mask_counts[3]}};
    j["notes"] = grid.notes;
    return j;
}

json comparison_json(const geometry::ComparisonReport& rep) {
    json j;
    j["k"] = rep.k;
    j["lambda"] = rep.lambda;
    j["xs"] = rep.xs;
    j["notes"] = rep.notes;
    json entries = json::array();
    for (const auto& entry : rep.entries) {
        entries.push_back({{"surface", entry.surface},
                           {"quantity", entry.quantity},
                           {"x", entry.x},
                           {"reference", entry.reference},
                           {"numeric", entry.numeric},
                           {"abs_dev", entry.abs_dev},
                           {"rel_dev", entry.rel_dev},
                           {"note", entry.note}});
    }
    j["entries"] = std::move(entries);
    return j;
}

std::string render_json(const SurfaceGrid& grid) {
    json j;
    j["config"] = config_json(grid);
    j["diagnostics"] = diagnostics_json(grid);
    j["comparison"] = grid.comparison ? comparison_json(*grid.comparison) : json(nullptr);
    json pts = json::array();
    for (const GridPoint& pt : grid.points) {
        pts.push_back(
            {{"x", pt.x},
             {"y", pt.y},
             {"mask", mask_name(pt.mask)},
             {"F", pt.coeffs},
             {"F_im", pt.coeffs_im},
             {"tangent_x", pt.tangent_x},
             {"tangent_y", pt.tangent_y},
             {"forms",
              {{"E", pt.E},
               {"F", pt.Fc},
               {"G", pt.G},
               {"e", pt.e},
               {"f", pt.f},
               {"g2", pt.g2},
               {"normal", pt.normal},
               {"normal_sign", pt.normal_sign}}},
             {"curvature", {{"K", pt.K}, {"H", pt.H}, {"degenerate", pt.curv_degenerate}}}});
    }
    j["points"] = std::move(pts);
    return j.dump(1);
}

} // namespace

const char* mask_name(Mask mask) {
    switch (mask) {
        case Mask::ok: return "OK";
        case Mask::singular: return "SINGULAR";
        case Mask::degenerate: return "DEGENERATE";
        case Mask::complex_tainted: return "COMPLEX";
    }
    return "OK";
}

const char* format_name(Format format) {
    switch (format) {
        case Format::obj: return "obj";
        case Format::csv: return "csv";
        case Format::json: return "json";
    }
    return "obj";
}

std::optional<Format> format_from_name(const std::string& name) {
    if (name == "obj") return Format::obj;
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    return std::nullopt;
}

double SurfaceGrid::x_at(int ix) const {
    return config.x_min + (config.x_max - config.x_min) * ix / (config.nx - 1);
}

double SurfaceGrid::y_at(int iy) const {
    return config.y_min + (config.y_max - config.y_min) * iy / (config.ny - 1);
}

const GridPoint& SurfaceGrid::at(int ix, int iy) const {
    return points[static_cast<std::size_t>(iy) * config.nx + ix];
}

double singular_band(double lambda) { return kSingularBandScale * (1.0 + std::abs(lambda)); }

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const char* where) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) known = true;
        if (!known)
            raise(errc::invalid_argument,
                  std::string("unknown ") + where + " key '" + item.key() + "'");
    }
}

} // namespace

GridConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& err) {
        raise(errc::invalid_argument, std::string("config parse: ") + err.what());
    }
    if (!j.is_object()) raise(errc::invalid_argument, "config must be a JSON object");

    GridConfig config;
    try {
        reject_unknown_keys(j,
                            {"model", "lambda", "form", "surface", "metric", "x_range",
                             "y_range", "nx", "ny", "center", "fd_step"},
                            "config");
        if (j.contains("model")) {
            const json& m = j["model"];
            reject_unknown_keys(m, {"kind", "k", "epsilon", "k1", "k2"}, "model");
            const std::string kind_text = m.value("kind", "sn");
            const auto kind = model::kind_from_name(kind_text);
            if (!kind || *kind == model::Kind::custom)
                raise(errc::invalid_argument,
                      "model kind must be one of sn, cn, dn (got '" + kind_text + "')");
            config.model = model::make_model(*kind, m.value("k", 0.5),
                                             m.value("epsilon", 1));
        }
        config.lambda = j.value("lambda", config.lambda);
        if (j.contains("form") && !j["form"].is_null()) {
            const std::string name = j["form"].get<std::string>();
            const auto form = laxpair::form_from_name(name);
            if (!form)
                raise(errc::invalid_argument, "unknown matrix form '" + name + "'");
            config.form = form;
        }
        if (j.contains("surface")) {
            const json& s = j["surface"];
            reject_unknown_keys(s, {"alpha", "a_lambda", "gauge", "symmetry"}, "surface");
            if (s.contains("alpha")) {
                const json& alpha = s["alpha"];
                if (!alpha.is_array() || alpha.size() != 6)
                    raise(errc::invalid_argument, "surface.alpha must hold 6 weights");
                for (std::size_t i = 0; i < 6; ++i)
                    config.spec.alpha[i] = alpha[i].get<double>();
            }
            config.spec.a_lambda = s.value("a_lambda", config.spec.a_lambda);
            if (s.contains("gauge")) {
                const std::string name = s["gauge"].get<std::string>();
                const auto gauge = immersion::gauge_from_name(name);
                if (!gauge)
                    raise(errc::invalid_argument, "unknown gauge choice '" + name + "'");
                config.spec.gauge = *gauge;
            }
            if (s.contains("symmetry") && s["symmetry"].get<std::string>() != "ux")
                raise(errc::invalid_argument, "the only supported symmetry is 'ux'");
        }
        if (j.contains("metric")) {
            const std::string name = j["metric"].get<std::string>();
            const auto metric = geometry::metric_from_name(name);
            if (!metric)
                raise(errc::invalid_argument, "unknown metric '" + name + "'");
            config.metric = *metric;
        }
        for (const char* key : {"x_range", "y_range"}) {
            if (!j.contains(key)) continue;
            const json& range = j[key];
            if (!range.is_array() || range.size() != 2)
                raise(errc::invalid_argument,
                      std::string(key) + " must be a two-element array");
            const double lo = range[0].get<double>(), hi = range[1].get<double>();
            if (std::string(key) == "x_range") {
                config.x_min = lo;
                config.x_max = hi;
            } else {
                config.y_min = lo;
                config.y_max = hi;
            }
        }
        config.nx = j.value("nx", config.nx);
        config.ny = j.value("ny", config.ny);
        config.center = j.value("center", config.center);
        config.fd_step = j.value("fd_step", config.fd_step);
    } catch (const json::exception& err) {
        raise(errc::invalid_argument, std::string("config value: ") + err.what());
    }
    return config;
}

SurfaceGrid sample_grid(const GridConfig& config) {
    if (config.nx < 2 || config.ny < 2)
        raise(errc::invalid_argument, "grid resolution must be at least 2x2");
    if (!(config.x_min < config.x_max) || !(config.y_min < config.y_max))
        raise(errc::invalid_argument, "grid ranges must be non-empty intervals");
    if (!(config.fd_step > 0.0))
        raise(errc::invalid_argument, "fd_step must be positive");

    SurfaceGrid grid;
    grid.config = config;

    immersion::ImmersionField field(config.model, config.lambda, config.spec, config.form);
    grid.form_used = field.context().form;
    grid.g = field.context().g;

    double lo = config.x_min - 0.1, hi = config.x_max + 0.1;
    if (config.center) {
        lo = std::min(lo, -0.1);
        hi = std::max(hi, 0.1);
    }
    field.prepare(lo, hi);

    algebra::Mat2 f00{};
    if (config.center) f00 = field.value(0.0, 0.0);

    const int nx = config.nx, ny = config.ny;
    grid.points.resize(static_cast<std::size_t>(nx) * ny);
    const double band = singular_band(config.lambda);

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int ix = next.fetch_add(1);
            if (ix >= nx) return;
            const double x = grid.x_at(ix);
            bool singular = false, column_dead = false;
            try {
                const auto p = model::jet(config.model, x);
                singular = std::abs(p.u + config.lambda) < band;
            } catch (const Error&) {
                column_dead = true;
            }
            for (int iy = 0; iy < ny; ++iy) {
                GridPoint& pt = grid.points[static_cast<std::size_t>(iy) * nx + ix];
                pt.x = x;
                pt.y = grid.y_at(iy);
                if (column_dead) {
                    pt.mask = Mask::degenerate;
                } else if (singular) {
                    pt.mask = Mask::singular;
                } else {
                    sample_point(field, f00, config, pt);
                }
            }
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned nthreads = std::min<unsigned>(hw, static_cast<unsigned>(nx));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const GridPoint& pt : grid.points)
        ++grid.mask_counts[static_cast<std::size_t>(pt.mask)];
    if (grid.mask_counts[0] == 0)
        raise(errc::domain_error, "every grid point masked; nothing to export");

    char note[160];
    if (grid.g < 0.0) {
        std::snprintf(note, sizeof note,
                      "discriminant g = %g < 0: periodic regime, y-period %.12g", grid.g,
                      2.0 * kPi / std::sqrt(-grid.g));
    } else if (grid.g > 0.0) {
        std::snprintf(note, sizeof note,
                      "discriminant g = %g > 0: exponential regime, growth rate %.12g",
                      grid.g, 2.0 * std::sqrt(grid.g));
    } else {
        std::snprintf(note, sizeof note, "discriminant g = 0: degenerate spectrum");
    }
    grid.notes.push_back(note);

    try {
        grid.comparison =
            geometry::comparison_report(config.model, config.lambda, {0.0, 0.8, 1.5});
    } catch (const Error& err) {
        grid.notes.push_back(std::string("comparison report skipped: ") + err.what());
    }
    return grid;
}

std::string render(const SurfaceGrid& grid, Format format) {
    switch (format) {
        case Format::obj: return render_obj(grid);
        case Format::csv: return render_csv(grid);
        case Format::json: return render_json(grid);
    }
    raise(errc::invalid_argument, "unknown export format");
}

void export_grid(const SurfaceGrid& grid, Format format, const std::string& path) {
    const std::string bytes = render(grid, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(errc::io_error, "cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out.good()) raise(errc::io_error, "write failed for '" + path + "'");
}

} // namespace solsurf::surfio
