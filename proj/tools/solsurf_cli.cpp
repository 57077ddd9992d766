// Command-line front end for the soliton-surface library. Every subcommand
// talks to the shared C library through its JSON-config boundary: a config
// file supplies defaults, explicit flags override individual entries, and the
// composed config is handed across as one string.
#include <array>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <solsurf/solsurf.h>

using nlohmann::json;

namespace {

constexpr int kExitFailure = 1; // failed checks or a runtime refusal
constexpr int kExitUsage = 2;   // bad flags, config file, or values

[[noreturn]] void die_usage(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(kExitUsage);
}

[[noreturn]] void die_status(int status) {
    std::cerr << "error: " << solsurf_last_error() << "\n";
    std::exit(status == SOLSURF_INVALID_ARGUMENT ? kExitUsage : kExitFailure);
}

std::string take(char* text) {
    std::string out = text ? text : "";
    solsurf_string_free(text);
    return out;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) {
        std::cerr << "error: cannot write '" << path << "'\n";
        std::exit(kExitFailure);
    }
}

// Values bound to the flags. A single instance backs every subcommand; only
// the parsed subcommand's option counts decide which entries override the
// config file.
struct Values {
    std::string config_path, model, surface, gauge, metric, form;
    std::string format, out_path, psi_variant;
    double k = 0, epsilon = 0, lambda = 0, a_lambda = 0;
    std::vector<double> alpha, xrange, yrange;
    int nx = 0, ny = 0;
    bool center = false;
};

struct FlagSet {
    CLI::Option *config, *model, *k, *epsilon, *lambda, *surface, *alpha, *gauge,
        *a_lambda, *metric, *xr, *yr, *nx, *ny, *form, *format, *out, *psi, *center;
};

FlagSet add_flags(CLI::App* cmd, Values& v) {
    FlagSet f;
    f.config = cmd->add_option("--config", v.config_path,
                               "JSON config file; explicit flags override its entries")
                   ->check(CLI::ExistingFile);
    f.model = cmd->add_option("--model", v.model, "integrable model: sn, cn, or dn")
                  ->check(CLI::IsMember({"sn", "cn", "dn"}));
    f.k = cmd->add_option("--k", v.k, "elliptic modulus in [0, 1]");
    f.epsilon = cmd->add_option("--epsilon", v.epsilon,
                                "sign of the solution's x-derivative branch: +1 or -1");
    f.lambda = cmd->add_option("--lambda", v.lambda, "spectral parameter");
    f.surface = cmd->add_option("--surface", v.surface,
                                "surface preset: st, translation, dilation, symmetry, "
                                "gauge, combined (combined reads --alpha)")
                    ->check(CLI::IsMember(
                        {"st", "translation", "dilation", "symmetry", "gauge", "combined"}));
    f.alpha = cmd->add_option("--alpha", v.alpha,
                              "six weights blending the deformation terms: translation, "
                              "spectral, gauge, dilation-x, dilation-y, symmetry")
                  ->delimiter(',')
                  ->expected(6);
    f.gauge = cmd->add_option("--gauge", v.gauge,
                              "generator of the gauge deformation: e1, e2, e3, L, or M")
                  ->check(CLI::IsMember({"e1", "e2", "e3", "L", "M"}));
    f.a_lambda =
        cmd->add_option("--a-lambda", v.a_lambda, "scale of the spectral deformation");
    f.metric = cmd->add_option("--metric", v.metric,
                               "ambient scalar product for curvature: euclidean or killing")
                   ->check(CLI::IsMember({"euclidean", "killing"}));
    f.xr = cmd->add_option("--xrange", v.xrange, "sampling interval lo,hi along x")
               ->delimiter(',')
               ->expected(2);
    f.yr = cmd->add_option("--yrange", v.yrange, "sampling interval lo,hi along y")
               ->delimiter(',')
               ->expected(2);
    f.nx = cmd->add_option("--nx", v.nx, "grid points along x")->check(CLI::PositiveNumber);
    f.ny = cmd->add_option("--ny", v.ny, "grid points along y")->check(CLI::PositiveNumber);
    f.form = cmd->add_option("--form", v.form,
                             "spectral dependence of the pair: polynomial or rational")
                 ->check(CLI::IsMember({"polynomial", "rational"}));
    f.format = cmd->add_option("--format", v.format, "export format: obj, csv, or json")
                   ->check(CLI::IsMember({"obj", "csv", "json"}));
    f.out = cmd->add_option("--out", v.out_path, "output file (stdout when omitted)");
    f.psi = cmd->add_option("--psi-variant", v.psi_variant,
                            "closed phase antiderivative to report: quarter-log-reduced, "
                            "quarter-log, or eighth-log")
                ->check(CLI::IsMember({"quarter-log-reduced", "quarter-log", "eighth-log"}));
    f.center = cmd->add_flag("--center,!--no-center", v.center,
                             "subtract the surface value at the origin");
    return f;
}

// Rebuilds the wide CSV as the four-column curvature table.
std::string curvature_table(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::string out = "x,y,K,H,mask\n";
    std::getline(in, line); // drop the full header
    while (std::getline(in, line)) {
        std::array<std::string, 8> field;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < field.size(); ++i) {
            const std::size_t next = line.find(',', pos);
            field[i] = line.substr(pos, next == std::string::npos ? next : next - pos);
            pos = next == std::string::npos ? line.size() : next + 1;
        }
        out += field[0] + ',' + field[1] + ',' + field[5] + ',' + field[6] + ',' +
               field[7] + '\n';
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"soliton-surface toolkit: integrates moving frames of integrable "
                 "models, immerses the associated surfaces in sl(2,R), checks the "
                 "identities behind them, and exports meshes"};
    app.set_version_flag("--version", solsurf_version());
    app.require_subcommand(1);
    app.footer("exit status: 0 success, 1 failed checks or runtime refusal, 2 bad usage");

    Values v;
    std::map<const CLI::App*, FlagSet> flags;
    CLI::App* cmd_validate = app.add_subcommand(
        "validate", "run the invariant suite and print a pass/fail report plus the "
                    "closed-form comparison");
    CLI::App* cmd_surface =
        app.add_subcommand("surface", "sample a surface and export it as a mesh or table");
    CLI::App* cmd_curvature = app.add_subcommand(
        "curvature", "print per-point Gaussian and mean curvature for the sampled grid");
    CLI::App* cmd_wave = app.add_subcommand(
        "wavefunction", "print frame diagnostics: residuals, determinant drift, "
                        "path-order agreement, closed assemblies");
    for (CLI::App* cmd : {cmd_validate, cmd_surface, cmd_curvature, cmd_wave})
        flags.emplace(cmd, add_flags(cmd, v));

    CLI11_PARSE(app, argc, argv);

    const CLI::App* active = app.get_subcommands().front();
    const FlagSet& f = flags.at(active);

    // Compose the config: file first, then explicit flags on top. The file may
    // also carry the CLI-level keys format/out/psi_variant beside the grid
    // schema; they are peeled off before the config crosses the boundary.
    json cfg = json::object();
    std::string format_choice = "obj";
    std::string out_choice;
    std::string psi_choice;
    try {
        if (f.config->count()) {
            std::ifstream in(v.config_path);
            json parsed = json::parse(in, nullptr, false);
            if (parsed.is_discarded() || !parsed.is_object())
                die_usage("config file '" + v.config_path + "' is not a JSON object");
            cfg = std::move(parsed);
        }
        if (cfg.contains("format")) {
            format_choice = cfg["format"].get<std::string>();
            cfg.erase("format");
        }
        if (cfg.contains("out")) {
            out_choice = cfg["out"].get<std::string>();
            cfg.erase("out");
        }
        if (cfg.contains("psi_variant")) {
            if (!cfg["psi_variant"].is_null())
                psi_choice = cfg["psi_variant"].get<std::string>();
            cfg.erase("psi_variant");
        }

        if (f.model->count()) cfg["model"]["kind"] = v.model;
        if (f.k->count()) cfg["model"]["k"] = v.k;
        if (f.epsilon->count()) cfg["model"]["epsilon"] = v.epsilon;
        if (f.lambda->count()) cfg["lambda"] = v.lambda;
        if (f.surface->count()) {
            if (v.surface == "combined") {
                const bool has_alpha =
                    f.alpha->count() > 0 ||
                    (cfg.contains("surface") && cfg["surface"].is_object() &&
                     cfg["surface"].contains("alpha"));
                if (!has_alpha)
                    die_usage("--surface combined needs --alpha or a surface.alpha entry");
            } else {
                static const std::map<std::string, std::array<double, 6>> kPreset = {
                    {"translation", {1, 0, 0, 0, 0, 0}}, {"st", {0, 1, 0, 0, 0, 0}},
                    {"gauge", {0, 0, 1, 0, 0, 0}},       {"dilation", {0, 0, 0, 1, 1, 0}},
                    {"symmetry", {0, 0, 0, 0, 0, 1}},
                };
                cfg["surface"]["alpha"] = kPreset.at(v.surface);
            }
        }
        if (f.alpha->count()) cfg["surface"]["alpha"] = v.alpha;
        if (f.gauge->count()) cfg["surface"]["gauge"] = v.gauge;
        if (f.a_lambda->count()) cfg["surface"]["a_lambda"] = v.a_lambda;
        if (f.metric->count()) cfg["metric"] = v.metric;
        if (f.xr->count()) cfg["x_range"] = v.xrange;
        if (f.yr->count()) cfg["y_range"] = v.yrange;
        if (f.nx->count()) cfg["nx"] = v.nx;
        if (f.ny->count()) cfg["ny"] = v.ny;
        if (f.form->count()) cfg["form"] = v.form;
        if (f.center->count()) cfg["center"] = v.center;
        if (f.format->count()) format_choice = v.format;
        if (f.out->count()) out_choice = v.out_path;
        if (f.psi->count()) psi_choice = v.psi_variant;
    } catch (const json::exception& e) {
        die_usage(std::string("config file: ") + e.what());
    }
    const std::string cfg_text = cfg.dump();

    if (active == cmd_validate) {
        char* report = nullptr;
        int failures = 0;
        const int status = solsurf_validate(cfg_text.c_str(), &report, &failures);
        if (status != SOLSURF_OK) die_status(status);
        write_output(out_choice, take(report));
        return failures > 0 ? kExitFailure : 0;
    }

    if (active == cmd_surface) {
        solsurf_grid* grid = nullptr;
        int status = solsurf_grid_sample(cfg_text.c_str(), &grid);
        if (status != SOLSURF_OK) die_status(status);
        if (!out_choice.empty()) {
            status = solsurf_grid_export(grid, format_choice.c_str(), out_choice.c_str());
            if (status != SOLSURF_OK) {
                solsurf_grid_free(grid);
                die_status(status);
            }
            char* summary = nullptr;
            if (solsurf_grid_summary(grid, &summary) == SOLSURF_OK)
                std::cerr << take(summary);
            std::cerr << "wrote " << out_choice << " (" << format_choice << ")\n";
        } else {
            char* bytes = nullptr;
            status = solsurf_grid_render(grid, format_choice.c_str(), &bytes);
            if (status != SOLSURF_OK) {
                solsurf_grid_free(grid);
                die_status(status);
            }
            std::cout << take(bytes);
        }
        solsurf_grid_free(grid);
        return 0;
    }

    if (active == cmd_curvature) {
        solsurf_grid* grid = nullptr;
        int status = solsurf_grid_sample(cfg_text.c_str(), &grid);
        if (status != SOLSURF_OK) die_status(status);
        char* bytes = nullptr;
        status = solsurf_grid_render(grid, "csv", &bytes);
        solsurf_grid_free(grid);
        if (status != SOLSURF_OK) die_status(status);
        write_output(out_choice, curvature_table(take(bytes)));
        return 0;
    }

    // wavefunction: the psi-variant restriction rides beside the grid schema.
    json wcfg = cfg;
    if (!psi_choice.empty()) wcfg["psi_variant"] = psi_choice;
    char* text = nullptr;
    const int status = solsurf_wavefunction_report(wcfg.dump().c_str(), &text);
    if (status != SOLSURF_OK) die_status(status);
    write_output(out_choice, take(text));
    return 0;
}
