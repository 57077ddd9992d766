// Exercises the C boundary the way an external consumer would: JSON config
// strings in, status codes and heap strings out, no C++ headers from the
// library side.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <solsurf/solsurf.h>

namespace {

constexpr const char* kSmallGrid = R"({
    "model": {"kind": "sn", "k": 0.5},
    "lambda": 1.2,
    "surface": {"alpha": [1, 0, 0, 0, 0, 0]},
    "x_range": [-1.0, 1.0], "y_range": [-0.6, 0.6],
    "nx": 5, "ny": 4
})";

std::string take(char* text) {
    REQUIRE(text != nullptr);
    std::string out = text;
    solsurf_string_free(text);
    return out;
}

} // namespace

TEST_CASE("version and status names are stable") {
    CHECK(std::string(solsurf_version()) == "1.0.0");
    CHECK(std::string(solsurf_status_name(SOLSURF_OK)) == "ok");
    CHECK(std::string(solsurf_status_name(SOLSURF_INVALID_ARGUMENT)) == "invalid_argument");
    CHECK(std::string(solsurf_status_name(SOLSURF_IO_ERROR)) == "io_error");
    CHECK(std::string(solsurf_status_name(SOLSURF_INTERNAL_ERROR)) == "internal_error");
    CHECK(std::string(solsurf_status_name(55)) == "unknown");
}

TEST_CASE("sample, render, and inspect a grid through the boundary") {
    solsurf_grid* grid = nullptr;
    REQUIRE(solsurf_grid_sample(kSmallGrid, &grid) == SOLSURF_OK);
    REQUIRE(grid != nullptr);
    CHECK(std::string(solsurf_last_error()).empty());

    size_t counts[4] = {0, 0, 0, 0};
    REQUIRE(solsurf_grid_mask_counts(grid, counts) == SOLSURF_OK);
    CHECK(counts[0] + counts[1] + counts[2] + counts[3] == 20);
    CHECK(counts[0] == 20);  // this lattice avoids every masked region

    char* obj = nullptr;
    REQUIRE(solsurf_grid_render(grid, "obj", &obj) == SOLSURF_OK);
    const std::string obj_text = take(obj);
    CHECK(obj_text.rfind("# surface mesh:", 0) == 0);

    char* csv = nullptr;
    REQUIRE(solsurf_grid_render(grid, "csv", &csv) == SOLSURF_OK);
    const std::string csv_text = take(csv);
    CHECK(csv_text.rfind("x,y,F1,F2,F3,K,H,mask", 0) == 0);

    char* json = nullptr;
    REQUIRE(solsurf_grid_render(grid, "json", &json) == SOLSURF_OK);
    const std::string json_text = take(json);
    CHECK(json_text.find("\"config\"") != std::string::npos);
    CHECK(json_text.find("\"points\"") != std::string::npos);

    char* summary = nullptr;
    REQUIRE(solsurf_grid_summary(grid, &summary) == SOLSURF_OK);
    const std::string summary_text = take(summary);
    CHECK(summary_text.find("grid 5x4") != std::string::npos);
    CHECK(summary_text.find("OK 20") != std::string::npos);
    CHECK(summary_text.find("periodic") != std::string::npos);

    solsurf_grid_free(grid);
}

TEST_CASE("identical configs render identical bytes across handles") {
    solsurf_grid* g1 = nullptr;
    solsurf_grid* g2 = nullptr;
    REQUIRE(solsurf_grid_sample(kSmallGrid, &g1) == SOLSURF_OK);
    REQUIRE(solsurf_grid_sample(kSmallGrid, &g2) == SOLSURF_OK);
    for (const char* fmt : {"obj", "csv", "json"}) {
        char* b1 = nullptr;
        char* b2 = nullptr;
        REQUIRE(solsurf_grid_render(g1, fmt, &b1) == SOLSURF_OK);
        REQUIRE(solsurf_grid_render(g2, fmt, &b2) == SOLSURF_OK);
        CHECK(take(b1) == take(b2));
    }
    solsurf_grid_free(g1);
    solsurf_grid_free(g2);
}

TEST_CASE("export writes files and surfaces io failures") {
    solsurf_grid* grid = nullptr;
    REQUIRE(solsurf_grid_sample(kSmallGrid, &grid) == SOLSURF_OK);

    const char* path = "/tmp/solsurf_capi_export.csv";
    REQUIRE(solsurf_grid_export(grid, "csv", path) == SOLSURF_OK);
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream body;
    body << in.rdbuf();
    char* bytes = nullptr;
    REQUIRE(solsurf_grid_render(grid, "csv", &bytes) == SOLSURF_OK);
    CHECK(body.str() == take(bytes));
    std::remove(path);

    CHECK(solsurf_grid_export(grid, "csv", "/nonexistent-dir/out.csv") ==
          SOLSURF_IO_ERROR);
    CHECK(std::string(solsurf_last_error()).find("/nonexistent-dir/out.csv") !=
          std::string::npos);
    solsurf_grid_free(grid);
}

TEST_CASE("error paths set status and message") {
    solsurf_grid* grid = nullptr;
    CHECK(solsurf_grid_sample(nullptr, &grid) == SOLSURF_INVALID_ARGUMENT);
    CHECK(solsurf_grid_sample("{", &grid) == SOLSURF_INVALID_ARGUMENT);
    CHECK(std::string(solsurf_last_error()).find("config parse") != std::string::npos);
    CHECK(solsurf_grid_sample(R"({"bogus": 1})", &grid) == SOLSURF_INVALID_ARGUMENT);
    CHECK(solsurf_grid_sample(R"({"nx": 1})", &grid) == SOLSURF_INVALID_ARGUMENT);
    CHECK(grid == nullptr);

    // A lattice that sits entirely inside the singular band masks everywhere.
    CHECK(solsurf_grid_sample(R"({
        "lambda": 0.5,
        "x_range": [-0.545, -0.515], "y_range": [0.0, 0.2],
        "nx": 2, "ny": 2
    })",
                              &grid) == SOLSURF_DOMAIN_ERROR);
    CHECK(grid == nullptr);

    REQUIRE(solsurf_grid_sample(kSmallGrid, &grid) == SOLSURF_OK);
    char* bytes = nullptr;
    CHECK(solsurf_grid_render(grid, "stl", &bytes) == SOLSURF_INVALID_ARGUMENT);
    CHECK(bytes == nullptr);
    CHECK(solsurf_grid_render(nullptr, "obj", &bytes) == SOLSURF_INVALID_ARGUMENT);
    solsurf_grid_free(grid);
    solsurf_grid_free(nullptr);  // explicit no-op
}

TEST_CASE("the validation suite runs through the boundary") {
    const char* config = R"({
        "model": {"kind": "sn", "k": 0.5},
        "lambda": 1.2,
        "x_range": [-2.0, 2.0], "y_range": [-1.5, 1.5]
    })";
    char* report = nullptr;
    int failures = -1;
    REQUIRE(solsurf_validate(config, &report, &failures) == SOLSURF_OK);
    const std::string text = take(report);
    CHECK(failures == 0);
    CHECK(text.find("[PASS]") != std::string::npos);
    CHECK(text.find("checks passed") != std::string::npos);
}

TEST_CASE("the frame report runs through the boundary") {
    const char* config = R"({
        "model": {"kind": "sn", "k": 0.5},
        "lambda": 0.5,
        "x_range": [-1.2, 1.2], "y_range": [-1.0, 1.0]
    })";
    char* text = nullptr;
    REQUIRE(solsurf_wavefunction_report(config, &text) == SOLSURF_OK);
    const std::string report = take(text);
    CHECK(report.find("lsp_x") != std::string::npos);
    CHECK(report.find("eigen-basis") != std::string::npos);
}
