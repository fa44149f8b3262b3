#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <unistd.h>

#include "kaczmod/cli/config.hpp"
#include "kaczmod/cli/experiments.hpp"
#include "kaczmod/cli/output.hpp"

using namespace kaczmod::cli;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

const char* kMinimal = R"({
  "experiment": "stationary-single",
  "measure": {"kind": "atomic", "atoms": [{"position": 0.0, "weight": 1.0}]}
})";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
    const auto c = parse_config(kMinimal);
    CHECK(c.experiment == Experiment::StationarySingle);
    CHECK(c.numeric.max_iter == 200);
    CHECK(c.numeric.tol == 1e-10);
    CHECK(c.numeric.truncation == 100);
    CHECK(c.numeric.r_max == 0.9);
    CHECK_FALSE(c.numeric.seed.has_value());
    CHECK(c.module.realization == "trig");
    CHECK(to_json(c)["numeric"]["truncation"] == 100);
}

TEST_CASE("config errors name the offending field") {
    // Measure validation happens when the measure is built, still as a ConfigError.
    const auto c = parse_config(R"({"experiment": "stationary-single",
        "measure": {"kind": "atomic", "atoms": [{"position": 0.0, "weight": 0.5}, {"position": 0.5, "weight": 0.4}]}})");
    try {
        build_measure(*c.measure);
        FAIL("weights summing to 0.9 were accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("weights") != std::string::npos);
    }

    const auto unknown = error_of(R"({"experiment": "finite-periodic", "relaxation": 0.5,
        "numeric": {"seed": 1}})");
    CHECK(unknown.find("relaxation") != std::string::npos);

    const auto syntax = error_of("{\n  \"experiment\": \"stationary-single\",\n  \"measure\": {\n}}}\n");
    CHECK(syntax.find("line 4") != std::string::npos);

    CHECK(error_of(R"({"experiment": "warp-drive"})").find("experiment") != std::string::npos);
    CHECK(error_of(R"({"experiment": "finite-periodic"})").find("seed") != std::string::npos);
    CHECK(error_of(R"({"experiment": "stationary-single"})").find("measure") != std::string::npos);
    CHECK(error_of(R"({"experiment": "stationary-family"})").find("family") != std::string::npos);
    CHECK_FALSE(error_of(std::string(kMinimal).replace(1, 0, R"("numeric": {"tol": -1},)")).empty());
}

TEST_CASE("doubles are written shortest round-trip") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, 6.02214076e23, std::nextafter(1.0, 2.0)}) {
        const auto s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
}

TEST_CASE("CSV rendering") {
    CsvTable t{"x.csv", {"iter", "residual_norm", "defect_norm"}, {}};
    t.add_row({"0", "1", "0.5"});
    CHECK(render_csv(t) == "iter,residual_norm,defect_norm\n0,1,0.5\n");
    CHECK_THROWS(t.add_row({"1"}));
}

TEST_CASE("stationary single: Dirac is SingularLike with Sarason sum 1") {
    auto c = parse_config(kMinimal);
    c.numeric.truncation = 30;
    c.numeric.max_iter = 20;
    const auto out = run_experiment(c);
    CHECK(out.summary["verdicts"]["fiber"] == "SingularLike");
    CHECK(out.summary["scalars"]["sarason_sum"]["value"].get<double>() == 1.0);
    bool has_conv = false;
    for (const auto& t : out.tables)
        if (t.name == "convergence.csv") {
            has_conv = true;
            CHECK(t.header == std::vector<std::string>{"iter", "residual_norm", "defect_norm"});
        } else if (t.name == "identity_residuals.csv") {
            CHECK(t.header == std::vector<std::string>{"check_name", "n", "j", "residual"});
        }
    CHECK(has_conv);
}

TEST_CASE("stationary single: mixture is Obstructed") {
    const auto c = parse_config(R"({"experiment": "stationary-single",
        "measure": {"kind": "mixture", "alpha": 0.5, "atoms": [{"position": 0.0, "weight": 1.0}]},
        "target": {"kind": "exponential", "index": 1},
        "numeric": {"truncation": 40, "max_iter": 30}})");
    const auto out = run_experiment(c);
    CHECK(out.summary["verdicts"]["fiber"] == "Obstructed");
    CHECK(out.summary["scalars"]["sarason_sum"]["value"].get<double>() == doctest::Approx(1.0 / 3.0));
    CHECK_FALSE(out.summary["verdicts"]["converged"].get<bool>());
}

TEST_CASE("shipped configs run deterministically") {
    const std::filesystem::path dir = KACZMOD_CONFIG_DIR;
    const auto periodic = load_config((dir / "finite_periodic_coisometry.json").string());
    const auto a = run_experiment(periodic);
    const auto b = run_experiment(periodic);
    CHECK(a.summary == b.summary);
    CHECK(a.summary["scalars"]["contraction_norm"]["value"].get<double>() < 1.0);

    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        CAPTURE(entry.path().string());
        auto c = load_config(entry.path().string());
        c.numeric.max_iter = std::min<std::size_t>(c.numeric.max_iter, 60);
        CHECK_NOTHROW(run_experiment(c));
    }
}

TEST_CASE("run_and_emit writes the requested files") {
    const auto dir = std::filesystem::temp_directory_path() / ("kaczmod_cli_test_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    auto c = parse_config(kMinimal);
    c.numeric.truncation = 20;
    c.numeric.max_iter = 10;
    const auto summary = run_and_emit(c, dir);
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK(std::filesystem::exists(dir / "convergence.csv"));
    CHECK(slurp(dir / "convergence.csv").rfind("iter,residual_norm,defect_norm\n", 0) == 0);
    CHECK(nlohmann::json::parse(slurp(dir / "summary.json"))["experiment"] == "stationary-single");
    CHECK(summary.contains("wall_clock_seconds"));

    c.output.formats = {"json"};
    std::filesystem::remove_all(dir);
    run_and_emit(c, dir);
    CHECK_FALSE(std::filesystem::exists(dir / "convergence.csv"));
    std::filesystem::remove_all(dir);
}
