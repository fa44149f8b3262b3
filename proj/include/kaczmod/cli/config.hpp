#pragma once

// Experiment configs: one strict JSON document per run. Unknown keys are
// errors so a typo never silently falls back to a default.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace kaczmod::cli {

enum class Experiment { FinitePeriodic, StationarySingle, StationaryFamily, CauchyDiagnostics, FrameOrbit };

const char* to_string(Experiment e) noexcept;

/// Bad config: JSON syntax (with line), schema, or a value rejected by the library.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AtomSpec {
    double position = 0.0;
    double weight = 0.0;
};

struct MeasureSpec {
    std::string kind;  // atomic | lebesgue | mixture
    double alpha = 0.0;
    std::vector<AtomSpec> atoms;
};

/// Atom whose weight is affine in the parameter: intercept + slope * x.
struct FamilyAtomSpec {
    double position = 0.0;
    double intercept = 0.0;
    double slope = 0.0;
};

struct FamilySpec {
    double grid_start = 0.0;
    double grid_stop = 1.0;
    std::size_t grid_points = 1;
    double alpha = 0.0;
    std::vector<FamilyAtomSpec> atoms;
    double continuity_budget = 1.0;
    std::size_t check_frequency = 8;
};

struct ModuleSpec {
    std::string realization = "trig";  // trig | atomic
    std::optional<std::size_t> max_frequency;
};

struct TargetSpec {
    std::string kind = "exponential";  // exponential | random | coefficients
    std::size_t index = 0;
    std::size_t degree = 4;
    std::vector<double> re;
    std::vector<double> im;
};

struct PeriodicSpec {
    std::string construction = "co-isometry-example";
    std::uint64_t unitary_seed = 1;
};

struct NumericSpec {
    std::size_t max_iter = 200;
    double tol = 1e-10;
    std::size_t truncation = 100;
    double r_max = 0.9;
    std::size_t sample_points = 100;
    std::size_t test_degree = 10;
    double classification_tol = 1e-8;
    std::optional<std::uint64_t> seed;
};

struct OutputSpec {
    std::optional<std::string> directory;
    std::vector<std::string> formats{"csv", "json"};
};

struct ExperimentConfig {
    Experiment experiment = Experiment::StationarySingle;
    std::optional<MeasureSpec> measure;
    std::optional<FamilySpec> family;
    ModuleSpec module;
    TargetSpec target;
    PeriodicSpec periodic;
    NumericSpec numeric;
    OutputSpec output;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Normalized echo of a config, defaults filled in.
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace kaczmod::cli
