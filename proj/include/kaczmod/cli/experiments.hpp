#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "kaczmod/cli/config.hpp"
#include "kaczmod/cli/output.hpp"
#include "kaczmod/measures.hpp"

namespace kaczmod::cli {

/// Everything a run produces before it touches the filesystem. Summary
/// scalars are objects {"value": ..., plus truncation/tolerance context}.
struct ExperimentOutput {
    nlohmann::json summary;
    std::vector<CsvTable> tables;
};

/// Deterministic in (config, seed). Mathematical verdicts are results, not errors.
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Runs, stamps file paths and wall-clock into the summary, writes outputs.
nlohmann::json run_and_emit(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// The measure a config describes; library validation errors are rethrown as
/// ConfigError naming the field.
MeasureModel build_measure(const MeasureSpec& spec);
MeasureFamily build_family(const FamilySpec& spec);

}  // namespace kaczmod::cli
