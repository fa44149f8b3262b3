#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace kaczmod::cli {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

struct CsvTable {
    std::string name;  // file name, e.g. "convergence.csv"
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
};

/// "\n"-terminated CSV text; fields are numbers or plain identifiers, no quoting needed.
std::string render_csv(const CsvTable& table);

/// Writes CSV tables and/or summary.json into dir (created if needed).
/// Returns the paths written, in order.
std::vector<std::string> emit_outputs(const std::filesystem::path& dir, const std::vector<CsvTable>& tables,
                                      const nlohmann::json& summary, bool write_csv, bool write_json);

}  // namespace kaczmod::cli
