#include "kaczmod/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace kaczmod::cli {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (result.ec != std::errc{}) throw std::runtime_error("format_double(): conversion failed");
    return std::string(buffer, result.ptr);
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
        throw std::logic_error(name + ": row has " + std::to_string(row.size()) + " fields, header has " +
                               std::to_string(header.size()));
    rows.push_back(std::move(row));
}

std::string render_csv(const CsvTable& table) {
    std::string out;
    auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i];
        }
        out += '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::vector<std::string> emit_outputs(const std::filesystem::path& dir, const std::vector<CsvTable>& tables,
                                      const nlohmann::json& summary, bool write_csv, bool write_json) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<std::string> written;
    if (write_csv) {
        for (const auto& t : tables) {
            write_file(dir / t.name, render_csv(t));
            written.push_back((dir / t.name).string());
        }
    }
    if (write_json) {
        write_file(dir / "summary.json", summary.dump(2) + "\n");
        written.push_back((dir / "summary.json").string());
    }
    return written;
}

}  // namespace kaczmod::cli
