#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "wqed/types.hpp"

// Run configurations for the command-line front end: parsing, validation, dispatch, output.
namespace wqed::cli {

// bad or missing field in a run configuration; the message names the field
class SchemaError : public DomainError {
public:
    using DomainError::DomainError;
};

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 0;
    std::string scale = "linear";   // linear | log

    std::vector<double> values() const;
};

struct OutputSpec {
    std::string path;
    std::string format = "csv";   // csv | json
};

struct RunConfig {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
    std::optional<GridSpec> grid;
    OutputSpec output;
    std::optional<std::uint64_t> seed;
};

const std::vector<std::string>& commands();

// parses and validates, including the command's parameter block
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);
// recovers the configuration echoed in the header of an emitted file
RunConfig config_from_output(const std::string& text);

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> footer;
    nlohmann::json extra;   // only written in json format
};

Table run(const RunConfig& cfg, unsigned threads = 1);

std::string render(const RunConfig& cfg, const Table& table);
void write_output(const RunConfig& cfg, const Table& table);

// 0 success, 2 schema or domain error, 3 convergence failure, 1 anything else
int exit_code_for(const std::exception& e);

std::string library_version();
// shortest round-trip decimal, "inf"/"-inf"/"nan" for non-finite values
std::string format_number(double v);

}  // namespace wqed::cli
