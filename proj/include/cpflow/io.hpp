#pragma once

#include "cpflow/spectral.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cpflow::io {

using Json = nlohmann::ordered_json;

/// Bumped on any breaking change of the JSON result layout.
inline constexpr int json_schema_version = 1;
/// Bumped on any breaking change of CSV columns.
inline constexpr int csv_schema_version = 1;

/// Environment variable naming the default output directory.
inline constexpr const char* output_dir_env = "CPFLOW_OUTPUT_DIR";

Json complex_json(cplx z);

/// Result document: deterministic payload plus a separate metadata block
/// (timestamp, threads, instruction set) that is excluded from comparisons.
///   { schema, schema_version, toolkit_version, command, config, result, metadata }
Json result_document(const std::string& command, const Json& config, const Json& result);
/// The document without its metadata block, serialised.
std::string payload(const Json& document);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

/// Comment header (# lines with toolkit version, schema and the resolved
/// config as JSON) followed by the table.
std::string csv_document(const std::string& command, const Json& config, const CsvTable& table);

std::string format_number(double v);

/// Resolves where a command writes: the explicit path, else
/// $CPFLOW_OUTPUT_DIR/<stem>.<ext>, else empty (standard output).
std::filesystem::path resolve_output(const std::string& explicit_path, const std::string& stem,
                                     const std::string& ext);

/// Throws ConfigError unless `path` can be created or overwritten.
void require_writable(const std::filesystem::path& path);

/// Writes through a temporary file and rename.
void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

} // namespace cpflow::io
