#include "cpflow/io.hpp"

#include "cpflow/error.hpp"
#include "cpflow/kernels.hpp"
#include "cpflow/parallel.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace cpflow::io {

namespace fs = std::filesystem;

Json complex_json(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json result_document(const std::string& command, const Json& config, const Json& result) {
    Json doc;
    doc["schema"] = "cpflow.result";
    doc["schema_version"] = json_schema_version;
    doc["toolkit_version"] = CPFLOW_VERSION;
    doc["command"] = command;
    doc["config"] = config;
    doc["result"] = result;

    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    doc["metadata"] = Json{{"timestamp", ts.str()},
                           {"threads", thread_cap()},
                           {"isa", std::string(kernels::isa_name(kernels::active_isa()))}};
    return doc;
}

std::string payload(const Json& document) {
    Json copy = document;
    copy.erase("metadata");
    return copy.dump(2);
}

std::string format_number(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string csv_document(const std::string& command, const Json& config, const CsvTable& table) {
    std::ostringstream os;
    os << "# cpflow " << CPFLOW_VERSION << " " << command << " csv_schema_version=" << csv_schema_version << "\n";
    os << "# config " << config.dump() << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

fs::path resolve_output(const std::string& explicit_path, const std::string& stem, const std::string& ext) {
    if (!explicit_path.empty()) return explicit_path;
    if (const char* dir = std::getenv(output_dir_env); dir && *dir) return fs::path(dir) / (stem + "." + ext);
    return {};
}

void require_writable(const fs::path& path) {
    if (path.empty()) return;
    std::error_code ec;
    if (fs::exists(path, ec)) {
        if (fs::is_directory(path, ec)) throw ConfigError("output path is a directory: " + path.string());
        if (::access(path.c_str(), W_OK) != 0) throw ConfigError("output file is not writable: " + path.string());
        return;
    }
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    if (!fs::is_directory(dir, ec)) throw ConfigError("output directory does not exist: " + dir.string());
    if (::access(dir.c_str(), W_OK) != 0) throw ConfigError("output directory is not writable: " + dir.string());
}

void write_file(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot open " + tmp.string());
        out << text;
        if (!out) throw Error("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace cpflow::io
