#include "flatband/store.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace flatband {

ResultStore::ResultStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ResultStore::write_csv(const std::string& name, const std::vector<std::string>& header,
                            const std::vector<std::vector<CsvCell>>& rows) {
    std::ofstream out(dir_ / name);
    if (!out) throw std::runtime_error("ResultStore: cannot open " + name);
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("ResultStore: row width does not match the header");
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            if (std::holds_alternative<double>(row[i]))
                out << format_g17(std::get<double>(row[i]));
            else if (std::holds_alternative<long long>(row[i]))
                out << std::get<long long>(row[i]);
            else
                out << std::get<std::string>(row[i]);
        }
        out << "\n";
    }
    files_.push_back(name);
}

std::string ResultStore::config_hash(const std::string& config_json) {
    // nlohmann::json objects iterate in key order, so dump() is canonical
    std::string canon = nlohmann::json::parse(config_json).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

void ResultStore::finalize(const std::string& command, const std::string& config_json) {
    nlohmann::json manifest;
    manifest["command"] = command;
    manifest["config"] = nlohmann::json::parse(config_json);
    manifest["config_hash"] = config_hash(config_json);
    manifest["files"] = files_;
    manifest["version"] = "0.1.0";
    auto now = std::chrono::system_clock::now();
    manifest["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    std::ofstream out(dir_ / "manifest.json");
    out << manifest.dump(2) << "\n";
}

}  // namespace flatband
