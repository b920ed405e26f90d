#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace flatband {

using CsvCell = std::variant<double, long long, std::string>;

// Directory of CSV artifacts with a JSON manifest.  Numbers are written with
// 17 significant digits so reruns with the same configuration are
// byte-identical; the manifest records the command, a canonical config hash,
// timestamps and the emitted files.
class ResultStore {
  public:
    explicit ResultStore(std::filesystem::path dir);

    void write_csv(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<CsvCell>>& rows);

    // canonical FNV-1a hash of a JSON config (key order independent)
    static std::string config_hash(const std::string& config_json);

    void finalize(const std::string& command, const std::string& config_json);
    const std::filesystem::path& dir() const { return dir_; }

  private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
};

std::string format_g17(double v);

}  // namespace flatband
