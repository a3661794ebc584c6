#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

namespace heisen::cli {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that round-trips to the same binary64 value.
std::string fmtDouble(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void row(std::initializer_list<std::string> cells) { rows.emplace_back(cells); }
};

/// Writes CSV with LF line endings; numeric cells should be produced by
/// fmtDouble so artifacts are byte-stable.
void writeCsv(const std::string& path, const CsvTable& table);

void writeJson(const std::string& path, const Json& doc);

std::string artifactPath(const std::string& dir, const std::string& command,
                         const std::string& hash, const std::string& ext);

/// Creates the directory (and parents) if missing.
void ensureDirectory(const std::string& dir);

Json complexJson(const std::complex<double>& z);

}  // namespace heisen::cli
