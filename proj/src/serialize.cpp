#include "heisen/serialize.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "heisen/error.hpp"

namespace heisen::cli {

std::string fmtDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void writeCsv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Err::ValidationError, "cannot write '" + path + "'");
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out << ',';
    out << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
}

void writeJson(const std::string& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Err::ValidationError, "cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

std::string artifactPath(const std::string& dir, const std::string& command,
                         const std::string& hash, const std::string& ext) {
  return dir + "/" + command + "-" + hash + "." + ext;
}

void ensureDirectory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error(Err::ValidationError,
                "cannot create output directory '" + dir + "'");
}

Json complexJson(const std::complex<double>& z) {
  return Json{{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace heisen::cli
