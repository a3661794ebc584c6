#include "heisen/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "heisen/error.hpp"

namespace heisen::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

[[noreturn]] void parseFail(const std::string& name, int line,
                            const std::string& msg) {
  throw Error(Err::ParseError, name + ":" + std::to_string(line) + ": " + msg);
}

iet::Perm permFromOrder(const std::vector<std::string>& alphabet,
                        const std::vector<std::string>& order,
                        const std::string& which) {
  if (order.size() != alphabet.size())
    throw Error(Err::ValidationError, which + " lists " +
                                          std::to_string(order.size()) +
                                          " symbols, alphabet has " +
                                          std::to_string(alphabet.size()));
  iet::Perm p(alphabet.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    auto it = std::find(alphabet.begin(), alphabet.end(), order[pos]);
    if (it == alphabet.end())
      throw Error(Err::ValidationError,
                  which + " names unknown symbol '" + order[pos] + "'");
    const std::size_t idx = static_cast<std::size_t>(it - alphabet.begin());
    if (p[idx] != 0)
      throw Error(Err::NotABijection, which + " repeats '" + order[pos] + "'");
    p[idx] = static_cast<int>(pos) + 1;
  }
  return p;
}

}  // namespace

double ExperimentConfig::runNumber(const std::string& key, double fallback) const {
  auto it = run.find(key);
  if (it == run.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (...) {
    throw Error(Err::ValidationError, "run." + key + " is not a number");
  }
}

std::int64_t ExperimentConfig::runInt(const std::string& key,
                                      std::int64_t fallback) const {
  auto it = run.find(key);
  if (it == run.end()) return fallback;
  try {
    return std::stoll(it->second);
  } catch (...) {
    throw Error(Err::ValidationError, "run." + key + " is not an integer");
  }
}

std::vector<double> ExperimentConfig::runNumbers(
    const std::string& key, const std::vector<double>& fallback) const {
  auto it = run.find(key);
  if (it == run.end()) return fallback;
  std::vector<double> out;
  for (const std::string& t : tokens(it->second)) {
    try {
      out.push_back(std::stod(t));
    } catch (...) {
      throw Error(Err::ValidationError, "run." + key + " has a bad number");
    }
  }
  return out;
}

ExperimentConfig parseConfigText(const std::string& text, const std::string& name) {
  ExperimentConfig cfg;
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parseFail(name, lineNo, "unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) parseFail(name, lineNo, "empty section name");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) parseFail(name, lineNo, "expected key = value");
    if (section.empty()) parseFail(name, lineNo, "entry before any section");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parseFail(name, lineNo, "empty key");
    if (sections[section].count(key))
      parseFail(name, lineNo, "duplicate key '" + key + "'");
    sections[section][key] = value;
  }

  auto surface = sections.find("surface");
  if (surface == sections.end())
    throw Error(Err::ValidationError, name + ": missing [surface] section");
  auto need = [&](const char* key) -> std::string {
    auto it = surface->second.find(key);
    if (it == surface->second.end())
      throw Error(Err::ValidationError,
                  name + ": [surface] is missing '" + std::string(key) + "'");
    return it->second;
  };
  cfg.surface.alphabet = tokens(need("alphabet"));
  if (cfg.surface.alphabet.empty())
    throw Error(Err::ValidationError, name + ": empty alphabet");
  cfg.surface.pi0 =
      permFromOrder(cfg.surface.alphabet, tokens(need("pi0")), "pi0");
  cfg.surface.pi1 =
      permFromOrder(cfg.surface.alphabet, tokens(need("pi1")), "pi1");
  cfg.surface.lengths = tokens(need("lambda"));
  if (cfg.surface.lengths.size() != cfg.surface.alphabet.size())
    throw Error(Err::ValidationError, name + ": lambda length differs from d");
  cfg.exactLengths =
      std::all_of(cfg.surface.lengths.begin(), cfg.surface.lengths.end(),
                  [](const std::string& s) {
                    return s.find('/') != std::string::npos;
                  });

  const std::size_t d = cfg.surface.alphabet.size();
  if (auto s = sections.find("suspension"); s != sections.end()) {
    const bool hasTau = s->second.count("tau") > 0;
    const bool hasH = s->second.count("h") > 0;
    if (hasTau == hasH)
      throw Error(Err::ValidationError,
                  name + ": [suspension] needs exactly one of tau / h");
    auto check = [&](const std::vector<std::string>& v, const char* which) {
      if (v.size() != d)
        throw Error(Err::ValidationError,
                    name + ": " + which + " length differs from d");
    };
    if (hasTau) {
      cfg.tau = tokens(s->second.at("tau"));
      check(*cfg.tau, "tau");
    } else {
      cfg.heights = tokens(s->second.at("h"));
      check(*cfg.heights, "h");
    }
  }

  if (auto s = sections.find("bundle"); s != sections.end()) {
    if (auto it = s->second.find("b"); it != s->second.end()) {
      if (trim(it->second) == "sample") {
        cfg.sampleOffsets = true;
      } else {
        cfg.offsets = tokens(it->second);
        if (cfg.offsets->size() != d)
          throw Error(Err::ValidationError, name + ": b length differs from d");
      }
    }
    if (auto it = s->second.find("seed"); it != s->second.end()) {
      try {
        cfg.seed = std::stoull(it->second);
      } catch (...) {
        throw Error(Err::ValidationError, name + ": bundle.seed not an integer");
      }
    }
  }

  if (auto s = sections.find("run"); s != sections.end()) cfg.run = s->second;

  if (auto s = sections.find("output"); s != sections.end()) {
    if (auto it = s->second.find("directory"); it != s->second.end())
      cfg.outputDirectory = it->second;
    if (auto it = s->second.find("formats"); it != s->second.end()) {
      cfg.formats = it->second;
      if (cfg.formats != "json" && cfg.formats != "csv" && cfg.formats != "both")
        throw Error(Err::ValidationError,
                    name + ": formats must be json, csv or both");
    }
  }

  for (const auto& [sec, kv] : sections) {
    (void)kv;
    if (sec != "surface" && sec != "suspension" && sec != "bundle" &&
        sec != "run" && sec != "output")
      throw Error(Err::ValidationError, name + ": unknown section [" + sec + "]");
  }
  return cfg;
}

ExperimentConfig parseConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Err::ParseError, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseConfigText(buf.str(), path);
}

std::string canonicalConfigString(const ExperimentConfig& cfg,
                                  const std::string& command) {
  std::ostringstream out;
  out << "command=" << command << ';';
  out << "alphabet=";
  for (const auto& s : cfg.surface.alphabet) out << s << ',';
  out << ";pi0=";
  for (int v : cfg.surface.pi0) out << v << ',';
  out << ";pi1=";
  for (int v : cfg.surface.pi1) out << v << ',';
  out << ";lambda=";
  for (const auto& s : cfg.surface.lengths) out << s << ',';
  out << ";tau=";
  if (cfg.tau)
    for (const auto& s : *cfg.tau) out << s << ',';
  out << ";h=";
  if (cfg.heights)
    for (const auto& s : *cfg.heights) out << s << ',';
  out << ";b=";
  if (cfg.sampleOffsets) out << "sample";
  if (cfg.offsets)
    for (const auto& s : *cfg.offsets) out << s << ',';
  out << ";seed=" << cfg.seed << ";run=";
  for (const auto& [k, v] : cfg.run) out << k << '=' << v << ',';
  return out.str();
}

std::string specHash(const ExperimentConfig& cfg, const std::string& command) {
  const std::string canon = canonicalConfigString(cfg, command);
  std::uint64_t h = 1469598103934665603ull;  // FNV offset basis
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;  // FNV prime
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace heisen::cli
