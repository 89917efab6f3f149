#include "inar/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace inar {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (std::isspace((unsigned char)s[b]) != 0)) ++b;
  while (e > b && (std::isspace((unsigned char)s[e - 1]) != 0)) --e;
  return s.substr(b, e - b);
}

bool iequals_count(const std::string& s) {
  if (s.size() != 5) return false;
  const char* ref = "count";
  for (std::size_t i = 0; i < 5; ++i)
    if (std::tolower((unsigned char)s[i]) != ref[i]) return false;
  return true;
}

[[noreturn]] void bad_line(const std::string& name, std::size_t line,
                           const std::string& what) {
  std::ostringstream os;
  os << name << ":" << line << ": " << what;
  throw std::runtime_error(os.str());
}

}  // namespace

std::vector<std::uint32_t> read_count_csv(std::istream& in, const std::string& name) {
  std::vector<std::uint32_t> out;
  std::string raw;
  std::size_t lineno = 0;
  bool first_content = true;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (first_content && iequals_count(line)) {
      first_content = false;
      continue;
    }
    first_content = false;
    // Strictly digits: rejects negatives, decimals, and stray text.
    if (!std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; })) {
      if (!line.empty() && line[0] == '-')
        bad_line(name, lineno, "negative count '" + line + "'");
      bad_line(name, lineno, "expected a nonnegative integer, got '" + line + "'");
    }
    unsigned long long v = 0;
    try {
      v = std::stoull(line);
    } catch (const std::exception&) {
      bad_line(name, lineno, "count out of range '" + line + "'");
    }
    if (v > 0xFFFFFFFFull) bad_line(name, lineno, "count out of range '" + line + "'");
    out.push_back((std::uint32_t)v);
  }
  if (out.empty())
    throw std::runtime_error(name + ": no observations (empty file?)");
  return out;
}

std::vector<std::uint32_t> read_count_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  return read_count_csv(in, path);
}

void write_count_csv_file(const std::string& path,
                          const std::vector<std::uint32_t>& values, bool header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  if (header) out << "count\n";
  for (std::uint32_t v : values) out << v << "\n";
  if (!out) throw std::runtime_error(path + ": write failed");
}

ObservationSeries split_series(const std::vector<std::uint32_t>& raw, int max_lag) {
  if (max_lag < 1) throw std::invalid_argument("max lag must be at least 1");
  if ((int)raw.size() <= max_lag)
    throw std::invalid_argument(
        "series too short: " + std::to_string(raw.size()) + " values, need more than " +
        std::to_string(max_lag) + " to form a starting window plus observations");
  ObservationSeries s;
  s.initial.assign(raw.begin(), raw.begin() + max_lag);
  s.values.assign(raw.begin() + max_lag, raw.end());
  return s;
}

}  // namespace inar
