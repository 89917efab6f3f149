#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "inar/model.hpp"

namespace inar {

// Dataset files are single-column CSV: one nonnegative integer per line, an
// optional leading "count" header, blank lines and CR tolerated. Anything
// else (negative, fractional, text, empty file) raises std::runtime_error
// with the offending line number.
std::vector<std::uint32_t> read_count_csv(std::istream& in,
                                          const std::string& name = "<stream>");
std::vector<std::uint32_t> read_count_csv_file(const std::string& path);
void write_count_csv_file(const std::string& path,
                          const std::vector<std::uint32_t>& values,
                          bool header = true);

// First max_lag raw values become the starting window; the rest are the
// modeled observations. Raw row r (1-based) maps to observation r - max_lag.
ObservationSeries split_series(const std::vector<std::uint32_t>& raw, int max_lag);

}  // namespace inar
