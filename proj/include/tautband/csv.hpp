#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tautband/paths.hpp"

namespace tautband::csv {

/// Numeric columns read from a CSV file with a fixed header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  const std::vector<double>& column(const std::string& name) const;
};

/// Parses a numeric CSV whose header must equal `expected` exactly.
/// Malformed rows raise InputError naming the line.
Table read(std::istream& in, const std::vector<std::string>& expected);
Table read_file(const std::string& path, const std::vector<std::string>& expected);

/// Shortest round-trip decimal form (17 significant digits at most).
std::string format_number(double x);

/// `t,value`, one row per knot.
void write_path(std::ostream& out, const SampledPath& path);
SampledPath read_path(std::istream& in);

}  // namespace tautband::csv
