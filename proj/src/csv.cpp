#include "tautband/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "tautband/errors.hpp"

namespace tautband::csv {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

const std::vector<double>& Table::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return columns[c];
  }
  throw InputError("csv: no column '" + name + "'");
}

Table read(std::istream& in, const std::vector<std::string>& expected) {
  Table table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) {
    throw InputError("csv: empty input");
  }
  for (auto f : split(line)) table.header.emplace_back(trim(f));
  if (table.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw InputError("csv line " + std::to_string(lineno) + ": expected header '" + want + "'");
  }
  table.columns.resize(expected.size());
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != expected.size()) {
      throw InputError("csv line " + std::to_string(lineno) + ": expected " +
                       std::to_string(expected.size()) + " fields, got " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto f = trim(fields[c]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw InputError("csv line " + std::to_string(lineno) + ": cannot parse '" + std::string(f) +
                         "' in column " + expected[c]);
      }
      table.columns[c].push_back(v);
    }
  }
  return table;
}

Table read_file(const std::string& path, const std::vector<std::string>& expected) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read(in, expected);
}

std::string format_number(double x) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

void write_path(std::ostream& out, const SampledPath& path) {
  out << "t,value\n";
  const auto& g = path.grid();
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << format_number(g[i]) << ',' << format_number(path[i]) << '\n';
  }
}

SampledPath read_path(std::istream& in) {
  auto table = read(in, {"t", "value"});
  return SampledPath(TimeGrid(std::move(table.columns[0])), std::move(table.columns[1]));
}

}  // namespace tautband::csv
