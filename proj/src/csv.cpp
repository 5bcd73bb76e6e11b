#include "dyadcov/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "dyadcov/error.hpp"

namespace dyadcov {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = trim(line.substr(start, comma == std::string_view::npos
                                             ? std::string_view::npos
                                             : comma - start));
    if (field.size() >= 2 && field.front() == '"' && field.back() == '"')
      field = field.substr(1, field.size() - 2);
    out.emplace_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line,
                              const std::string& msg) {
  throw Error(ErrorCode::Parse, source + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& field, const std::string& source,
                 std::size_t line) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    parse_error(source, line, "'" + field + "' is not a finite number");
  return value;
}

bool blank(std::string_view line) { return trim(line).empty(); }

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
  return in;
}

}  // namespace

DyadTable read_dyad_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  DyadTable table;
  while (std::getline(in, line)) {
    ++lineno;
    if (!blank(line)) break;
  }
  if (lineno == 0 || blank(line)) parse_error(source, lineno, "missing header");
  if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  auto header = split(line);
  if (header.size() < 3 || header[0] != "node_i" || header[1] != "node_j" ||
      header[2] != "y")
    parse_error(source, lineno, "header must start with node_i,node_j,y");
  table.regressors.assign(header.begin() + 3, header.end());

  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto fields = split(line);
    if (fields.size() != header.size())
      parse_error(source, lineno,
                  "expected " + std::to_string(header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    DyadRow row;
    row.label_i = fields[0];
    row.label_j = fields[1];
    if (row.label_i.empty() || row.label_j.empty())
      parse_error(source, lineno, "empty node label");
    row.y = to_double(fields[2], source, lineno);
    row.x.reserve(fields.size() - 3);
    for (std::size_t k = 3; k < fields.size(); ++k)
      row.x.push_back(to_double(fields[k], source, lineno));
    table.rows.push_back(std::move(row));
  }
  return table;
}

DyadTable read_dyad_csv(const std::string& path) {
  auto in = open(path);
  return read_dyad_csv(in, path);
}

std::vector<OrderEntry> read_order_csv(std::istream& in,
                                       const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!blank(line)) break;
  }
  if (lineno == 0 || blank(line)) parse_error(source, lineno, "missing header");
  if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  const auto header = split(line);
  if (header.size() != 2 || header[0] != "node" || header[1] != "order_value")
    parse_error(source, lineno, "header must be node,order_value");

  std::vector<OrderEntry> entries;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto fields = split(line);
    if (fields.size() != 2)
      parse_error(source, lineno,
                  "expected 2 fields, found " + std::to_string(fields.size()));
    if (fields[0].empty()) parse_error(source, lineno, "empty node label");
    entries.push_back({fields[0], to_double(fields[1], source, lineno)});
  }
  return entries;
}

std::vector<OrderEntry> read_order_csv(const std::string& path) {
  auto in = open(path);
  return read_order_csv(in, path);
}

}  // namespace dyadcov
