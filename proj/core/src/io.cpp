#include "kmu/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "kmu/error.hpp"

namespace kmu {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    const std::string field =
        trim(std::string_view(line).substr(pos, comma == std::string::npos ? std::string::npos
                                                                           : comma - pos));
    double v = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (field.empty() || ec != std::errc() || ptr != last) return false;
    out.push_back(v);
    if (comma == std::string::npos) return true;
    pos = comma + 1;
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_short(double value) {
  char buf[32];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

Dataset read_csv(std::istream& in, HeaderMode header) {
  std::vector<double> values;
  std::vector<double> row;
  std::size_t d = 0;
  std::size_t n = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const bool numeric = parse_row(line, row);
    if (first) {
      first = false;
      if (header == HeaderMode::Present || (header == HeaderMode::Auto && !numeric)) continue;
    }
    if (!numeric) throw ShapeError("non-numeric CSV field on line " + std::to_string(line_no));
    if (d == 0) d = row.size();
    if (row.size() != d) throw ShapeError("ragged CSV row on line " + std::to_string(line_no));
    values.insert(values.end(), row.begin(), row.end());
    ++n;
  }
  if (n == 0) throw ShapeError("CSV contains no observations");
  return Dataset(n, d, std::move(values));
}

Dataset read_csv_file(const std::string& path, HeaderMode header) {
  std::ifstream in(path);
  if (!in) throw ShapeError("cannot open data file: " + path);
  return read_csv(in, header);
}

void write_csv(std::ostream& out, const Dataset& data, bool header) {
  if (header) {
    for (std::size_t j = 0; j < data.dim(); ++j) out << (j ? "," : "") << 'x' << j + 1;
    out << '\n';
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto r = data.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) out << (j ? "," : "") << format_double(r[j]);
    out << '\n';
  }
}

CenterSet read_centers_csv(std::istream& in, HeaderMode header) {
  const Dataset rows = read_csv(in, header);
  const auto v = rows.values();
  return CenterSet(rows.size(), rows.dim(), std::vector<double>(v.begin(), v.end()));
}

void write_centers_csv(std::ostream& out, const CenterSet& centers, bool header) {
  const auto v = centers.coords();
  write_csv(out, Dataset(centers.size(), centers.dim(), std::vector<double>(v.begin(), v.end())),
            header);
}

}  // namespace kmu
