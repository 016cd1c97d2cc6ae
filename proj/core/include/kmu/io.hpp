#pragma once

#include <iosfwd>
#include <string>

#include "kmu/dataset.hpp"

namespace kmu {

enum class HeaderMode { Auto, Present, Absent };

/// Round-trip safe decimal rendering (17 significant digits).
std::string format_double(double value);

/// Shortest decimal that parses back to `value`.
std::string format_short(double value);

/// Parses numeric CSV. In Auto mode a first line that does not parse as
/// numbers is treated as a header. Throws ShapeError on ragged or
/// non-numeric rows.
Dataset read_csv(std::istream& in, HeaderMode header = HeaderMode::Auto);
Dataset read_csv_file(const std::string& path, HeaderMode header = HeaderMode::Auto);

/// One row per observation; optional header "x1,...,xd".
void write_csv(std::ostream& out, const Dataset& data, bool header = true);

/// Center sets share the dataset CSV layout, one center per row.
CenterSet read_centers_csv(std::istream& in, HeaderMode header = HeaderMode::Auto);
void write_centers_csv(std::ostream& out, const CenterSet& centers, bool header = true);

}  // namespace kmu
