#pragma once

#include <iosfwd>
#include <string>

#include "coupled/linalg.hpp"

namespace coupled {

/// Shortest-round-trip-safe decimal form (17 significant digits).
std::string format_double(double x);

/// CSV: first line `rows,cols`, then one comma-separated row per line.
void write_matrix_csv(std::ostream& os, const Mat& a);
Mat read_matrix_csv(std::istream& is);

void save_matrix(const std::string& path, const Mat& a);
Mat load_matrix(const std::string& path);

}  // namespace coupled
