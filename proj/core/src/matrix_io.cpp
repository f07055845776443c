#include "coupled/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "coupled/errors.hpp"

namespace coupled {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double parse_number(const std::string& text, std::size_t line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double x = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == begin || *end != '\0')
    throw ParseError("matrix csv line " + std::to_string(line) + ": bad number '" + text + "'");
  return x;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_matrix_csv(std::ostream& os, const Mat& a) {
  os << a.rows() << ',' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) os << ',';
      os << format_double(a(i, j));
    }
    os << '\n';
  }
}

Mat read_matrix_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("matrix csv: missing header");
  auto header = split_fields(line);
  if (header.size() != 2) throw ParseError("matrix csv: header must be 'rows,cols'");
  double r = parse_number(header[0], 1);
  double c = parse_number(header[1], 1);
  if (r < 1 || c < 1 || r != std::floor(r) || c != std::floor(c))
    throw ParseError("matrix csv: dimensions must be positive integers");
  Mat a(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (!std::getline(is, line)) throw ParseError("matrix csv: expected " + std::to_string(a.rows()) + " rows");
    auto fields = split_fields(line);
    if (fields.size() != a.cols())
      throw ParseError("matrix csv line " + std::to_string(i + 2) + ": expected " + std::to_string(a.cols()) +
                       " values");
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = parse_number(fields[j], i + 2);
  }
  if (!a.all_finite()) throw ParseError("matrix csv: non-finite entry");
  return a;
}

void save_matrix(const std::string& path, const Mat& a) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open '" + path + "' for writing");
  write_matrix_csv(os, a);
}

Mat load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open matrix file '" + path + "'");
  return read_matrix_csv(is);
}

}  // namespace coupled
