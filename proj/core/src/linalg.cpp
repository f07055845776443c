#include "coupled/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "coupled/errors.hpp"

namespace coupled {

namespace {

void require_same_size(const Vec& a, const Vec& b, const char* op) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << op << ": size mismatch " << a.size() << " vs " << b.size();
    throw DimensionError(os.str());
  }
}

std::string format_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

GuardedScalarError::GuardedScalarError(std::string name, double value, double floor)
    : Error("scalar estimate '" + name + "' = " + format_g(value) + " is below the floor " + format_g(floor)),
      name_(std::move(name)),
      value_(value) {}

Vec Vec::unit(std::size_t n, std::size_t k) {
  Vec e(n);
  e[k] = 1.0;
  return e;
}

Vec Vec::segment(std::size_t offset, std::size_t count) const {
  if (offset + count > data_.size()) throw DimensionError("segment out of range");
  return Vec(std::vector<double>(data_.begin() + offset, data_.begin() + offset + count));
}

bool Vec::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Vec& Vec::operator+=(const Vec& o) {
  require_same_size(*this, o, "vector +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  require_same_size(*this, o, "vector -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Vec& Vec::operator/=(double s) {
  for (double& x : data_) x /= s;
  return *this;
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator-(Vec a) { return a *= -1.0; }
Vec operator*(double s, Vec a) { return a *= s; }
Vec operator*(Vec a, double s) { return a *= s; }
Vec operator/(Vec a, double s) { return a /= s; }

double dot(const Vec& a, const Vec& b) {
  require_same_size(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) {
  // Scaled to avoid overflow for the divergence checks on large states.
  double scale = max_abs(a);
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double x : a) {
    double r = x / scale;
    s += r * r;
  }
  return scale * std::sqrt(s);
}

double sum(const Vec& a) {
  double s = 0.0;
  for (double x : a) s += x;
  return s;
}

double max_abs(const Vec& a) {
  double m = 0.0;
  for (double x : a) {
    if (!std::isfinite(x)) return std::abs(x) == INFINITY ? INFINITY : NAN;
    m = std::max(m, std::abs(x));
  }
  return m;
}

Vec concat(std::initializer_list<const Vec*> parts) {
  std::vector<double> out;
  for (const Vec* p : parts) out.insert(out.end(), p->begin(), p->end());
  return Vec(std::move(out));
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diagonal(const Vec& d) {
  Mat m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Mat Mat::from_columns(const std::vector<Vec>& cols) {
  if (cols.empty()) return {};
  Mat m(cols.front().size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_col(j, cols[j]);
  return m;
}

Vec Mat::row(std::size_t i) const {
  return Vec(std::vector<double>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_));
}

Vec Mat::col(std::size_t j) const {
  Vec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void Mat::set_col(std::size_t j, const Vec& v) {
  if (v.size() != rows_) throw DimensionError("set_col: size mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

void Mat::set_row(std::size_t i, const Vec& v) {
  if (v.size() != cols_) throw DimensionError("set_row: size mismatch");
  std::copy(v.begin(), v.end(), data_.begin() + i * cols_);
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Mat::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Mat& Mat::operator+=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix +: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix -: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(double s, Mat a) { return a *= s; }

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimension mismatch");
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vec operator*(const Mat& a, const Vec& x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector product: size mismatch");
  Vec y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    auto r = a.row_span(i);
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vec transpose_times(const Mat& a, const Vec& x) {
  if (a.rows() != x.size()) throw DimensionError("transposed product: size mismatch");
  Vec y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row_span(i);
    for (std::size_t j = 0; j < r.size(); ++j) y[j] += r[j] * x[i];
  }
  return y;
}

Mat outer(const Vec& a, const Vec& b) {
  Mat m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

double frobenius_norm(const Mat& a) { return norm(Vec(a.values())); }

double asymmetry(const Mat& a) {
  if (!a.square()) throw DimensionError("asymmetry: matrix is not square");
  double f = frobenius_norm(a);
  if (f == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
  return worst / f;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k)
    m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

Vec solve(const Mat& a, const Vec& b) {
  if (!a.square() || a.rows() != b.size()) throw DimensionError("solve: shape mismatch");
  const std::size_t n = a.rows();
  Mat lu = a;
  Vec x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (lu(piv, k) == 0.0) throw SingularityError("solve: zero pivot in column " + std::to_string(k), INFINITY);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      std::swap(x[k], x[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      double f = lu(i, k) / lu(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) lu(i, j) -= f * lu(k, j);
      x[i] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= lu(k, j) * x[j];
    x[k] = s / lu(k, k);
  }
  return x;
}

}  // namespace coupled
