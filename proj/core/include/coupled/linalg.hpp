#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace coupled {

/// Dense real vector.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n, double value = 0.0) : data_(n, value) {}
  Vec(std::initializer_list<double> values) : data_(values) {}
  explicit Vec(std::vector<double> values) : data_(std::move(values)) {}

  static Vec ones(std::size_t n) { return Vec(n, 1.0); }
  static Vec unit(std::size_t n, std::size_t k);

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  /// Contiguous sub-range copy [offset, offset + count).
  Vec segment(std::size_t offset, std::size_t count) const;

  bool all_finite() const noexcept;

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);
  Vec& operator/=(double s);

  friend bool operator==(const Vec&, const Vec&) = default;

 private:
  std::vector<double> data_;
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator-(Vec a);
Vec operator*(double s, Vec a);
Vec operator*(Vec a, double s);
Vec operator/(Vec a, double s);

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
double sum(const Vec& a);
double max_abs(const Vec& a);
/// Concatenate vectors in order.
Vec concat(std::initializer_list<const Vec*> parts);

/// Dense real matrix, row-major.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(std::size_t n);
  static Mat diagonal(const Vec& d);
  static Mat from_columns(const std::vector<Vec>& cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row_span(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  Vec row(std::size_t i) const;
  Vec col(std::size_t j) const;
  void set_col(std::size_t j, const Vec& v);
  void set_row(std::size_t i, const Vec& v);

  Mat transpose() const;
  bool all_finite() const noexcept;

  const std::vector<double>& values() const noexcept { return data_; }

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double s);

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(double s, Mat a);
Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, const Vec& x);
/// Aᵀx without forming the transpose.
Vec transpose_times(const Mat& a, const Vec& x);
Mat outer(const Vec& a, const Vec& b);

double frobenius_norm(const Mat& a);
/// Largest |a_ij - a_ji| relative to the Frobenius norm; 0 for the zero matrix.
double asymmetry(const Mat& a);
/// max_ij |a_ij - b_ij|.
double max_abs_diff(const Mat& a, const Mat& b);

/// Solve A x = b by Gaussian elimination with partial pivoting.
/// Throws SingularityError on an exactly zero pivot.
Vec solve(const Mat& a, const Vec& b);

}  // namespace coupled
