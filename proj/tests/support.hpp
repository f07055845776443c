#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <complex>
#include <vector>

#include "coupled/linalg.hpp"

namespace coupled::testing {

inline ::testing::AssertionResult vec_near(const Vec& a, const Vec& b, double tol) {
  if (a.size() != b.size())
    return ::testing::AssertionFailure() << "size " << a.size() << " vs " << b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(std::abs(a[i] - b[i]) <= tol))
      return ::testing::AssertionFailure() << "entry " << i << ": " << a[i] << " vs " << b[i] << " (tol " << tol << ")";
  return ::testing::AssertionSuccess();
}

inline ::testing::AssertionResult mat_near(const Mat& a, const Mat& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return ::testing::AssertionFailure() << "shape mismatch";
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!(std::abs(a(i, j) - b(i, j)) <= tol))
        return ::testing::AssertionFailure()
               << "entry (" << i << "," << j << "): " << a(i, j) << " vs " << b(i, j) << " (tol " << tol << ")";
  return ::testing::AssertionSuccess();
}

/// Independent multiset comparison: sort both by (re, im) and compare in order.
/// Only valid when the values are well separated relative to tol.
inline ::testing::AssertionResult spectrum_near(std::vector<std::complex<double>> a,
                                                std::vector<std::complex<double>> b, double tol) {
  if (a.size() != b.size()) return ::testing::AssertionFailure() << "size " << a.size() << " vs " << b.size();
  auto by = [](const std::complex<double>& x, const std::complex<double>& y) {
    if (std::abs(x.real() - y.real()) > 1e-9) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), by);
  std::sort(b.begin(), b.end(), by);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(std::abs(a[i] - b[i]) <= tol))
      return ::testing::AssertionFailure() << "value " << i << ": " << a[i] << " vs " << b[i];
  return ::testing::AssertionSuccess();
}

inline std::vector<std::complex<double>> real_values(std::initializer_list<double> xs) {
  std::vector<std::complex<double>> out;
  for (double x : xs) out.emplace_back(x, 0.0);
  return out;
}

inline double abs_cos(const Vec& a, const Vec& b) { return std::abs(dot(a, b)) / (norm(a) * norm(b)); }

}  // namespace coupled::testing
