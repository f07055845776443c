#include "coupled/generate.hpp"

#include <cmath>
#include <sstream>

#include "coupled/errors.hpp"

namespace coupled {

namespace {

constexpr double kGapTolerance = 1e-6;
constexpr double kSumTolerance = 1e-6;
constexpr int kMaxRedraws = 64;

void check_spectrum(const std::vector<double>& values, const char* what) {
  if (values.empty()) throw DimensionError(std::string(what) + ": empty spectrum");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw DegeneracyError(std::string(what) + ": values must be positive and finite");
    if (i > 0 && !(values[i - 1] - values[i] >= kGapTolerance * values[i - 1])) {
      std::ostringstream os;
      os << what << ": values must be strictly descending with relative gap >= " << kGapTolerance
         << " (entries " << i - 1 << " and " << i << ")";
      throw DegeneracyError(os.str());
    }
  }
}

}  // namespace

Mat random_orthogonal(std::size_t n, SplitMix64& rng) {
  Mat q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vec x = rng.gaussian_vec(n);
    // Modified Gram-Schmidt, twice for stability.
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        Vec qk = q.col(k);
        x -= dot(qk, x) * qk;
      }
    double nx = norm(x);
    if (nx < 1e-10) throw DegeneracyError("random_orthogonal: dependent Gaussian draw");
    q.set_col(j, x / nx);
  }
  return q;
}

Mat make_spd(const std::vector<double>& eigenvalues, std::uint64_t seed) {
  check_spectrum(eigenvalues, "make_spd");
  const std::size_t n = eigenvalues.size();
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    SplitMix64 rng(attempt == 0 ? seed : SplitMix64::derive(seed, attempt));
    Mat q = random_orthogonal(n, rng);
    // Rows of Q are the eigenvectors of C = Qᵀ Λ Q.
    if (std::abs(sum(q.row(0))) <= kSumTolerance) continue;
    Mat c(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += q(k, i) * eigenvalues[k] * q(k, j);
        c(i, j) = c(j, i) = s;
      }
    return c;
  }
  throw DegeneracyError("make_spd: could not draw a principal eigenvector off the constant-sum plane");
}

Mat make_cross(const std::vector<double>& singulars, std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw DimensionError("make_cross: dimensions must be positive");
  check_spectrum(singulars, "make_cross");
  if (singulars.size() > std::min(m, n)) throw DimensionError("make_cross: more singular values than min(m, n)");
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    SplitMix64 rng(attempt == 0 ? seed : SplitMix64::derive(seed, attempt));
    Mat u = random_orthogonal(m, rng);
    Mat v = random_orthogonal(n, rng);
    double su = sum(u.col(0));
    double sv = sum(v.col(0));
    if (std::abs(su) <= kSumTolerance || std::abs(sv) <= kSumTolerance) continue;
    if (su * sv < 0.0) u.set_col(0, -u.col(0));
    Mat a(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < singulars.size(); ++k) s += u(i, k) * singulars[k] * v(j, k);
        a(i, j) = s;
      }
    return a;
  }
  throw DegeneracyError("make_cross: could not draw principal vectors off the constant-sum plane");
}

}  // namespace coupled
