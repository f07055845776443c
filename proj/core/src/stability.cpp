#include "coupled/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "coupled/criteria.hpp"
#include "coupled/eigen.hpp"
#include "coupled/errors.hpp"
#include "coupled/finite_diff.hpp"

namespace coupled {

namespace {

constexpr double kStationarityTolerance = 1e-8;
constexpr double kHyperbolicBand = 1e-6;
constexpr int kPolishSteps = 5;

const char* const kEquationNames[] = {"Av = sigma u", "A^T u = rho v", "1^T u = 1",
                                      "1^T v = 1",    "sigma = 1^T A v", "rho = 1^T A^T u"};

void require_orientation(const Mat& a) {
  if (a.rows() < a.cols())
    throw UnsupportedError("stability analysis assumes rows >= cols; transpose A and swap the roles of u and v");
  if (a.cols() < 2) throw DimensionError("stability analysis needs at least 2 columns");
}

void require_index(const Mat& a, std::size_t i) {
  if (i < 1 || i > a.cols()) throw DimensionError("triple index must be in 1.." + std::to_string(a.cols()));
}

Vec sum_mod_residual(const Mat& a, const Vec& z) {
  return svd_residual(SvdRuleKind::SUM_MOD, a, SvdState::unpack(z, a.rows(), a.cols(), true));
}

Vec sum_mod_field(const Mat& a, const Vec& z) {
  return svd_rhs(SvdRuleKind::SUM_MOD, a, SvdState::unpack(z, a.rows(), a.cols(), true)).pack();
}

struct TripleData {
  std::vector<double> mu;  // singular values, descending
  double s1 = 0.0;         // |𝟙ᵀũ₁|
  double r1 = 0.0;         // |𝟙ᵀṽ₁|
};

TripleData triple_data(const Mat& a) {
  SvdResult svd = svd_factor(a);
  return {svd.singular_values, std::abs(sum(svd.left_vector(0))), std::abs(sum(svd.right_vector(0)))};
}

void append_pm(std::vector<Complex>& out, Complex offset) {
  out.push_back(-1.0 + offset);
  out.push_back(-1.0 - offset);
}

void sort_spectrum(std::vector<Complex>& v) {
  std::stable_sort(v.begin(), v.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
}

}  // namespace

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::attractor: return "attractor";
    case Classification::saddle: return "saddle";
    case Classification::non_hyperbolic: return "non-hyperbolic";
  }
  return "?";
}

SvdState stationary_quadruple(const Mat& a, std::size_t i) {
  require_orientation(a);
  require_index(a, i);
  SvdResult svd = svd_factor(a);
  Vec u = constraint_map_sum(svd.left_vector(i - 1));
  Vec v = constraint_map_sum(svd.right_vector(i - 1));
  SvdState q{u, v, sum(a * v), sum(transpose_times(a, u))};
  Vec z = q.pack();
  auto residual = [&a](const Vec& x) { return sum_mod_residual(a, x); };
  for (int k = 0; k < kPolishSteps; ++k) z += newton_zero_field(residual, z);
  return SvdState::unpack(z, a.rows(), a.cols(), true);
}

std::pair<double, int> stationarity_violation(const Mat& a, const SvdState& q) {
  if (!q.rho) throw DimensionError("stationary quadruple needs a rho estimate");
  Vec av = a * q.v;
  Vec atu = transpose_times(a, q.u);
  const double rho = *q.rho;
  double err[6] = {norm(av - q.sigma * q.u),
                   norm(atu - rho * q.v),
                   std::abs(sum(q.u) - 1.0),
                   std::abs(sum(q.v) - 1.0),
                   std::abs(q.sigma - sum(av)),
                   std::abs(rho - sum(atu))};
  int worst = static_cast<int>(std::max_element(err, err + 6) - err);
  return {err[worst], worst};
}

Mat analytic_jacobian_at_stationary(const Mat& a, const SvdState& q) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (q.u.size() != m || q.v.size() != n) throw DimensionError("quadruple does not match the matrix shape");
  auto [violation, which] = stationarity_violation(a, q);
  const double tol = kStationarityTolerance * (1.0 + frobenius_norm(a));
  if (!(violation <= tol)) {
    std::ostringstream os;
    os << "not a stationary point: equation '" << kEquationNames[which] << "' violated by " << violation
       << " (tolerance " << tol << ")";
    throw PreconditionError(os.str());
  }
  const double sigma = q.sigma;
  const double rho = *q.rho;
  Vec ones_a = transpose_times(a, Vec::ones(m));  // 𝟙ᵀA as a vector of length n
  Vec ones_at = a * Vec::ones(n);                 // 𝟙ᵀAᵀ, length m
  const std::size_t dim = m + n + 2;
  Mat j(dim, dim);
  for (std::size_t r = 0; r < m; ++r) {
    j(r, r) = -1.0;
    for (std::size_t c = 0; c < n; ++c) j(r, m + c) = (a(r, c) - q.u[r] * ones_a[c]) / sigma;
  }
  for (std::size_t r = 0; r < n; ++r) {
    j(m + r, m + r) = -1.0;
    for (std::size_t c = 0; c < m; ++c) j(m + r, c) = (a(c, r) - q.v[r] * ones_at[c]) / rho;
  }
  for (std::size_t c = 0; c < n; ++c) j(m + n, m + c) = ones_a[c];
  for (std::size_t c = 0; c < m; ++c) j(m + n + 1, c) = ones_at[c];
  j(m + n, m + n) = -1.0;
  j(m + n + 1, m + n + 1) = -1.0;
  return j;
}

std::vector<Complex> predicted_spectrum(const Mat& a, std::size_t i) {
  require_orientation(a);
  require_index(a, i);
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  SvdResult svd = svd_factor(a);
  TripleData t = triple_data(a);
  const double si = sum(svd.left_vector(i - 1));
  const double ri = sum(svd.right_vector(i - 1));
  if (!(std::abs(si) > 1e-8) || !(std::abs(ri) > 1e-8))
    throw DegeneracyError("singular vectors of the analysed triple are parallel to the constant-sum plane");
  const double mu = std::abs(t.mu[i - 1]);
  if (mu == 0.0) throw DegeneracyError("analysed singular value is zero");
  const double norm_u = 1.0 / std::abs(si);
  const double norm_v = 1.0 / std::abs(ri);
  const double radicand = (1.0 - t.s1 * norm_u) * (1.0 - t.r1 * norm_v);

  std::vector<Complex> out(m + 2 - n, Complex(-1.0, 0.0));
  append_pm(out, (std::abs(t.mu[0]) / mu) * std::sqrt(Complex(radicand, 0.0)));
  for (std::size_t j = 1; j < n; ++j) append_pm(out, Complex(std::abs(t.mu[j]) / mu, 0.0));
  sort_spectrum(out);
  return out;
}

std::vector<Complex> triple_aligned_spectrum(const Mat& a, std::size_t i) {
  require_orientation(a);
  require_index(a, i);
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  SvdResult svd = svd_factor(a);
  const double mu = std::abs(svd.singular_values[i - 1]);
  if (mu == 0.0) throw DegeneracyError("analysed singular value is zero");
  std::vector<Complex> out(m - n + 4, Complex(-1.0, 0.0));
  for (std::size_t j = 0; j < n; ++j)
    if (j != i - 1) append_pm(out, Complex(std::abs(svd.singular_values[j]) / mu, 0.0));
  sort_spectrum(out);
  return out;
}

std::vector<Complex> numeric_spectrum(const Mat& a, const SvdState& q) {
  auto field = [&a](const Vec& z) { return sum_mod_field(a, z); };
  return gen_eig(fd_jacobian(field, q.pack()));
}

Classification classify(const std::vector<Complex>& eigenvalues) {
  if (eigenvalues.empty()) throw DimensionError("classify: empty spectrum");
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& e : eigenvalues) top = std::max(top, e.real());
  if (top > kHyperbolicBand) return Classification::saddle;
  if (top >= -kHyperbolicBand) return Classification::non_hyperbolic;
  return Classification::attractor;
}

double match_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw DimensionError("match_distance: multisets differ in size");
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  double worst = 0.0;
  for (std::size_t round = 0; round < a.size(); ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (used_a[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (used_b[j]) continue;
        double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used_a[bi] = used_b[bj] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

StabilityReport analyze_triple(const Mat& a, std::size_t i) {
  StabilityReport r;
  r.triple_index = i;
  r.state = stationary_quadruple(a, i);
  const SvdState& q = r.state;
  const double nu = norm(q.u);
  const double nv = norm(q.v);
  r.mu = dot(q.u, a * q.v) / (nu * nv);
  r.sigma_rho_gap = std::abs(q.sigma * *q.rho - r.mu * r.mu);

  r.predicted = predicted_spectrum(a, i);
  r.aligned = triple_aligned_spectrum(a, i);
  r.numeric = numeric_spectrum(a, q);
  r.classification = classify(r.numeric);
  r.match_distance = match_distance(r.predicted, r.numeric);
  r.aligned_match_distance = match_distance(r.aligned, r.numeric);

  TripleData t = triple_data(a);
  r.radicand = (1.0 - t.s1 * nu) * (1.0 - t.r1 * nv);
  r.data_dependent = (i == 2 && r.radicand >= 0.0);

  Mat analytic = analytic_jacobian_at_stationary(a, q);
  auto field = [&a](const Vec& z) { return sum_mod_field(a, z); };
  r.jacobian_gap = max_abs_diff(analytic, fd_jacobian(field, q.pack()));
  return r;
}

}  // namespace coupled
