#include "coupled/rules_svd.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "coupled/errors.hpp"
#include "coupled/random.hpp"

namespace coupled {

namespace {

void check_dims(const Mat& a, const SvdState& s) {
  if (s.u.size() < 2 || s.v.size() < 2) throw DimensionError("state dimensions must be at least 2");
  if (a.rows() != s.u.size() || a.cols() != s.v.size())
    throw DimensionError("state dimensions (" + std::to_string(s.u.size()) + ", " + std::to_string(s.v.size()) +
                         ") do not match matrix shape " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
}

void check_rho(SvdRuleKind kind, const SvdState& s) {
  if (is_sum(kind) && !s.rho) throw DimensionError(std::string(to_string(kind)) + " needs a rho estimate");
  if (!is_sum(kind) && s.rho) throw DimensionError(std::string(to_string(kind)) + " has no rho estimate");
}

void guard(const char* name, double value) {
  if (!(std::abs(value) >= kScalarFloor)) throw GuardedScalarError(name, value, kScalarFloor);
}

Vec noise_for(SplitMix64& rng, const Vec& base, bool sum_free) {
  const std::size_t n = base.size();
  Vec noise = rng.gaussian_vec(n);
  if (sum_free) noise -= (sum(noise) / static_cast<double>(n)) * Vec::ones(n);
  double nn = norm(noise);
  if (nn > 0.0) noise *= 0.1 * norm(base) / nn;
  return noise;
}

double floored(double x) {
  if (std::abs(x) >= kScalarFloor) return x;
  return x < 0.0 ? -kScalarFloor : kScalarFloor;
}

}  // namespace

std::string_view to_string(SvdRuleKind kind) {
  switch (kind) {
    case SvdRuleKind::L2: return "L2";
    case SvdRuleKind::L2_SIMPLE: return "L2_SIMPLE";
    case SvdRuleKind::SUM_FULL: return "SUM_FULL";
    case SvdRuleKind::SUM_MOD: return "SUM_MOD";
  }
  return "?";
}

SvdRuleKind parse_svd_kind(std::string_view name) {
  std::string u(name);
  for (char& ch : u) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (auto k : {SvdRuleKind::L2, SvdRuleKind::L2_SIMPLE, SvdRuleKind::SUM_FULL, SvdRuleKind::SUM_MOD})
    if (u == to_string(k)) return k;
  throw ParseError("unknown SVD rule kind '" + std::string(name) +
                   "' (expected L2, L2_SIMPLE, SUM_FULL or SUM_MOD)");
}

bool is_sum(SvdRuleKind kind) { return kind == SvdRuleKind::SUM_FULL || kind == SvdRuleKind::SUM_MOD; }

Vec SvdState::pack() const {
  Vec tail(rho ? 2 : 1);
  tail[0] = sigma;
  if (rho) tail[1] = *rho;
  return concat({&u, &v, &tail});
}

SvdState SvdState::unpack(const Vec& z, std::size_t m, std::size_t n, bool has_rho) {
  if (z.size() != m + n + (has_rho ? 2 : 1)) throw DimensionError("SVD state vector has the wrong length");
  SvdState s{z.segment(0, m), z.segment(m, n), z[m + n], std::nullopt};
  if (has_rho) s.rho = z[m + n + 1];
  return s;
}

Vec svd_residual(SvdRuleKind kind, const Mat& a, const SvdState& s) {
  check_dims(a, s);
  check_rho(kind, s);
  const std::size_t m = s.u.size();
  const std::size_t n = s.v.size();
  Vec av = a * s.v;
  Vec atu = transpose_times(a, s.u);
  const double rho = is_sum(kind) ? *s.rho : s.sigma;
  Vec f(m + n + (is_sum(kind) ? 2 : 1));
  for (std::size_t i = 0; i < m; ++i) f[i] = av[i] - s.sigma * s.u[i];
  for (std::size_t j = 0; j < n; ++j) f[m + j] = atu[j] - rho * s.v[j];
  if (is_sum(kind)) {
    f[m + n] = sum(s.u) - 1.0;
    f[m + n + 1] = sum(s.v) - 1.0;
  } else {
    f[m + n] = 0.5 * (dot(s.u, s.u) - 1.0);
  }
  return f;
}

SvdState svd_rhs(SvdRuleKind kind, const Mat& a, const SvdState& s) {
  check_dims(a, s);
  check_rho(kind, s);
  guard("sigma", s.sigma);
  const Vec& u = s.u;
  const Vec& v = s.v;
  const double sigma = s.sigma;
  Vec av = a * v;
  Vec atu = transpose_times(a, u);
  const double uav = dot(u, av);
  const double uu = dot(u, u);
  const double vv = dot(v, v);
  SvdState d;
  switch (kind) {
    case SvdRuleKind::L2:
      d.u = (av - uav * u) / sigma + 0.5 * (uu - 1.0) * u;
      d.v = (atu - uav * v) / sigma + 0.5 * (vv - 1.0) * v;
      d.sigma = uav - 0.5 * sigma * (uu + vv);
      break;
    case SvdRuleKind::L2_SIMPLE:
      d.u = (av - uav * u) / sigma;
      d.v = (atu - uav * v) / sigma;
      d.sigma = uav - sigma;
      break;
    case SvdRuleKind::SUM_FULL:
    case SvdRuleKind::SUM_MOD: {
      const double rho = *s.rho;
      guard("rho", rho);
      const double sav = sum(av);
      const double satu = sum(atu);
      d.u = (av - sav * u) / sigma;
      d.v = (atu - satu * v) / rho;
      d.sigma = sav - sigma;
      d.rho = satu - rho;
      if (kind == SvdRuleKind::SUM_FULL) {
        const double nu = std::sqrt(uu);
        const double nv = std::sqrt(vv);
        guard("|u|", nu);
        guard("|v|", nv);
        const double mu = uav / (nu * nv);
        *d.rho -= mu / (sigma * nu * nv) * (uu * sav - uav);
        d.sigma -= mu / (rho * nu * nv) * (vv * satu - uav);
      }
      break;
    }
  }
  return d;
}

SvdState svd_online_rhs(SvdRuleKind kind, const Vec& y, const Vec& x, const SvdState& s) {
  if (kind == SvdRuleKind::SUM_FULL)
    throw UnsupportedError("SUM_FULL has no online form: its mu terms need the full matrix A");
  check_rho(kind, s);
  if (s.u.size() < 2 || s.v.size() < 2) throw DimensionError("state dimensions must be at least 2");
  if (y.size() != s.u.size() || x.size() != s.v.size())
    throw DimensionError("sample dimensions do not match state dimensions");
  guard("sigma", s.sigma);
  const Vec& u = s.u;
  const Vec& v = s.v;
  const double sigma = s.sigma;
  const double xi = dot(v, x);
  const double eta = dot(u, y);
  SvdState d;
  switch (kind) {
    case SvdRuleKind::L2: {
      const double uu = dot(u, u);
      const double vv = dot(v, v);
      d.u = (xi / sigma) * (y - eta * u) + 0.5 * (uu - 1.0) * u;
      d.v = (eta / sigma) * (x - xi * v) + 0.5 * (vv - 1.0) * v;
      d.sigma = eta * xi - 0.5 * sigma * (uu + vv);
      break;
    }
    case SvdRuleKind::L2_SIMPLE:
      d.u = (xi / sigma) * (y - eta * u);
      d.v = (eta / sigma) * (x - xi * v);
      d.sigma = eta * xi - sigma;
      break;
    case SvdRuleKind::SUM_MOD:
    case SvdRuleKind::SUM_FULL: {
      const double rho = *s.rho;
      guard("rho", rho);
      d.u = (xi / sigma) * (y - sum(y) * u);
      d.v = (eta / rho) * (x - sum(x) * v);
      d.sigma = sum(y) * xi - sigma;
      d.rho = sum(x) * eta - rho;
      break;
    }
  }
  return d;
}

SvdState svd_default_init(SvdRuleKind kind, const Mat& a, std::uint64_t seed, bool online) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < 2 || n < 2) throw DimensionError("default init needs a matrix with at least 2 rows and 2 columns");
  SplitMix64 rng(seed);
  Vec bu = Vec::ones(m) / static_cast<double>(m);
  Vec bv = Vec::ones(n) / static_cast<double>(n);
  const bool sum_free = is_sum(kind);
  Vec nu = noise_for(rng, bu, sum_free);
  Vec nv = noise_for(rng, bv, sum_free);
  SvdState s{bu + nu, bv + nv, 1.0, std::nullopt};
  if (is_sum(kind)) s.rho = 1.0;
  if (online) return s;
  if (is_sum(kind)) {
    s.sigma = floored(sum(a * s.v));
    s.rho = floored(sum(transpose_times(a, s.u)));
  } else {
    // |uᵀAv| can be far below ‖u‖‖Av‖ at the start, and σ⁻¹(Av - (uᵀAv)u)
    // then moves u by more than one unit per unit time. The bound keeps the
    // first steps at the pace of the linearized system.
    Vec av = a * s.v;
    const double bound = norm(s.u) * norm(av);
    s.sigma = floored(dot(s.u, av) < 0.0 ? -bound : bound);
  }
  return s;
}

}  // namespace coupled
