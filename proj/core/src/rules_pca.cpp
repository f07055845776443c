#include "coupled/rules_pca.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "coupled/errors.hpp"
#include "coupled/random.hpp"

namespace coupled {

namespace {

void check_dims(const Mat& c, const Vec& w) {
  if (!c.square()) throw DimensionError("covariance matrix is not square");
  if (w.size() < 2) throw DimensionError("state dimension must be at least 2");
  if (c.rows() != w.size())
    throw DimensionError("state dimension " + std::to_string(w.size()) + " does not match matrix order " +
                         std::to_string(c.rows()));
}

void guard_lambda(double lambda) {
  if (!(lambda >= kScalarFloor)) throw GuardedScalarError("lambda", lambda, kScalarFloor);
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

}  // namespace

std::string_view to_string(PcaRuleKind kind) {
  switch (kind) {
    case PcaRuleKind::L2: return "L2";
    case PcaRuleKind::L2_ALA: return "L2_ALA";
    case PcaRuleKind::SUM_EXACT: return "SUM_EXACT";
    case PcaRuleKind::SUM_MOD: return "SUM_MOD";
  }
  return "?";
}

PcaRuleKind parse_pca_kind(std::string_view name) {
  std::string u = upper(name);
  for (auto k : {PcaRuleKind::L2, PcaRuleKind::L2_ALA, PcaRuleKind::SUM_EXACT, PcaRuleKind::SUM_MOD})
    if (u == to_string(k)) return k;
  throw ParseError("unknown PCA rule kind '" + std::string(name) + "' (expected L2, L2_ALA, SUM_EXACT or SUM_MOD)");
}

bool is_sum(PcaRuleKind kind) { return kind == PcaRuleKind::SUM_EXACT || kind == PcaRuleKind::SUM_MOD; }

Vec PcaState::pack() const {
  Vec z(w.size() + 1);
  std::copy(w.begin(), w.end(), z.begin());
  z[w.size()] = lambda;
  return z;
}

PcaState PcaState::unpack(const Vec& z) {
  if (z.size() < 3) throw DimensionError("PCA state vector needs at least 3 entries");
  return {z.segment(0, z.size() - 1), z[z.size() - 1]};
}

Vec pca_residual(PcaRuleKind kind, const Mat& c, const PcaState& s) {
  check_dims(c, s.w);
  const std::size_t n = s.w.size();
  Vec f(n + 1);
  Vec cw = c * s.w;
  for (std::size_t i = 0; i < n; ++i) f[i] = cw[i] - s.lambda * s.w[i];
  f[n] = is_sum(kind) ? sum(s.w) - 1.0 : 0.5 * (dot(s.w, s.w) - 1.0);
  return f;
}

PcaState pca_rhs(PcaRuleKind kind, const Mat& c, const PcaState& s) {
  check_dims(c, s.w);
  guard_lambda(s.lambda);
  const Vec& w = s.w;
  const double lambda = s.lambda;
  Vec cw = c * w;
  const double wcw = dot(w, cw);
  const double ww = dot(w, w);
  PcaState d;
  switch (kind) {
    case PcaRuleKind::L2:
      d.w = (cw - wcw * w) / lambda + 0.5 * (ww - 1.0) * w;
      d.lambda = wcw - lambda * ww;
      break;
    case PcaRuleKind::L2_ALA:
      d.w = (cw - wcw * w) / lambda;
      d.lambda = wcw - lambda;
      break;
    case PcaRuleKind::SUM_EXACT:
      d.w = (cw - sum(cw) * w) / lambda;
      d.lambda = wcw / ww - lambda;
      break;
    case PcaRuleKind::SUM_MOD:
      d.w = (cw - sum(cw) * w) / lambda;
      d.lambda = sum(cw) - lambda;
      break;
  }
  return d;
}

PcaState pca_online_rhs(PcaRuleKind kind, const Vec& x, const PcaState& s) {
  if (s.w.size() < 2) throw DimensionError("state dimension must be at least 2");
  if (x.size() != s.w.size()) throw DimensionError("sample dimension does not match state dimension");
  guard_lambda(s.lambda);
  const Vec& w = s.w;
  const double lambda = s.lambda;
  const double xi = dot(w, x);
  const double ww = dot(w, w);
  PcaState d;
  switch (kind) {
    case PcaRuleKind::L2:
      d.w = (xi / lambda) * (x - xi * w) + 0.5 * (ww - 1.0) * w;
      d.lambda = xi * xi - ww * lambda;
      break;
    case PcaRuleKind::L2_ALA:
      d.w = (xi / lambda) * (x - xi * w);
      d.lambda = xi * xi - lambda;
      break;
    case PcaRuleKind::SUM_EXACT:
      d.w = (xi / lambda) * (x - sum(x) * w);
      d.lambda = xi * xi / ww - lambda;
      break;
    case PcaRuleKind::SUM_MOD:
      d.w = (xi / lambda) * (x - sum(x) * w);
      d.lambda = sum(x) * xi - lambda;
      break;
  }
  return d;
}

Vec constraint_map_sum(const Vec& w_tilde) {
  double s = sum(w_tilde);
  if (!(std::abs(s) > 1e-8))
    throw DegeneracyError("vector is (nearly) parallel to the constant-sum plane: 1ᵀw = " + std::to_string(s));
  return w_tilde / s;
}

PcaState pca_default_init(PcaRuleKind kind, const Mat& c, std::uint64_t seed, bool online) {
  const std::size_t n = c.rows();
  if (n < 2 || !c.square()) throw DimensionError("default init needs a square matrix of order >= 2");
  SplitMix64 rng(seed);
  Vec base = Vec::ones(n) / static_cast<double>(n);
  Vec noise = rng.gaussian_vec(n);
  if (is_sum(kind)) noise -= (sum(noise) / static_cast<double>(n)) * Vec::ones(n);
  double nn = norm(noise);
  if (nn > 0.0) noise *= 0.1 * norm(base) / nn;
  PcaState s{base + noise, 1.0};
  if (!online) s.lambda = dot(s.w, c * s.w);
  return s;
}

}  // namespace coupled
