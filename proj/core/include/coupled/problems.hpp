#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coupled/dynamics.hpp"
#include "coupled/eigen.hpp"
#include "coupled/rules_pca.hpp"
#include "coupled/rules_svd.hpp"

namespace coupled {

/// Angle between two nonzero vectors ignoring sign, in [0, π/2].
double unsigned_angle(const Vec& a, const Vec& b);

/// A covariance matrix, a rule kind, and the sym_eig oracle, packaged for
/// integration and diagnostics on packed states z = (w, λ).
class PcaProblem {
 public:
  PcaProblem(Mat c, PcaRuleKind kind);

  const Mat& matrix() const noexcept { return c_; }
  PcaRuleKind kind() const noexcept { return kind_; }
  const Spectrum& oracle() const noexcept { return eig_; }
  std::size_t state_size() const noexcept { return c_.rows() + 1; }

  Vec field(const Vec& z) const;
  Vec residual(const Vec& z) const;
  Diagnostics diagnose(const Vec& z) const;
  std::vector<std::string> state_names() const;

  /// Constrained stationary point of eigenpair i (0-based): w̃ᵢ for L2 kinds,
  /// constraint_map_sum(w̃ᵢ) for constant-sum kinds, λ = λᵢ.
  PcaState stationary_point(std::size_t i = 0) const;

  Field as_field() const;
  Probe as_probe() const;

 private:
  Mat c_;
  PcaRuleKind kind_;
  Spectrum eig_;
};

/// Cross-covariance counterpart of PcaProblem on z = (u, v, σ[, ρ]).
class SvdProblem {
 public:
  SvdProblem(Mat a, SvdRuleKind kind);

  const Mat& matrix() const noexcept { return a_; }
  SvdRuleKind kind() const noexcept { return kind_; }
  const SvdResult& oracle() const noexcept { return svd_; }
  std::size_t rows() const noexcept { return a_.rows(); }
  std::size_t cols() const noexcept { return a_.cols(); }
  std::size_t state_size() const noexcept { return rows() + cols() + (is_sum(kind_) ? 2 : 1); }

  SvdState unpack(const Vec& z) const { return SvdState::unpack(z, rows(), cols(), is_sum(kind_)); }
  Vec field(const Vec& z) const;
  Vec residual(const Vec& z) const;
  /// angle is the larger of the two factor angles.
  Diagnostics diagnose(const Vec& z) const;
  std::vector<std::string> state_names() const;

  /// Stationary point of singular triple i (0-based). L2 kinds: (ũᵢ, ṽᵢ, μᵢ).
  /// Constant-sum kinds: u = ũᵢ/sᵢ, v = ṽᵢ/rᵢ, σ = 𝟙ᵀAv, ρ = 𝟙ᵀAᵀu with
  /// sᵢ = 𝟙ᵀũᵢ, rᵢ = 𝟙ᵀṽᵢ.
  SvdState stationary_point(std::size_t i = 0) const;

  Field as_field() const;
  Probe as_probe() const;

 private:
  Mat a_;
  SvdRuleKind kind_;
  SvdResult svd_;
};

}  // namespace coupled
