#pragma once

#include <cstdint>
#include <string_view>

#include "coupled/linalg.hpp"

namespace coupled {

/// Lower bound on scalar estimates (λ, σ, ρ, and vector norms in SUM_FULL).
inline constexpr double kScalarFloor = 1e-8;

enum class PcaRuleKind { L2, L2_ALA, SUM_EXACT, SUM_MOD };

std::string_view to_string(PcaRuleKind kind);
/// Accepts the enumerator names, case-insensitive. Throws ParseError.
PcaRuleKind parse_pca_kind(std::string_view name);
/// True for the constant-sum kinds.
bool is_sum(PcaRuleKind kind);

/// Eigenvector estimate w and eigenvalue estimate λ. Also used for time
/// derivatives (ẇ, λ̇).
struct PcaState {
  Vec w;
  double lambda = 0.0;

  /// z = (w, λ).
  Vec pack() const;
  static PcaState unpack(const Vec& z);
};

/// Zero-point function (Cw - λw, c(w)) where c(w) = ½(wᵀw - 1) for L2 kinds
/// and 𝟙ᵀw - 1 for constant-sum kinds.
Vec pca_residual(PcaRuleKind kind, const Mat& c, const PcaState& s);

/// Averaged learning rule.
///
///   L2:        ẇ = λ⁻¹(Cw - (wᵀCw)w) + ½(wᵀw - 1)w,  λ̇ = wᵀCw - λwᵀw
///   L2_ALA:    ẇ = λ⁻¹(Cw - (wᵀCw)w),                λ̇ = wᵀCw - λ
///   SUM_EXACT: ẇ = λ⁻¹(Cw - (𝟙ᵀCw)w),                λ̇ = wᵀCw/wᵀw - λ
///   SUM_MOD:   ẇ = λ⁻¹(Cw - (𝟙ᵀCw)w),                λ̇ = 𝟙ᵀCw - λ
///
/// Throws GuardedScalarError when λ < kScalarFloor.
PcaState pca_rhs(PcaRuleKind kind, const Mat& c, const PcaState& s);

/// Single-sample rule with C replaced by xxᵀ and ξ = wᵀx.
///
///   L2:        ẇ = λ⁻¹ξ(x - ξw) + ½(wᵀw - 1)w,  λ̇ = ξ² - wᵀwλ
///   L2_ALA:    ẇ = λ⁻¹ξ(x - ξw),                λ̇ = ξ² - λ
///   SUM_EXACT: ẇ = λ⁻¹ξ(x - (𝟙ᵀx)w),            λ̇ = ξ²/wᵀw - λ
///   SUM_MOD:   ẇ = λ⁻¹ξ(x - (𝟙ᵀx)w),            λ̇ = (𝟙ᵀx)ξ - λ
PcaState pca_online_rhs(PcaRuleKind kind, const Vec& x, const PcaState& s);

/// w̃ / 𝟙ᵀw̃. Throws DegeneracyError when |𝟙ᵀw̃| ≤ 1e-8.
Vec constraint_map_sum(const Vec& w_tilde);

/// Starting point 𝟙/n plus seeded noise of norm 0.1‖𝟙/n‖ (projected onto
/// 𝟙ᵀnoise = 0 for constant-sum kinds). λ = wᵀCw, or 1 when `online`.
PcaState pca_default_init(PcaRuleKind kind, const Mat& c, std::uint64_t seed, bool online);

}  // namespace coupled
