#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "coupled/linalg.hpp"
#include "coupled/rules_pca.hpp"

namespace coupled {

enum class SvdRuleKind { L2, L2_SIMPLE, SUM_FULL, SUM_MOD };

std::string_view to_string(SvdRuleKind kind);
SvdRuleKind parse_svd_kind(std::string_view name);
bool is_sum(SvdRuleKind kind);

/// Left/right estimates u (dim m), v (dim n), scalar σ, and ρ for the
/// constant-sum kinds. Also used for time derivatives.
struct SvdState {
  Vec u;
  Vec v;
  double sigma = 0.0;
  std::optional<double> rho;

  /// z = (u, v, σ) or (u, v, σ, ρ).
  Vec pack() const;
  static SvdState unpack(const Vec& z, std::size_t m, std::size_t n, bool has_rho);
};

/// L2:  (Av - σu, Aᵀu - σv, ½(uᵀu - 1)), dimension m + n + 1.
/// SUM: (Av - σu, Aᵀu - ρv, 𝟙ᵀu - 1, 𝟙ᵀv - 1), dimension m + n + 2.
Vec svd_residual(SvdRuleKind kind, const Mat& a, const SvdState& s);

/// Averaged learning rule.
///
///   L2:        u̇ = σ⁻¹(Av - (uᵀAv)u) + ½(uᵀu - 1)u
///              v̇ = σ⁻¹(Aᵀu - (uᵀAv)v) + ½(vᵀv - 1)v
///              σ̇ = uᵀAv - ½σ(uᵀu + vᵀv)
///   L2_SIMPLE: norm terms dropped, σ̇ = uᵀAv - σ
///   SUM_MOD:   u̇ = σ⁻¹(Av - (𝟙ᵀAv)u),  v̇ = ρ⁻¹(Aᵀu - (𝟙ᵀAᵀu)v)
///              σ̇ = 𝟙ᵀAv - σ,  ρ̇ = 𝟙ᵀAᵀu - ρ
///   SUM_FULL:  SUM_MOD plus
///              σ̇ -= μ/(ρ‖u‖‖v‖)·[(vᵀv)(𝟙ᵀAᵀu) - vᵀAᵀu]
///              ρ̇ -= μ/(σ‖u‖‖v‖)·[(uᵀu)(𝟙ᵀAv) - uᵀAv]
///              with μ = uᵀAv/(‖u‖‖v‖) evaluated in place.
///
/// σ and ρ may be negative (the L2 system is symmetric under (u, -v, -σ) and
/// constant-sum scalars carry the sign of the sums), so the floor applies to
/// their magnitudes.
SvdState svd_rhs(SvdRuleKind kind, const Mat& a, const SvdState& s);

/// Single-sample rule with A replaced by yxᵀ, ξ = vᵀx, η = uᵀy.
///
///   L2:        u̇ = σ⁻¹ξ(y - ηu) + ½(uᵀu - 1)u
///              v̇ = σ⁻¹η(x - ξv) + ½(vᵀv - 1)v
///              σ̇ = ηξ - ½σ(uᵀu + vᵀv)
///   L2_SIMPLE: norm terms dropped, σ̇ = ηξ - σ
///   SUM_MOD:   u̇ = σ⁻¹ξ(y - (𝟙ᵀy)u),  v̇ = ρ⁻¹η(x - (𝟙ᵀx)v)
///              σ̇ = (𝟙ᵀy)ξ - σ,  ρ̇ = (𝟙ᵀx)η - ρ
///
/// SUM_FULL has no online form and throws UnsupportedError.
SvdState svd_online_rhs(SvdRuleKind kind, const Vec& y, const Vec& x, const SvdState& s);

/// u = 𝟙/m, v = 𝟙/n plus seeded noise of norm 0.1 relative (sum-free for
/// constant-sum kinds). Averaged: σ = sign(uᵀAv)·‖u‖‖Av‖ for L2 kinds,
/// σ = 𝟙ᵀAv and ρ = 𝟙ᵀAᵀu for constant-sum kinds, each replaced by the
/// floor when its magnitude is below it. Online: σ = ρ = 1.
SvdState svd_default_init(SvdRuleKind kind, const Mat& a, std::uint64_t seed, bool online);

}  // namespace coupled
