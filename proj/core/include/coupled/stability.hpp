#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "coupled/linalg.hpp"
#include "coupled/rules_svd.hpp"

namespace coupled {

using Complex = std::complex<double>;

enum class Classification { attractor, saddle, non_hyperbolic };

std::string_view to_string(Classification c);

/// Stationary quadruple (u, v, σ, ρ) of the constant-sum SVD system for
/// singular triple i (1-based): u = ũᵢ/sᵢ, v = ṽᵢ/rᵢ, σ = 𝟙ᵀAv, ρ = 𝟙ᵀAᵀu,
/// then 5 Newton steps on the SUM_MOD residual.
SvdState stationary_quadruple(const Mat& a, std::size_t i);

/// Max violation over Av = σu, Aᵀu = ρv, 𝟙ᵀu = 1, 𝟙ᵀv = 1, σ = 𝟙ᵀAv,
/// ρ = 𝟙ᵀAᵀu, with the index (0..5) of the worst equation.
std::pair<double, int> stationarity_violation(const Mat& a, const SvdState& q);

/// Closed-form Jacobian of the SUM_MOD field at a stationary quadruple:
///
///   [ -I_m               σ⁻¹(A - u𝟙ᵀA)   0   0 ]
///   [ ρ⁻¹(Aᵀ - v𝟙ᵀAᵀ)   -I_n              0   0 ]
///   [ 0                  𝟙ᵀA              -1  0 ]
///   [ 𝟙ᵀAᵀ               0                0  -1 ]
///
/// Throws PreconditionError naming the violated equation when the input is
/// not stationary within 1e-8·(1 + ‖A‖).
Mat analytic_jacobian_at_stationary(const Mat& a, const SvdState& q);

/// Closed-form spectrum as published for triple i (1-based):
///   -1 with multiplicity m + 2 - n,
///   -1 ± (|μ₁|/|μᵢ|)·√((1 - s₁‖u‖)(1 - r₁‖v‖)),
///   -1 ± |μⱼ|/|μᵢ| for j = 2..n,
/// where s₁, r₁ are the sums of the principal singular vectors oriented so
/// that both are positive, and u, v belong to triple i.
/// Throws UnsupportedError when m < n.
std::vector<Complex> predicted_spectrum(const Mat& a, std::size_t i);

/// Spectrum obtained when the analysed triple is placed first in the
/// singular basis:
///   -1 with multiplicity m - n + 4,
///   -1 ± |μⱼ|/|μᵢ| for every j ≠ i.
/// At the principal triple this coincides with predicted_spectrum.
std::vector<Complex> triple_aligned_spectrum(const Mat& a, std::size_t i);

/// gen_eig of the finite-difference Jacobian of the SUM_MOD field at q.
std::vector<Complex> numeric_spectrum(const Mat& a, const SvdState& q);

/// attractor: all real parts < -1e-6; saddle: some real part > 1e-6;
/// non-hyperbolic: the largest real part is within 1e-6 of zero.
Classification classify(const std::vector<Complex>& eigenvalues);

/// Greedy nearest-pair matching of two equal-size multisets; returns the
/// largest matched distance. Throws DimensionError on a size mismatch.
double match_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

struct StabilityReport {
  std::size_t triple_index = 0;  // 1-based
  SvdState state;
  double mu = 0.0;                // uᵀAv/(‖u‖‖v‖)
  std::vector<Complex> predicted;  // predicted_spectrum
  std::vector<Complex> aligned;    // triple_aligned_spectrum
  std::vector<Complex> numeric;
  Classification classification = Classification::attractor;
  /// Second triple with a real square root in the published formula, whose
  /// sign is then not fixed by the data-independent analysis.
  bool data_dependent = false;
  double radicand = 0.0;  // (1 - s₁‖u‖)(1 - r₁‖v‖)
  double match_distance = 0.0;          // predicted vs numeric
  double aligned_match_distance = 0.0;  // aligned vs numeric
  double jacobian_gap = 0.0;            // max |analytic - finite difference|
  double sigma_rho_gap = 0.0;           // |σρ - μ²|
};

/// Full analysis of triple i (1-based). Requires m ≥ n.
StabilityReport analyze_triple(const Mat& a, std::size_t i);

}  // namespace coupled
