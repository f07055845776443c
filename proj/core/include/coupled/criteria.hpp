#pragma once

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include "coupled/finite_diff.hpp"
#include "coupled/linalg.hpp"
#include "coupled/rules_pca.hpp"
#include "coupled/rules_svd.hpp"

namespace coupled {

enum class CriterionKind { P_PCA1, P_PCA2, P_SVD1 };

std::string_view to_string(CriterionKind kind);

/// P_PCA1 = wᵀCw/λ - wᵀw + ln λ
/// P_PCA2 = wᵀCw - wᵀwλ + λ
/// Throws GuardedScalarError for P_PCA1 when λ ≤ 0.
double eval_criterion(CriterionKind kind, const Mat& c, const PcaState& s);

/// P_SVD1 = uᵀAv/σ - ½uᵀu - ½vᵀv + ln σ. Throws GuardedScalarError when σ ≤ 0.
double eval_criterion(CriterionKind kind, const Mat& a, const SvdState& s);

/// Closed-form gradient with respect to the packed state (w, λ).
Vec criterion_gradient(CriterionKind kind, const Mat& c, const PcaState& s);
/// Closed-form gradient with respect to (u, v, σ).
Vec criterion_gradient(CriterionKind kind, const Mat& a, const SvdState& s);

/// wᵀCw / wᵀw. Throws DegeneracyError for w = 0.
double rayleigh_quotient(const Mat& c, const Vec& w);

/// Gradient of the Rayleigh quotient: (2/wᵀw)(Cw - w·wᵀCw/wᵀw).
Vec rayleigh_gradient(const Mat& c, const Vec& w);

/// Gradient of aᵀx/‖x‖ with respect to x: (a‖x‖ - (aᵀx)x/‖x‖)/(xᵀx).
Vec unit_scalar_gradient(const Vec& a, const Vec& x);

/// Generic Newton zero-finder field -J⁻¹(z)f(z) with J = fd_jacobian(f, z).
/// Throws SingularityError when the estimated condition number of J is at
/// least 1e12.
Vec newton_zero_field(const VecFunction& f, const Vec& z);

/// 1-norm condition number of a square matrix (explicit inverse; small
/// matrices only). Returns +inf for singular input.
double condition_number(const Mat& a);

/// H = [[I, 𝟙], [𝟙ᵀ, 0]] of order n + 1.
Mat lagrange_hessian(std::size_t n);
std::vector<std::complex<double>> lagrange_hessian_eigenvalues(std::size_t n);

/// Worst relative errors of the closed-form gradients against central
/// differences over seeded random inputs, plus gradient norms of the
/// criteria at exact principal pairs/triples.
struct DerivativeCheck {
  std::size_t samples = 0;
  double rayleigh_gradient = 0.0;
  double unit_scalar_gradient = 0.0;
  double p_pca1_gradient = 0.0;
  double p_pca2_gradient = 0.0;
  double p_svd1_gradient = 0.0;
  double p_pca1_stationary = 0.0;  // ‖fd gradient‖ at the principal pair
  double p_pca2_stationary = 0.0;
  double p_svd1_stationary = 0.0;
};

/// Random inputs have dimensions 2..max_dim; matrices come from make_spd /
/// make_cross with spectra drawn from the same stream.
DerivativeCheck check_derivatives(std::size_t samples, std::size_t max_dim, std::uint64_t seed);

}  // namespace coupled
