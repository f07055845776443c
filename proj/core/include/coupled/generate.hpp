#pragma once

#include <cstdint>
#include <vector>

#include "coupled/linalg.hpp"
#include "coupled/random.hpp"

namespace coupled {

/// Haar-like random orthogonal matrix: QR of a Gaussian matrix with the
/// diagonal of R made positive.
Mat random_orthogonal(std::size_t n, SplitMix64& rng);

/// Symmetric positive definite C = Qᵀ diag(eigenvalues) Q.
///
/// Eigenvalues must be positive, strictly descending and separated by at
/// least 1e-6 relative. Q is re-drawn from a derived seed until the principal
/// eigenvector has |𝟙ᵀw̃₁| > 1e-6, so the constant-sum rules have a proper
/// principal stationary point.
Mat make_spd(const std::vector<double>& eigenvalues, std::uint64_t seed);

/// m×n matrix A = U S Vᵀ with the given singular values (at most min(m, n)).
///
/// The first left column is sign-flipped so that (𝟙ᵀũ₁)(𝟙ᵀṽ₁) > 0, which
/// makes the principal constant-sum scalars positive. Re-draws while
/// |𝟙ᵀũ₁| or |𝟙ᵀṽ₁| is at most 1e-6.
Mat make_cross(const std::vector<double>& singulars, std::size_t m, std::size_t n, std::uint64_t seed);

}  // namespace coupled
