#pragma once

#include <complex>
#include <vector>

#include "coupled/linalg.hpp"

namespace coupled {

/// Eigenvalues with orthonormal eigenvectors stored as matrix columns.
struct Spectrum {
  std::vector<double> values;
  Mat vectors;

  Vec vector(std::size_t i) const { return vectors.col(i); }
};

/// A = U diag(singular_values) Vᵀ with U m×m and V n×n orthogonal.
struct SvdResult {
  Mat left;
  std::vector<double> singular_values;  // min(m, n) values, descending
  Mat right;

  Vec left_vector(std::size_t i) const { return left.col(i); }
  Vec right_vector(std::size_t i) const { return right.col(i); }
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Eigenvalues are sorted descending. Each eigenvector is oriented so that its
/// first component with magnitude above 1e-12 is positive.
/// Throws DimensionError for non-square input and SymmetryError when the
/// relative asymmetry exceeds 1e-10.
Spectrum sym_eig(const Mat& c);

/// Singular value decomposition built on sym_eig of AᵀA.
///
/// Right vectors come from the Jacobi eigenvectors, singular values are
/// recomputed as ‖A v_i‖ (accurate down to zero), and left vectors are
/// A v_i / s_i for s_i > 1e-12‖A‖, completed by Gram-Schmidt otherwise.
SvdResult svd_factor(const Mat& a);

/// All eigenvalues of a general real square matrix.
///
/// Balancing, Householder reduction to Hessenberg form, then Francis
/// double-shift QR. Complex eigenvalues come in exact conjugate pairs. The
/// result is sorted by descending real part, then descending imaginary part.
/// Throws ConvergenceError after 100·n QR sweeps, naming the unreduced block.
std::vector<std::complex<double>> gen_eig(const Mat& m);

}  // namespace coupled
