#pragma once

#include <Eigen/Dense>

namespace cifh {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct SymEig {
  Vector values;   ///< ascending
  Matrix vectors;  ///< columns orthonormal
};

/// Symmetric eigendecomposition. Throws Error if `m` is not symmetric to
/// 1e-12 relative.
SymEig eig_sym(const Matrix& m);

/// Real antisymmetric normal form: A = R^T (+)_j [[0, l_j], [-l_j, 0]] R.
struct AntisymBlockForm {
  Matrix rotation;      ///< R, special orthogonal
  Vector block_values;  ///< l_j, descending; all >= 0 except possibly the last
};

/// Block-diagonalizes a real antisymmetric matrix of even dimension.
/// Block values are reported nonnegative and sorted descending. Because
/// det(R) = +1 is also enforced, an odd number of negative Pfaffian signs
/// with no zero block leaves the smallest value negative.
AntisymBlockForm block_diagonalize_antisym(const Matrix& a);

/// Rebuilds R^T (+)_j [[0, l_j], [-l_j, 0]] R.
Matrix assemble_antisym(const Matrix& rotation, const Vector& block_values);

/// Frobenius-nearest positive semidefinite matrix (eigenvalue clipping).
Matrix project_psd(const Matrix& m);

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const Matrix& m);

/// Spectral norm.
double spectral_norm(const Matrix& m);

}  // namespace cifh
