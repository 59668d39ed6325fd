#pragma once

#include "cifh/gaussian.hpp"

namespace cifh {

struct HoppingSpectrum {
  Vector mode_energies;  ///< ascending
  Matrix mode_frame;     ///< columns are the single-particle eigenvectors
};

/// T with T_jk = T_kj = -w'_jk, so H_quad = sum_jk T_jk a_j^+ a_k.
Matrix hopping_matrix(const CifhInstance& inst);

HoppingSpectrum hopping_spectrum(const CifhInstance& inst);

/// Covariance of the Slater determinant whose single-particle density
/// matrix <a_j^+ a_k> is the orthogonal projector `p`.
CovarianceMatrix slater_covariance(const Matrix& p);

struct QuadSolution {
  CovarianceMatrix gamma;
  double value = 0.0;  ///< lambda_max(H_quad) without convention constants
  HoppingSpectrum spectrum;
};

/// Exact maximizer of the hopping part: occupies every mode with positive
/// single-particle energy. Zero modes are left empty.
QuadSolution solve_quad(const CifhInstance& inst);

}  // namespace cifh
