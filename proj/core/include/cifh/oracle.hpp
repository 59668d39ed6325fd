#pragma once

#include <complex>
#include <vector>

#include <Eigen/Sparse>

#include "cifh/gaussian.hpp"

namespace cifh {

inline constexpr int kOracleMaxModes = 14;
inline constexpr int kDensityMaxModes = 7;

using SparseMatrix = Eigen::SparseMatrix<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Jordan-Wigner: basis index bit j is the occupation x_j, and
/// a_j = (prod_{k<j} Z_k)(X_j + iY_j)/2. Every CIFH Hamiltonian is real in
/// this basis.
SparseMatrix annihilation_operator(int n, int j);
SparseMatrix number_operator(int n);

/// H built from operator products of the annihilation matrices.
SparseMatrix jw_hamiltonian(const CifhInstance& inst);

/// c_{2j} = a_j + a_j^+, c_{2j+1} = i(a_j - a_j^+), dense, n <= 7.
std::vector<ComplexMatrix> majorana_matrices(int n);

/// c_a applied to a state vector (n <= 14).
ComplexVector apply_majorana(int n, int a, const ComplexVector& v);

struct SectorSpectrum {
  int n = 0;
  std::vector<double> per_sector_max;  ///< index N = 0..n
  std::vector<double> per_sector_min;
  double global_max = 0.0;
  double global_min = 0.0;
  std::vector<double> eigenvalues;  ///< all, descending
  ComplexVector top_vector;         ///< filled on request; a global maximizer

  /// Upper concave envelope of {(N, m_N)} at q.
  double avg_q_max(double q) const;
};

SectorSpectrum exact_spectrum(const CifhInstance& inst, bool want_top_vector = false);

/// rho = 2^-n prod_j (1 + i l_j c~_{2j} c~_{2j+1}), c~ = R c.
ComplexMatrix gaussian_density_matrix(const CovarianceMatrix& g);

/// Gamma_ab = <v| i c_a c_b |v> for a != b.
CovarianceMatrix covariance_of_state(int n, const ComplexVector& v);

/// Re tr(rho H).
double expectation(const ComplexMatrix& rho, const SparseMatrix& h);
double expectation(const ComplexVector& v, const SparseMatrix& h);

struct GapBoundRecord {
  double lambda_max = 0.0;
  double gap = 0.0;
  double s = 0.0;
  double alpha_star = 0.0;
  double ratio_upper = 0.0;
};

/// Upper bound on the ratio Gaussian states can reach on the 4-mode
/// Heisenberg line, from its spectrum and top-eigenvector covariance.
GapBoundRecord heisenberg_gap_bound();

/// g_s(a) = (a^2 sqrt(s) + 1 - a^2)^2 + 6 (2 a sqrt(1 - a^2) + 1 - a^2)^2.
double gap_overlap_g(double s, double alpha);

/// Best energy over qubit product states with qubit 0 fixed to |0> and each
/// other qubit on a (theta, phi) grid of the Bloch sphere. n <= 6.
double product_state_grid_max(const CifhInstance& inst, int theta_steps, int phi_steps);

}  // namespace cifh
