#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cifh/linalg.hpp"
#include "cifh/model.hpp"

namespace cifh {

/// x in {0,1}^n; entry j is the occupation of mode j.
using BitAssignment = std::vector<int>;

/// Covariance matrix of a fermionic Gaussian state on n modes,
/// Gamma_ab = <i c_a c_b> for a != b, with mode j owning Majoranas 2j, 2j+1.
/// Always exactly antisymmetric; spectral norm at most 1 + 1e-9.
class CovarianceMatrix {
 public:
  static constexpr double kFeasibilityTol = 1e-9;

  CovarianceMatrix() = default;

  /// Antisymmetrizes and validates. Throws Error when infeasible.
  explicit CovarianceMatrix(const Matrix& gamma);

  /// Skips the spectral check; caller guarantees feasibility.
  static CovarianceMatrix trusted(const Matrix& gamma);

  const Matrix& gamma() const noexcept { return gamma_; }
  int n() const noexcept { return static_cast<int>(gamma_.rows() / 2); }
  double operator()(Eigen::Index a, Eigen::Index b) const { return gamma_(a, b); }

  /// Gamma_{2j,2j+1} = 1 - 2<n_j>.
  double mode_value(int j) const { return gamma_(2 * j, 2 * j + 1); }

 private:
  struct Trusted {};
  CovarianceMatrix(const Matrix& gamma, Trusted);
  Matrix gamma_;
};

struct PurityCertificate {
  bool is_pure = false;
  double max_deviation = 0.0;  ///< max |(Gamma Gamma^T - I)_ab|
};

PurityCertificate purity(const CovarianceMatrix& g);

CovarianceMatrix covariance_from_bits(const BitAssignment& x);
CovarianceMatrix vacuum_covariance(int n);
CovarianceMatrix zero_covariance(int n);

/// <c_i c_j c_k c_l> for i < j < k < l (0-based Majorana indices).
double wick_quartic(const Matrix& gamma, int i, int j, int k, int l);

/// <n_j n_k> for distinct modes.
double pair_occupation(const Matrix& gamma, int j, int k);

double energy_class(const Matrix& gamma, const CifhInstance& inst);
double energy_quad(const Matrix& gamma, const CifhInstance& inst);
double energy_total(const Matrix& gamma, const CifhInstance& inst);

inline double energy_class(const CovarianceMatrix& g, const CifhInstance& inst) { return energy_class(g.gamma(), inst); }
inline double energy_quad(const CovarianceMatrix& g, const CifhInstance& inst) { return energy_quad(g.gamma(), inst); }
inline double energy_total(const CovarianceMatrix& g, const CifhInstance& inst) { return energy_total(g.gamma(), inst); }

/// Diagonal energy of a computational basis state.
double classical_value(const BitAssignment& x, const CifhInstance& inst);

/// sum_i p_i Gamma_i. Weights must be nonnegative and sum to 1 (1e-12).
CovarianceMatrix blend(const std::vector<std::pair<double, CovarianceMatrix>>& components);

/// Keeps only the mode-diagonal blocks of Gamma_quad, negated.
CovarianceMatrix mediator(const CovarianceMatrix& gamma_quad);

/// Pair symmetries of particle-number-conserving states:
/// Gamma_{2j,2k+1} = -Gamma_{2j+1,2k} and Gamma_{2j,2k} = Gamma_{2j+1,2k+1}.
bool slater_check(const CovarianceMatrix& g, double tol = 1e-9);

/// Derandomized rounding of a mixed Gaussian state to a pure one whose
/// energy is at least that of the input.
CovarianceMatrix purify(const CovarianceMatrix& g, const CifhInstance& inst);

/// Heuristic ascent over pure states by Givens rotations of Majorana planes
/// and single-Majorana reflections. `budget` caps the number of sweeps.
CovarianceMatrix local_refine(const CovarianceMatrix& g0, const CifhInstance& inst, int budget);

/// Random covariance matrix from a Haar-like rotation; block values are +-1
/// when `pure`, else uniform in [-1, 1].
CovarianceMatrix random_covariance(int n, std::uint64_t seed, bool pure);

}  // namespace cifh
