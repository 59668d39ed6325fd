#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "cifh/linalg.hpp"

namespace cifh {

/// Symmetric constraint matrix given by its nonzero entries; both (r, c) and
/// (c, r) must be listed for off-diagonal terms.
struct SdpConstraint {
  struct Entry {
    int row;
    int col;
    double value;
  };
  std::vector<Entry> entries;
  double rhs = 0.0;
};

/// maximize tr(C X) subject to tr(A_i X) = b_i, X PSD.
struct SdpProblem {
  int dim = 0;
  Matrix objective;
  std::vector<SdpConstraint> constraints;
};

enum class SdpStatus { Converged, IterLimit, Stalled };

std::string_view to_string(SdpStatus s);

struct SdpOptions {
  double tol = 1e-7;
  long max_iter = 200000;
  double alpha = 1.6;  ///< over-relaxation
  double rho = 1.0;
  long stall_window = 5000;
  /// Warm start from a previous solve of a problem with the same shape.
  std::optional<Matrix> warm_z;
  std::optional<Matrix> warm_u;
};

struct SdpSolution {
  Matrix x_matrix;  ///< PSD
  double objective_value = 0.0;
  double primal_residual = 0.0;  ///< max_i |tr(A_i X) - b_i|
  long iterations = 0;
  SdpStatus status = SdpStatus::IterLimit;
  Matrix dual_u;  ///< scaled ADMM multiplier, for warm starts
  double rho = 1.0;
};

/// tr(A X) for a constraint.
double constraint_value(const SdpConstraint& a, const Matrix& x);

/// ADMM with over-relaxation and residual balancing. Deterministic.
SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& options = {});

// ---- complex Hermitian problems ---------------------------------------------

using ComplexMat = Eigen::MatrixXcd;

struct HermitianConstraint {
  struct Entry {
    int row;
    int col;
    std::complex<double> value;
  };
  std::vector<Entry> entries;  ///< Hermitian: (c, r) must carry conj(value)
  double rhs = 0.0;
};

/// M(X) = [[Re X, -Im X], [Im X, Re X]].
Matrix real_embedding(const ComplexMat& x);

/// Inverse of M on J-invariant matrices: Re X = (Y11 + Y22)/2, Im X = (Y21 - Y12)/2.
ComplexMat extract_hermitian(const Matrix& y);

/// Real form of maximize tr(C X) s.t. tr(A_i X) = b_i, X PSD Hermitian:
/// variable M(X), constraints tr(M(A_i) M(X)) = 2 b_i, objective M(C)/2 so
/// objective values agree with the complex problem.
SdpProblem hermitian_embed(const ComplexMat& c, const std::vector<HermitianConstraint>& constraints);

}  // namespace cifh
