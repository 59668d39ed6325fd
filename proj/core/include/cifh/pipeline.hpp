#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cifh/classical.hpp"
#include "cifh/oracle.hpp"
#include "cifh/quad.hpp"
#include "cifh/sdp.hpp"

namespace cifh {

/// f_beta(p) = (p^2 beta + (1 - p)/2) / (beta + 1); beta = inf gives p^2.
double f_beta_traceless(double beta, double p);

/// Psd counterpart with classical ratio r:
/// ((1 + p^2)/2 r beta + 1/2 + (1 - p)/4) / (beta + 1).
double f_beta_psd(double beta, double p, double r);

/// 1 / (2 ((n - 2q)/n + 3/2)).
double fixed_particle_guarantee(int n, int q);

struct RatioDerivation {
  double a_upper = 0.0;  ///< bound on lambda_max(H_class) used in the denominator
  double b_upper = 0.0;  ///< lambda_max(H_quad)
  double beta = 0.0;     ///< a_upper / b_upper, +inf when b_upper = 0
  double f_beta_0 = 0.0;
  double f_beta_1 = 0.0;
  double guarantee = 0.0;  ///< proven lower bound on the ratio for this run
  double nominal_ratio = 0.0;  ///< the ratio the construction guarantees in general
  bool class_exact = false;
  double classical_value = 0.0;
  std::string classical_method;
  double classical_ratio = 1.0;  ///< r used in the psd bound
  std::optional<double> oracle_lambda_max;
  std::optional<bool> sandwich_holds;  ///< (A+B)/3 <= lambda_max <= A+B
};

struct CurvePoint {
  double p_class = 0.0;
  double energy_class = 0.0;
  double energy_quad = 0.0;
  double energy_total = 0.0;
  double ratio = 0.0;  ///< exact ratio when the oracle ran, else certified
  SdpStatus status = SdpStatus::Converged;
  double primal_residual = 0.0;
  long iterations = 0;
};

struct CertifiedSolution {
  CovarianceMatrix gamma;
  double p_class = 0.0;
  double energy_class = 0.0;
  double energy_quad = 0.0;
  double energy_total = 0.0;
  double ratio_bound = 0.0;
  RatioDerivation derivation;
  std::optional<double> exact_ratio;
  std::string method;     ///< solver path, e.g. "traceless"
  std::string candidate;  ///< which candidate won the selection
  std::vector<CurvePoint> curve;
  double max_sdp_residual = 0.0;
  std::optional<double> particle_expectation;
  bool purified = false;
};

enum class PsdClassicalMode { Auto, Exact, GoemansWilliamson };

struct SolveOptions {
  int grid = 20;  ///< sweep points j/M, j = 0..M
  double sdp_tol = 1e-7;
  long sdp_max_iter = 20000;  ///< per grid point
  int brute_force_gate = 20;
  int oracle_gate = 12;
  bool oracle = false;
  int gw_trials = 64;
  std::uint64_t seed = 0;
  PsdClassicalMode psd_mode = PsdClassicalMode::Auto;
};

/// Complex Hermitian form of the mediated SDP before embedding.
struct ComplexSdp {
  ComplexMat objective;
  std::vector<HermitianConstraint> constraints;
};

/// Objective: the hopping energy as tr(C X) with X = 1 + i Gamma.
/// Constraints: unit diagonal, Re X_uv = 0, pinned mode blocks
/// Im X_{2j,2j+1} = p Gamma_class_{2j,2j+1}, the two pair symmetries on every
/// interaction edge, and optionally sum_j Im X_{2j,2j+1} = n - 2q.
ComplexSdp build_mediated_sdp_complex(const CifhInstance& inst, const CovarianceMatrix& gamma_class, double p_class,
                                      std::optional<double> particle_target = std::nullopt);

SdpProblem build_mediated_sdp(const CifhInstance& inst, const CovarianceMatrix& gamma_class, double p_class,
                              std::optional<double> particle_target = std::nullopt);

/// Covariance Im X of an embedded solution, rescaled into the unit ball if
/// the solver tolerance pushed it slightly outside.
CovarianceMatrix covariance_from_sdp(const Matrix& y);

/// Largest achievable energies of the two parts, with convention constants.
double lambda_max_quad(const CifhInstance& inst, const QuadSolution& q);

/// SDP at each p = j/M plus the classical, quadratic and p = 0 blend
/// anchors; returns the best by total energy (ties to the lowest p).
CertifiedSolution sweep_p_class(const CifhInstance& inst, const CovarianceMatrix& gamma_class,
                                const ClassicalSolution& classical, double a_upper, const QuadSolution& quad,
                                const SolveOptions& opt, const SectorSpectrum* oracle = nullptr);

/// Exact classical optimum for the traceless path: disjoint edges, then
/// bipartite min-cut, then brute force up to the gate.
ClassicalSolution traceless_classical(const CifhInstance& inst, int brute_force_gate);

/// Auto picks the exact classical solver for bipartite or matching graphs
/// and for n up to the brute-force gate, otherwise Goemans-Williamson.
PsdClassicalMode resolve_psd_mode(const CifhInstance& inst, const SolveOptions& opt);

CertifiedSolution solve_traceless(const CifhInstance& inst, const SolveOptions& opt = {});
CertifiedSolution solve_psd(const CifhInstance& inst, const SolveOptions& opt = {});
CertifiedSolution solve_fixed_particles(const CifhInstance& inst, int q, const SolveOptions& opt = {});
CertifiedSolution solve_fmc(const CifhInstance& inst, const SolveOptions& opt = {});

/// Dispatch on convention (and particle target for traceless instances).
CertifiedSolution solve(const CifhInstance& inst, const SolveOptions& opt = {});

/// Fills exact_ratio and the sandwich check from an exact spectrum.
void certify(const CifhInstance& inst, CertifiedSolution& sol, const SectorSpectrum& spectrum,
             std::optional<int> particle_target = std::nullopt);

/// True when the certified bound or the exact ratio contradicts the
/// guarantee (relative slack 1e-4), or the exact ratio is below the bound.
bool guarantee_violated(const CertifiedSolution& sol);

}  // namespace cifh
