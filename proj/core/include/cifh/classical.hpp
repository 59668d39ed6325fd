#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cifh/gaussian.hpp"

namespace cifh {

inline constexpr int kBruteForceMaxModes = 24;
inline constexpr double kGoemansWilliamson = 0.878;

enum class ClassicalMethod { BruteForce, Bipartite, DisjointEdge, GoemansWilliamson, FixedParticleBipartite };

std::string_view to_string(ClassicalMethod m);

struct ClassicalSolution {
  BitAssignment assignment;
  double value = 0.0;
  ClassicalMethod method = ClassicalMethod::BruteForce;
  /// Empty when the value is the exact optimum, else the guaranteed ratio.
  std::optional<double> expected_ratio;

  bool exact() const noexcept { return !expected_ratio.has_value(); }
};

struct Bipartition {
  std::vector<int> side_a;
  std::vector<int> side_b;
};

/// Exact optimum by enumeration, optionally restricted to |x| = q. Ties go
/// to the lexicographically smallest x (x_0 most significant).
ClassicalSolution brute_force_classical(const CifhInstance& inst, std::optional<int> fixed_particles = std::nullopt);

/// Exact minimum of the diagonal energy, same enumeration.
ClassicalSolution brute_force_classical_min(const CifhInstance& inst);

/// BFS 2-coloring of the interaction graph; isolated vertices go to side_a.
std::optional<Bipartition> detect_bipartition(const CifhInstance& inst);

bool is_valid_bipartition(const CifhInstance& inst, const Bipartition& bp);

/// Exact optimum on a bipartite interaction graph by a minimum s-t cut.
ClassicalSolution bipartite_exact(const CifhInstance& inst, const Bipartition& bp);

/// True when the interaction graph is a matching plus isolated vertices.
bool is_disjoint_edges(const CifhInstance& inst);

/// Exact optimum when every mode meets at most one interaction edge.
ClassicalSolution disjoint_edge_exact(const CifhInstance& inst);

struct SignedEdge {
  int j = 0;
  int k = 0;
  double weight = 0.0;  ///< >= 0
  int sign = +1;        ///< +1 rewards z_j != z_k, -1 rewards z_j == z_k
};

struct SignedMaxCutResult {
  std::vector<int> z;         ///< entries +-1
  double value = 0.0;         ///< sum w (1 - sign z_j z_k)
  double sdp_bound = 0.0;     ///< relaxation optimum
  bool sdp_converged = false;
  double sdp_residual = 0.0;
};

double signed_cut_value(const std::vector<SignedEdge>& edges, const std::vector<int>& z);

/// Goemans-Williamson: SDP relaxation then best of `trials` hyperplane
/// roundings; trial t uses seed + t.
SignedMaxCutResult gw_signed_maxcut(int n, const std::vector<SignedEdge>& edges, int trials, std::uint64_t seed);

struct GwClassicalResult {
  ClassicalSolution solution;
  double relaxation_bound = 0.0;  ///< upper bound on lambda_max(H_class)
  double sdp_residual = 0.0;
};

/// Randomized approximation of the diagonal optimum for the psd convention.
GwClassicalResult gw_classical_psd(const CifhInstance& inst, int trials, std::uint64_t seed);

/// Occupies the q lowest-index modes of side_a; needs mu = 0 and
/// |side_a| >= q.
ClassicalSolution classical_fixed_q_bipartite(const CifhInstance& inst, const Bipartition& bp, int q);

}  // namespace cifh
