#include "cifh/classical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "cifh/sdp.hpp"
#include "maxflow.hpp"

namespace cifh {

std::string_view to_string(ClassicalMethod m) {
  switch (m) {
    case ClassicalMethod::BruteForce: return "brute-force";
    case ClassicalMethod::Bipartite: return "bipartite-min-cut";
    case ClassicalMethod::DisjointEdge: return "disjoint-edge";
    case ClassicalMethod::GoemansWilliamson: return "goemans-williamson";
    case ClassicalMethod::FixedParticleBipartite: return "fixed-particle-bipartite";
  }
  return "unknown";
}

namespace {

double energy_scale(const CifhInstance& inst) {
  double s = 1.0;
  for (const Edge& e : inst.interaction_edges()) s += std::abs(e.weight);
  for (double m : inst.potentials()) s += std::abs(m);
  return s;
}

// Bit j of the mask holds x_j; the key orders masks lexicographically with
// x_0 most significant.
std::uint32_t lex_key(std::uint32_t mask, int n) {
  std::uint32_t key = 0;
  for (int j = 0; j < n; ++j)
    if (mask >> j & 1U) key |= 1U << (n - 1 - j);
  return key;
}

BitAssignment bits_of(std::uint32_t mask, int n) {
  BitAssignment x(n);
  for (int j = 0; j < n; ++j) x[j] = static_cast<int>(mask >> j & 1U);
  return x;
}

ClassicalSolution enumerate(const CifhInstance& inst, std::optional<int> q, double direction) {
  const int n = inst.n();
  if (n > kBruteForceMaxModes)
    throw Error("brute force supports n <= " + std::to_string(kBruteForceMaxModes) + ", got " + std::to_string(n));
  if (q && (*q < 0 || *q > n)) throw Error("fixed particle count outside [0, n]");

  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const Edge& e : inst.interaction_edges()) {
    adj[e.j].emplace_back(e.k, e.weight);
    adj[e.k].emplace_back(e.j, e.weight);
  }
  const auto& mu = inst.potentials();
  const double tol = 1e-9 * energy_scale(inst);

  std::uint32_t mask = 0;
  double energy = classical_value(BitAssignment(n, 0), inst);
  std::uint32_t best_mask = 0;
  double best = -std::numeric_limits<double>::infinity();
  bool have = false;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 0;; ++i) {
    if (!q || std::popcount(mask) == *q) {
      const double v = direction * energy;
      if (!have || v > best + tol) {
        best = v;
        best_mask = mask;
        have = true;
      } else if (v >= best - tol && lex_key(mask, n) < lex_key(best_mask, n)) {
        best = v;
        best_mask = mask;
      }
    }
    if (i + 1 == total) break;
    const int j = std::countr_zero(i + 1);
    double delta = mu[j];
    for (const auto& [k, w] : adj[j])
      if (mask >> k & 1U) delta -= w;
    energy += (mask >> j & 1U) ? -delta : delta;
    mask ^= 1U << j;
  }
  ClassicalSolution sol;
  sol.assignment = bits_of(best_mask, n);
  sol.value = classical_value(sol.assignment, inst);
  sol.method = ClassicalMethod::BruteForce;
  return sol;
}

}  // namespace

ClassicalSolution brute_force_classical(const CifhInstance& inst, std::optional<int> fixed_particles) {
  return enumerate(inst, fixed_particles, 1.0);
}

ClassicalSolution brute_force_classical_min(const CifhInstance& inst) { return enumerate(inst, std::nullopt, -1.0); }

std::optional<Bipartition> detect_bipartition(const CifhInstance& inst) {
  const int n = inst.n();
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : inst.interaction_edges()) {
    adj[e.j].push_back(e.k);
    adj[e.k].push_back(e.j);
  }
  std::vector<int> color(n, -1);
  for (int s = 0; s < n; ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : adj[v]) {
        if (color[w] < 0) {
          color[w] = 1 - color[v];
          q.push(w);
        } else if (color[w] == color[v]) {
          return std::nullopt;
        }
      }
    }
  }
  Bipartition bp;
  for (int j = 0; j < n; ++j) (color[j] == 0 ? bp.side_a : bp.side_b).push_back(j);
  return bp;
}

bool is_valid_bipartition(const CifhInstance& inst, const Bipartition& bp) {
  std::vector<int> side(inst.n(), -1);
  for (int j : bp.side_a) {
    if (j < 0 || j >= inst.n() || side[j] >= 0) return false;
    side[j] = 0;
  }
  for (int j : bp.side_b) {
    if (j < 0 || j >= inst.n() || side[j] >= 0) return false;
    side[j] = 1;
  }
  if (std::count(side.begin(), side.end(), -1) > 0) return false;
  for (const Edge& e : inst.interaction_edges())
    if (side[e.j] == side[e.k]) return false;
  return true;
}

ClassicalSolution bipartite_exact(const CifhInstance& inst, const Bipartition& bp) {
  if (!is_valid_bipartition(inst, bp)) throw Error("bipartite_exact: invalid bipartition");
  const int n = inst.n();
  std::vector<bool> flipped(n, false);
  for (int j : bp.side_a) flipped[j] = true;

  // With x = 1 - y on side_a the objective sum mu x - sum w x x becomes
  // const + sum a_j y_j + sum w y_a y_b, which is supermodular. Its negation
  // is minimized by a cut where y_j = 1 iff j lands on the sink side.
  std::vector<double> a(n);
  for (int j = 0; j < n; ++j) a[j] = flipped[j] ? -inst.potentials()[j] : inst.potentials()[j];
  std::vector<double> unary(n);  // coefficient of y_j in the minimized form
  const int s = n, t = n + 1;
  detail::MaxFlow flow(n + 2);
  for (const Edge& e : inst.interaction_edges()) {
    const int ia = flipped[e.j] ? e.j : e.k;
    const int ib = flipped[e.j] ? e.k : e.j;
    a[ib] -= e.weight;            // -w (1 - y_a) y_b = -w y_b + w y_a y_b
    unary[ia] -= e.weight;        // -w y_a y_b = -w y_a + w y_a (1 - y_b)
    flow.add_edge(ib, ia, e.weight);
  }
  for (int j = 0; j < n; ++j) {
    const double c = unary[j] - a[j];
    if (c > 0) {
      flow.add_edge(s, j, c);
    } else if (c < 0) {
      flow.add_edge(j, t, -c);
    }
  }
  flow.solve(s, t);
  const std::vector<bool> reach = flow.source_side(s);

  ClassicalSolution sol;
  sol.assignment.resize(n);
  for (int j = 0; j < n; ++j) {
    const int y = reach[j] ? 0 : 1;
    sol.assignment[j] = flipped[j] ? 1 - y : y;
  }
  sol.value = classical_value(sol.assignment, inst);
  sol.method = ClassicalMethod::Bipartite;
  return sol;
}

bool is_disjoint_edges(const CifhInstance& inst) {
  for (int d : inst.interaction_degrees())
    if (d > 1) return false;
  return true;
}

ClassicalSolution disjoint_edge_exact(const CifhInstance& inst) {
  if (!is_disjoint_edges(inst)) throw Error("disjoint_edge_exact: interaction graph is not a matching");
  const int n = inst.n();
  const auto& mu = inst.potentials();
  BitAssignment x(n, 0);
  std::vector<bool> covered(n, false);
  for (const Edge& e : inst.interaction_edges()) {
    covered[e.j] = covered[e.k] = true;
    const int hi = mu[e.j] >= mu[e.k] ? e.j : e.k;
    const int lo = hi == e.j ? e.k : e.j;
    if (mu[hi] >= 0) x[hi] = 1;
    if (mu[lo] >= e.weight) x[lo] = 1;
  }
  for (int j = 0; j < n; ++j)
    if (!covered[j] && mu[j] >= 0) x[j] = 1;
  ClassicalSolution sol;
  sol.assignment = std::move(x);
  sol.value = classical_value(sol.assignment, inst);
  sol.method = ClassicalMethod::DisjointEdge;
  return sol;
}

double signed_cut_value(const std::vector<SignedEdge>& edges, const std::vector<int>& z) {
  double v = 0;
  for (const SignedEdge& e : edges) v += e.weight * (1 - e.sign * z[e.j] * z[e.k]);
  return v;
}

SignedMaxCutResult gw_signed_maxcut(int n, const std::vector<SignedEdge>& edges, int trials, std::uint64_t seed) {
  if (n < 1) throw Error("gw_signed_maxcut: empty graph");
  if (trials < 1) throw Error("gw_signed_maxcut: need at least one trial");
  double total = 0;
  for (const SignedEdge& e : edges) {
    if (e.weight < 0) throw Error("gw_signed_maxcut: negative weight");
    if (e.sign != 1 && e.sign != -1) throw Error("gw_signed_maxcut: sign must be +1 or -1");
    if (e.j < 0 || e.j >= n || e.k < 0 || e.k >= n || e.j == e.k) throw Error("gw_signed_maxcut: bad edge");
    total += e.weight;
  }

  SdpProblem p;
  p.dim = n;
  p.objective = Matrix::Zero(n, n);
  for (const SignedEdge& e : edges) {
    p.objective(e.j, e.k) -= e.sign * e.weight / 2;
    p.objective(e.k, e.j) -= e.sign * e.weight / 2;
  }
  for (int j = 0; j < n; ++j) p.constraints.push_back({{{j, j, 1.0}}, 1.0});
  const SdpSolution sdp = solve_sdp(p);

  SignedMaxCutResult out;
  out.sdp_bound = total + sdp.objective_value;
  out.sdp_converged = sdp.status == SdpStatus::Converged;
  out.sdp_residual = sdp.primal_residual;

  const SymEig es = eig_sym(0.5 * (sdp.x_matrix + sdp.x_matrix.transpose()));
  Matrix factor = es.vectors * es.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();  // rows are the vectors

  out.value = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
    std::normal_distribution<double> normal;
    Vector r(n);
    for (int i = 0; i < n; ++i) r(i) = normal(rng);
    const Vector proj = factor * r;
    std::vector<int> z(n);
    for (int i = 0; i < n; ++i) z[i] = proj(i) >= 0 ? 1 : -1;
    const double v = signed_cut_value(edges, z);
    if (v > out.value) {
      out.value = v;
      out.z = std::move(z);
    }
  }
  return out;
}

GwClassicalResult gw_classical_psd(const CifhInstance& inst, int trials, std::uint64_t seed) {
  if (inst.convention() != Convention::Psd) throw Error("gw_classical_psd: instance is not in the psd convention");
  const int n = inst.n();
  const auto& mu = inst.potentials();
  const std::vector<int> deg = inst.interaction_degrees();

  BitAssignment x(n, 0);
  std::vector<int> active;  // variables carried into the cut problem
  std::vector<int> slot(n, -1);
  double isolated = 0;
  for (int j = 0; j < n; ++j) {
    if (deg[j] == 0) {
      x[j] = mu[j] > 0 ? 1 : 0;
      isolated += x[j] * mu[j];
    } else {
      slot[j] = static_cast<int>(active.size());
      active.push_back(j);
    }
  }

  // With x = (1 - z)/2 the energy is c0 + sum h_j z_j + sum J_jk z_j z_k.
  const int m = static_cast<int>(active.size());
  double c0 = isolated;
  std::vector<double> h(m, 0.0);
  std::vector<SignedEdge> edges;
  for (const Edge& e : inst.interaction_edges()) {
    c0 += e.weight * (1 - 0.25);
    h[slot[e.j]] += e.weight / 4;
    h[slot[e.k]] += e.weight / 4;
    const double coupling = -e.weight / 4;
    if (coupling != 0) edges.push_back({slot[e.j], slot[e.k], std::abs(coupling), coupling > 0 ? -1 : 1});
  }
  for (int s = 0; s < m; ++s) {
    c0 += mu[active[s]] / 2;
    h[s] -= mu[active[s]] / 2;
  }
  // h_j z_j -> h_j y z_j with the extra spin y at index m
  for (int s = 0; s < m; ++s) {
    if (h[s] != 0) edges.push_back({s, m, std::abs(h[s]), h[s] > 0 ? -1 : 1});
  }
  double abs_sum = 0;
  for (const SignedEdge& e : edges) abs_sum += e.weight;

  GwClassicalResult out;
  if (m == 0) {
    out.solution.assignment = x;
  } else {
    const SignedMaxCutResult cut = gw_signed_maxcut(m + 1, edges, trials, seed);
    const int y = cut.z[m];
    for (int s = 0; s < m; ++s) x[active[s]] = (1 - y * cut.z[s]) / 2;
    out.relaxation_bound = c0 - abs_sum + cut.sdp_bound;
    out.sdp_residual = cut.sdp_residual;
    out.solution.assignment = x;
  }
  out.solution.value = classical_value(x, inst);
  if (m == 0) out.relaxation_bound = out.solution.value;
  out.solution.method = ClassicalMethod::GoemansWilliamson;
  out.solution.expected_ratio = kGoemansWilliamson;
  return out;
}

ClassicalSolution classical_fixed_q_bipartite(const CifhInstance& inst, const Bipartition& bp, int q) {
  if (!is_valid_bipartition(inst, bp)) throw Error("classical_fixed_q_bipartite: invalid bipartition");
  for (double m : inst.potentials())
    if (m != 0) throw Error("classical_fixed_q_bipartite: requires zero potentials");
  if (q < 0 || q > inst.n() / 2) throw Error("classical_fixed_q_bipartite: q outside [0, n/2]");
  if (bp.side_a.size() < bp.side_b.size()) throw Error("classical_fixed_q_bipartite: side_a must be the larger side");
  std::vector<int> side = bp.side_a;
  std::sort(side.begin(), side.end());
  ClassicalSolution sol;
  sol.assignment.assign(inst.n(), 0);
  for (int i = 0; i < q; ++i) sol.assignment[side[i]] = 1;
  sol.value = classical_value(sol.assignment, inst);
  sol.method = ClassicalMethod::FixedParticleBipartite;
  return sol;
}

}  // namespace cifh
