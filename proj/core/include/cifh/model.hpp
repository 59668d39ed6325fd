#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cifh {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instance document or instance data violates the schema. Carries the
/// offending field path (e.g. `interaction_edges[2][2]`).
class ValidationError : public Error {
 public:
  ValidationError(std::string field_path, const std::string& message)
      : Error(field_path + ": " + message), path_(std::move(field_path)) {}
  const std::string& field_path() const noexcept { return path_; }

 private:
  std::string path_;
};

enum class Convention { Traceless, Psd, Fmc };

std::string_view to_string(Convention c);
Convention convention_from_string(std::string_view s);

/// Undirected weighted edge between modes `j < k` (0-based).
struct Edge {
  int j = 0;
  int k = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A classically interacting fermionic Hamiltonian
///
///   H = sum_E w_jk (c - n_j n_k) + sum_V mu_j (n_j - c') + sum_E' w'_jk (c'' - a_j^+ a_k - a_k^+ a_j)
///
/// where the constants depend on the convention. Instances are validated and
/// canonicalized (edges sorted, j < k) on construction and immutable after.
class CifhInstance {
 public:
  /// Validates and canonicalizes. Throws ValidationError.
  static CifhInstance create(int n, std::vector<Edge> interaction_edges, std::vector<double> potentials,
                             std::vector<Edge> hopping_edges, Convention convention,
                             std::optional<double> particle_target = std::nullopt);

  int n() const noexcept { return n_; }
  const std::vector<Edge>& interaction_edges() const noexcept { return interaction_; }
  const std::vector<double>& potentials() const noexcept { return potentials_; }
  const std::vector<Edge>& hopping_edges() const noexcept { return hopping_; }
  Convention convention() const noexcept { return convention_; }
  const std::optional<double>& particle_target() const noexcept { return particle_target_; }

  double total_interaction_weight() const;
  std::vector<int> interaction_degrees() const;

  friend bool operator==(const CifhInstance&, const CifhInstance&) = default;

 private:
  CifhInstance() = default;

  int n_ = 0;
  std::vector<Edge> interaction_;
  std::vector<double> potentials_;
  std::vector<Edge> hopping_;
  Convention convention_ = Convention::Traceless;
  std::optional<double> particle_target_;
};

/// Views of the diagonal and hopping parts of an instance.
struct HamiltonianSplit {
  struct ClassicalPart {
    const std::vector<Edge>* edges;
    const std::vector<double>* potentials;
  };
  struct QuadraticPart {
    const std::vector<Edge>* edges;
  };
  ClassicalPart classical_part;
  QuadraticPart quadratic_part;
  Convention convention;
  int n;

  static HamiltonianSplit of(const CifhInstance& inst);
  CifhInstance reassemble() const;
};

// ---- serialization ---------------------------------------------------------

inline constexpr int kSchemaVersion = 1;

/// Parses an instance document (JSON). Mode indices are 1-based in documents.
CifhInstance parse_instance(std::string_view text);

/// Canonical document: sorted keys, sorted edges, shortest round-trip floats.
std::string serialize_instance(const CifhInstance& inst);

/// Short stable digest of the canonical serialization (FNV-1a, hex).
std::string instance_digest(const CifhInstance& inst);

// ---- generators ------------------------------------------------------------

/// Builds the Fermionic Max Cut instance of a weighted graph:
/// E' = E, w' = w/2, mu_j = sum_{k in E_j} w_jk / 2.
CifhInstance fmc_from_graph(int n, std::vector<Edge> edges);

/// Hubbard model on a ring/chain of `sites` sites; modes ordered
/// (site 1 up, site 1 down, site 2 up, ...). Traceless convention.
CifhInstance hubbard_chain(int sites, double t, double U, double mu0, bool periodic);
CifhInstance hubbard_triangle(double t, double U, double mu0);

/// The 4-mode line that maps onto -1/4 sum (XX + YY + ZZ) under Jordan-Wigner.
CifhInstance heisenberg_line4();

/// Complete interaction graph, uniform weight w, mu = w n / 2, no hopping.
CifhInstance complete_graph_instance(int n, double w);

struct RandomSpec {
  int n = 4;
  Convention convention = Convention::Traceless;
  double interaction_density = 0.5;
  double hopping_density = 0.5;
  bool bipartite = false;
  double max_interaction = 1.0;
  double max_potential = 1.0;   ///< mu in [-max, max] (Traceless) or [0, max] (Psd)
  double max_hopping = 1.0;     ///< w' in [-max, max] (Traceless) or [0, max] (Psd)
  bool zero_potentials = false;
  std::uint64_t seed = 0;
};

/// Seeded, reproducible random instance. Fmc convention builds fmc_from_graph
/// on a random graph.
CifhInstance random_instance(const RandomSpec& spec);

/// Named graphs used by the CLI: line<N>, cycle<N>, complete<N>, star<N>.
std::vector<Edge> named_graph(std::string_view name, int* n_out);

/// Dispatcher over the instance families. Kinds: hubbard-triangle,
/// hubbard-chain, heisenberg-line4, complete-graph, fmc-graph, random.
CifhInstance generate(std::string_view kind, const std::map<std::string, std::string>& params);

/// Copy with every interaction weight and potential multiplied by `factor`.
CifhInstance scale_classical(const CifhInstance& inst, double factor);

}  // namespace cifh
