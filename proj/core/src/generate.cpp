#include <algorithm>
#include <cctype>
#include <charconv>
#include <random>
#include <set>

#include "cifh/model.hpp"

namespace cifh {

CifhInstance fmc_from_graph(int n, std::vector<Edge> edges) {
  if (n < 1) throw ValidationError("n", "mode count must be positive");
  std::vector<Edge> hopping;
  std::vector<double> mu(n, 0.0);
  for (Edge& e : edges) {
    if (e.j > e.k) std::swap(e.j, e.k);
    hopping.push_back({e.j, e.k, e.weight / 2});
    if (e.j >= 0 && e.k < n) {
      mu[e.j] += e.weight / 2;
      mu[e.k] += e.weight / 2;
    }
  }
  return CifhInstance::create(n, std::move(edges), std::move(mu), std::move(hopping), Convention::Fmc);
}

CifhInstance hubbard_chain(int sites, double t, double U, double mu0, bool periodic) {
  if (sites < 1) throw ValidationError("sites", "must be positive");
  const int n = 2 * sites;
  std::vector<Edge> inter, hop;
  if (U != 0) {
    for (int s = 0; s < sites; ++s) inter.push_back({2 * s, 2 * s + 1, U});
  }
  if (t != 0) {
    std::vector<std::pair<int, int>> bonds;
    for (int s = 0; s + 1 < sites; ++s) bonds.emplace_back(s, s + 1);
    if (periodic && sites >= 3) bonds.emplace_back(0, sites - 1);
    for (auto [a, b] : bonds) {
      for (int spin = 0; spin < 2; ++spin) hop.push_back({2 * a + spin, 2 * b + spin, t});
    }
  }
  return CifhInstance::create(n, std::move(inter), std::vector<double>(n, mu0), std::move(hop),
                              Convention::Traceless);
}

CifhInstance hubbard_triangle(double t, double U, double mu0) { return hubbard_chain(3, t, U, mu0, true); }

CifhInstance heisenberg_line4() {
  return CifhInstance::create(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}}, {0.5, 1.0, 1.0, 0.5},
                              {{0, 1, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}}, Convention::Traceless);
}

CifhInstance complete_graph_instance(int n, double w) {
  if (n < 1) throw ValidationError("n", "mode count must be positive");
  std::vector<Edge> inter;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) inter.push_back({j, k, w});
  return CifhInstance::create(n, std::move(inter), std::vector<double>(n, w * n / 2), {}, Convention::Traceless);
}

namespace {

// Portable uniform double in [0, 1): the standard distributions are not
// specified bit-for-bit across library implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

std::vector<Edge> random_graph(std::mt19937_64& rng, int n, double density, bool bipartite, double max_w) {
  std::vector<int> side(n, 0);
  if (bipartite) {
    for (int j = 0; j < n; ++j) side[j] = static_cast<int>(rng() & 1U);
  }
  std::vector<Edge> edges;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double coin = unit(rng);
      const double w = max_w * (1.0 - unit(rng));  // (0, max_w]
      if (bipartite && side[j] == side[k]) continue;
      if (coin < density) edges.push_back({j, k, w});
    }
  }
  return edges;
}

}  // namespace

CifhInstance random_instance(const RandomSpec& spec) {
  if (spec.n < 1) throw ValidationError("n", "mode count must be positive");
  std::mt19937_64 rng(spec.seed);
  const int n = spec.n;
  std::vector<Edge> inter =
      random_graph(rng, n, spec.interaction_density, spec.bipartite, spec.max_interaction);
  if (spec.convention == Convention::Fmc) return fmc_from_graph(n, std::move(inter));

  const bool psd = spec.convention == Convention::Psd;
  std::vector<double> mu(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double r = psd ? uniform(rng, 0, spec.max_potential) : uniform(rng, -spec.max_potential, spec.max_potential);
    if (!spec.zero_potentials) mu[j] = r;
  }
  std::vector<Edge> hop;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double coin = unit(rng);
      const double w = psd ? uniform(rng, 0, spec.max_hopping) : uniform(rng, -spec.max_hopping, spec.max_hopping);
      if (coin < spec.hopping_density) hop.push_back({j, k, w});
    }
  }
  return CifhInstance::create(n, std::move(inter), std::move(mu), std::move(hop), spec.convention);
}

namespace {

int parse_suffix(std::string_view name, std::string_view prefix) {
  if (name.substr(0, prefix.size()) != prefix) return -1;
  std::string_view rest = name.substr(prefix.size());
  int value = -1;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (ec != std::errc() || ptr != rest.data() + rest.size() || rest.empty()) return -1;
  return value;
}

}  // namespace

std::vector<Edge> named_graph(std::string_view name, int* n_out) {
  std::vector<Edge> edges;
  int n = -1;
  if ((n = parse_suffix(name, "line")) >= 1) {
    for (int j = 0; j + 1 < n; ++j) edges.push_back({j, j + 1, 1.0});
  } else if ((n = parse_suffix(name, "cycle")) >= 3) {
    for (int j = 0; j + 1 < n; ++j) edges.push_back({j, j + 1, 1.0});
    edges.push_back({0, n - 1, 1.0});
  } else if ((n = parse_suffix(name, "complete")) >= 1) {
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) edges.push_back({j, k, 1.0});
  } else if ((n = parse_suffix(name, "star")) >= 1) {
    for (int k = 1; k < n; ++k) edges.push_back({0, k, 1.0});
  } else {
    throw ValidationError("graph", "unknown graph '" + std::string(name) + "'");
  }
  if (n_out) *n_out = n;
  return edges;
}

namespace {

std::string normalize_kind(std::string_view kind) {
  std::string out;
  for (char ch : kind) {
    if (ch == '-' || ch == '_') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

  double real(const std::string& key, double fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    try {
      std::size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw ValidationError(key, "expected a number, got '" + it->second + "'");
    }
  }

  long long integer(const std::string& key, long long fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    try {
      std::size_t pos = 0;
      long long v = std::stoll(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::exception&) {
      throw ValidationError(key, "expected an integer, got '" + it->second + "'");
    }
  }

  bool flag(const std::string& key, bool fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    if (it->second == "1" || it->second == "true" || it->second == "yes") return true;
    if (it->second == "0" || it->second == "false" || it->second == "no") return false;
    throw ValidationError(key, "expected a boolean, got '" + it->second + "'");
  }

  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : it->second;
  }

  void finish() const {
    for (const auto& [k, v] : raw_) {
      if (!used_.count(k)) throw ValidationError(k, "unknown parameter");
    }
  }

 private:
  const std::map<std::string, std::string>& raw_;
  std::set<std::string> used_;
};

}  // namespace

CifhInstance generate(std::string_view kind, const std::map<std::string, std::string>& params) {
  const std::string k = normalize_kind(kind);
  Params p(params);
  auto done = [&](CifhInstance inst) {
    p.finish();
    return inst;
  };
  if (k == "hubbardtriangle") {
    const double t = p.real("t", 1.0), U = p.real("U", 2.0), mu = p.real("mu", 0.0);
    return done(hubbard_triangle(t, U, mu));
  }
  if (k == "hubbardchain") {
    const auto sites = p.integer("sites", 4);
    const double t = p.real("t", 1.0), U = p.real("U", 2.0), mu = p.real("mu", 0.0);
    const bool periodic = p.flag("periodic", false);
    return done(hubbard_chain(static_cast<int>(sites), t, U, mu, periodic));
  }
  if (k == "heisenbergline4") return done(heisenberg_line4());
  if (k == "completegraph") {
    const auto n = p.integer("n", 4);
    const double w = p.real("w", 1.0);
    return done(complete_graph_instance(static_cast<int>(n), w));
  }
  if (k == "fmcgraph") {
    int n = 0;
    std::vector<Edge> edges = named_graph(p.text("graph", "line4"), &n);
    const double w = p.real("w", 1.0);
    for (Edge& e : edges) e.weight = w;
    return done(fmc_from_graph(n, std::move(edges)));
  }
  if (k == "random") {
    RandomSpec spec;
    spec.n = static_cast<int>(p.integer("n", 6));
    spec.convention = convention_from_string(p.text("convention", "traceless"));
    spec.interaction_density = p.real("density", 0.5);
    spec.hopping_density = p.real("hopping-density", 0.5);
    spec.bipartite = p.flag("bipartite", false);
    spec.max_interaction = p.real("max-w", 1.0);
    spec.max_potential = p.real("max-mu", 1.0);
    spec.max_hopping = p.real("max-hopping", 1.0);
    spec.zero_potentials = p.flag("zero-mu", false);
    const auto seed = p.integer("seed", -1);
    if (seed < 0) throw ValidationError("seed", "random generation requires a nonnegative seed");
    spec.seed = static_cast<std::uint64_t>(seed);
    return done(random_instance(spec));
  }
  throw ValidationError("kind", "unknown instance family '" + std::string(kind) + "'");
}

}  // namespace cifh
