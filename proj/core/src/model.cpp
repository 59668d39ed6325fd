#include "cifh/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

#include <json.hpp>

namespace cifh {

using nlohmann::json;

std::string_view to_string(Convention c) {
  switch (c) {
    case Convention::Traceless: return "traceless";
    case Convention::Psd: return "psd";
    case Convention::Fmc: return "fmc";
  }
  return "traceless";
}

Convention convention_from_string(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "traceless") return Convention::Traceless;
  if (lower == "psd") return Convention::Psd;
  if (lower == "fmc") return Convention::Fmc;
  throw ValidationError("convention", "unknown convention '" + std::string(s) + "'");
}

namespace {

std::string at(const std::string& field, std::size_t i) { return field + "[" + std::to_string(i) + "]"; }

void canonicalize_edges(std::vector<Edge>& edges, int n, const std::string& field, bool nonnegative) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    Edge& e = edges[i];
    if (e.j < 0 || e.j >= n) throw ValidationError(at(field, i) + "[0]", "mode index out of range");
    if (e.k < 0 || e.k >= n) throw ValidationError(at(field, i) + "[1]", "mode index out of range");
    if (e.j == e.k) throw ValidationError(at(field, i), "self-loop");
    if (!std::isfinite(e.weight)) throw ValidationError(at(field, i) + "[2]", "weight is not finite");
    if (nonnegative && e.weight < 0) throw ValidationError(at(field, i) + "[2]", "negative interaction weight");
    if (e.j > e.k) std::swap(e.j, e.k);
  }
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::pair(edges[a].j, edges[a].k) < std::pair(edges[b].j, edges[b].k);
  });
  std::vector<Edge> sorted;
  sorted.reserve(edges.size());
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    const Edge& e = edges[order[idx]];
    if (!sorted.empty() && sorted.back().j == e.j && sorted.back().k == e.k)
      throw ValidationError(at(field, order[idx]), "duplicate edge");
    sorted.push_back(e);
  }
  edges = std::move(sorted);
}

std::vector<double> fmc_potentials(int n, const std::vector<Edge>& edges) {
  std::vector<double> mu(n, 0.0);
  for (const Edge& e : edges) {
    mu[e.j] += e.weight / 2;
    mu[e.k] += e.weight / 2;
  }
  return mu;
}

}  // namespace

CifhInstance CifhInstance::create(int n, std::vector<Edge> interaction_edges, std::vector<double> potentials,
                                  std::vector<Edge> hopping_edges, Convention convention,
                                  std::optional<double> particle_target) {
  if (n < 1) throw ValidationError("n", "mode count must be positive");
  canonicalize_edges(interaction_edges, n, "interaction_edges", true);
  canonicalize_edges(hopping_edges, n, "hopping_edges", false);
  if (static_cast<int>(potentials.size()) != n)
    throw ValidationError("potentials", "expected " + std::to_string(n) + " entries");
  for (std::size_t i = 0; i < potentials.size(); ++i) {
    if (!std::isfinite(potentials[i])) throw ValidationError(at("potentials", i), "potential is not finite");
  }

  if (convention == Convention::Psd) {
    for (std::size_t i = 0; i < potentials.size(); ++i) {
      if (potentials[i] < 0) throw ValidationError(at("potentials", i), "negative potential under psd convention");
    }
  }
  if (convention == Convention::Fmc) {
    if (hopping_edges.size() != interaction_edges.size())
      throw ValidationError("hopping_edges", "fmc requires hopping edges equal to interaction edges");
    for (std::size_t i = 0; i < hopping_edges.size(); ++i) {
      const Edge& h = hopping_edges[i];
      const Edge& e = interaction_edges[i];
      if (h.j != e.j || h.k != e.k)
        throw ValidationError(at("hopping_edges", i), "fmc requires hopping edges equal to interaction edges");
      if (h.weight != e.weight / 2) throw ValidationError(at("hopping_edges", i) + "[2]", "fmc requires w' = w/2");
    }
    const std::vector<double> mu = fmc_potentials(n, interaction_edges);
    for (int j = 0; j < n; ++j) {
      if (std::abs(mu[j] - potentials[j]) > 1e-12 * (1 + std::abs(mu[j])))
        throw ValidationError(at("potentials", j), "fmc requires mu_j = sum of incident w / 2");
    }
    potentials = mu;
  }

  if (particle_target) {
    const double q = *particle_target;
    if (!std::isfinite(q) || q < 0 || q > n / 2)
      throw ValidationError("particle_target", "must satisfy 0 <= q <= floor(n/2)");
  }

  CifhInstance inst;
  inst.n_ = n;
  inst.interaction_ = std::move(interaction_edges);
  inst.potentials_ = std::move(potentials);
  inst.hopping_ = std::move(hopping_edges);
  inst.convention_ = convention;
  inst.particle_target_ = particle_target;
  return inst;
}

double CifhInstance::total_interaction_weight() const {
  double s = 0;
  for (const Edge& e : interaction_) s += e.weight;
  return s;
}

std::vector<int> CifhInstance::interaction_degrees() const {
  std::vector<int> deg(n_, 0);
  for (const Edge& e : interaction_) {
    ++deg[e.j];
    ++deg[e.k];
  }
  return deg;
}

HamiltonianSplit HamiltonianSplit::of(const CifhInstance& inst) {
  return HamiltonianSplit{{&inst.interaction_edges(), &inst.potentials()},
                          {&inst.hopping_edges()},
                          inst.convention(),
                          inst.n()};
}

CifhInstance HamiltonianSplit::reassemble() const {
  return CifhInstance::create(n, *classical_part.edges, *classical_part.potentials, *quadratic_part.edges,
                              convention);
}

// ---- serialization ---------------------------------------------------------

namespace {

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ValidationError(key, "missing field");
  return *it;
}

int parse_index(const json& v, const std::string& path, int n) {
  if (!v.is_number_integer()) {
    if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) {
      // integral-valued float such as 2.0
    } else {
      throw ValidationError(path, "mode index must be an integer");
    }
  }
  const double raw = v.get<double>();
  if (raw < 1 || raw > n) throw ValidationError(path, "mode index out of range");
  return static_cast<int>(raw) - 1;
}

double parse_real(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError(path, "expected a number");
  return v.get<double>();
}

std::vector<Edge> parse_edges(const json& arr, const std::string& field, int n) {
  if (!arr.is_array()) throw ValidationError(field, "expected an array of [j, k, w]");
  std::vector<Edge> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    const std::string p = at(field, i);
    if (!e.is_array() || e.size() != 3) throw ValidationError(p, "expected [j, k, w]");
    out.push_back({parse_index(e[0], p + "[0]", n), parse_index(e[1], p + "[1]", n), parse_real(e[2], p + "[2]")});
  }
  return out;
}

json edges_json(const std::vector<Edge>& edges) {
  json arr = json::array();
  for (const Edge& e : edges) arr.push_back(json::array({e.j + 1, e.k + 1, e.weight}));
  return arr;
}

}  // namespace

CifhInstance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError("$", std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("$", "expected an object");

  static const std::set<std::string> known = {"version",     "n",             "convention",     "interaction_edges",
                                              "potentials", "hopping_edges", "particle_target"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known.count(it.key())) throw ValidationError(it.key(), "unknown field");
  }

  if (doc.contains("version")) {
    const json& v = doc["version"];
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
      throw ValidationError("version", "unsupported schema version");
  }
  const json& jn = require(doc, "n");
  if (!jn.is_number_integer()) throw ValidationError("n", "expected an integer");
  const int n = jn.get<int>();
  if (n < 1) throw ValidationError("n", "mode count must be positive");

  const json& jc = require(doc, "convention");
  if (!jc.is_string()) throw ValidationError("convention", "expected a string");
  const Convention conv = convention_from_string(jc.get<std::string>());

  std::vector<Edge> interaction = parse_edges(require(doc, "interaction_edges"), "interaction_edges", n);

  std::vector<double> mu;
  std::vector<Edge> hopping;
  if (conv == Convention::Fmc && !doc.contains("potentials")) {
    mu = fmc_potentials(n, interaction);
  } else {
    const json& jp = require(doc, "potentials");
    if (!jp.is_array()) throw ValidationError("potentials", "expected an array");
    for (std::size_t i = 0; i < jp.size(); ++i) mu.push_back(parse_real(jp[i], at("potentials", i)));
  }
  if (conv == Convention::Fmc && !doc.contains("hopping_edges")) {
    for (const Edge& e : interaction) hopping.push_back({e.j, e.k, e.weight / 2});
  } else {
    hopping = parse_edges(require(doc, "hopping_edges"), "hopping_edges", n);
  }

  std::optional<double> q;
  if (doc.contains("particle_target") && !doc["particle_target"].is_null())
    q = parse_real(doc["particle_target"], "particle_target");

  return CifhInstance::create(n, std::move(interaction), std::move(mu), std::move(hopping), conv, q);
}

std::string serialize_instance(const CifhInstance& inst) {
  json doc;  // std::map-backed: keys come out sorted
  doc["version"] = kSchemaVersion;
  doc["n"] = inst.n();
  doc["convention"] = std::string(to_string(inst.convention()));
  doc["interaction_edges"] = edges_json(inst.interaction_edges());
  doc["potentials"] = inst.potentials();
  doc["hopping_edges"] = edges_json(inst.hopping_edges());
  if (inst.particle_target()) doc["particle_target"] = *inst.particle_target();
  return doc.dump(2) + "\n";
}

std::string instance_digest(const CifhInstance& inst) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize_instance(inst)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CifhInstance scale_classical(const CifhInstance& inst, double factor) {
  if (inst.convention() == Convention::Fmc) throw Error("cannot rescale the classical part of an fmc instance");
  if (!(factor >= 0)) throw Error("scale factor must be nonnegative");
  std::vector<Edge> edges = inst.interaction_edges();
  for (Edge& e : edges) e.weight *= factor;
  std::vector<double> mu = inst.potentials();
  for (double& m : mu) m *= factor;
  return CifhInstance::create(inst.n(), std::move(edges), std::move(mu), inst.hopping_edges(), inst.convention(),
                              inst.particle_target());
}

}  // namespace cifh
