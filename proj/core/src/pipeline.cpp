#include "cifh/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cifh {

double f_beta_traceless(double beta, double p) {
  if (std::isinf(beta)) return p * p;
  return (p * p * beta + (1 - p) / 2) / (beta + 1);
}

double f_beta_psd(double beta, double p, double r) {
  if (std::isinf(beta)) return (1 + p * p) / 2 * r;
  return ((1 + p * p) / 2 * r * beta + 0.5 + (1 - p) / 4) / (beta + 1);
}

double fixed_particle_guarantee(int n, int q) {
  return 1.0 / (2.0 * (static_cast<double>(n - 2 * q) / n + 1.5));
}

namespace {

void add_real_part(std::vector<HermitianConstraint>& out, int u, int v, double rhs) {
  if (u == v) {
    out.push_back({{{u, u, 1.0}}, rhs});
  } else {
    out.push_back({{{v, u, 0.5}, {u, v, 0.5}}, rhs});
  }
}

// Entries of the Hermitian matrix A with tr(A X) = Im X_uv.
void append_imag_part(HermitianConstraint& c, int u, int v, double coef) {
  const std::complex<double> i(0, 1);
  c.entries.push_back({v, u, -i * (coef / 2)});
  c.entries.push_back({u, v, i * (coef / 2)});
}

double ratio_or_one(double energy, double denominator) {
  if (denominator <= 1e-14) return 1.0;
  return energy / denominator;
}

}  // namespace

ComplexSdp build_mediated_sdp_complex(const CifhInstance& inst, const CovarianceMatrix& gamma_class, double p_class,
                                      std::optional<double> particle_target) {
  const int n = inst.n();
  const int d = 2 * n;
  if (gamma_class.gamma().rows() != d) throw Error("classical covariance has the wrong dimension");
  if (!(p_class >= 0 && p_class <= 1)) throw Error("p_class must lie in [0, 1]");
  const Matrix& gc = gamma_class.gamma();
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (a / 2 != b / 2 && std::abs(gc(a, b)) > 1e-12) throw Error("classical covariance must be block diagonal");
    }
  }

  ComplexSdp out;
  // hopping energy = sum_{u<v} K_uv Gamma_uv = tr(C X) with C = (i/2) K
  Matrix k = Matrix::Zero(d, d);
  for (const Edge& e : inst.hopping_edges()) {
    const int a = 2 * e.j, b = 2 * e.k + 1, c = 2 * e.j + 1, dd = 2 * e.k;
    k(a, b) += e.weight / 2;
    k(b, a) -= e.weight / 2;
    k(c, dd) -= e.weight / 2;
    k(dd, c) += e.weight / 2;
  }
  out.objective = std::complex<double>(0, 0.5) * k.cast<std::complex<double>>();

  auto& cons = out.constraints;
  for (int u = 0; u < d; ++u) add_real_part(cons, u, u, 1.0);
  for (int u = 0; u < d; ++u)
    for (int v = u + 1; v < d; ++v) add_real_part(cons, u, v, 0.0);
  for (int j = 0; j < n; ++j) {
    HermitianConstraint c;
    append_imag_part(c, 2 * j, 2 * j + 1, 1.0);
    c.rhs = p_class * gc(2 * j, 2 * j + 1);
    cons.push_back(std::move(c));
  }
  for (const Edge& e : inst.interaction_edges()) {
    HermitianConstraint odd;  // Gamma_{2j,2k+1} + Gamma_{2j+1,2k} = 0
    append_imag_part(odd, 2 * e.j, 2 * e.k + 1, 1.0);
    append_imag_part(odd, 2 * e.j + 1, 2 * e.k, 1.0);
    cons.push_back(std::move(odd));
    HermitianConstraint even;  // Gamma_{2j,2k} - Gamma_{2j+1,2k+1} = 0
    append_imag_part(even, 2 * e.j, 2 * e.k, 1.0);
    append_imag_part(even, 2 * e.j + 1, 2 * e.k + 1, -1.0);
    cons.push_back(std::move(even));
  }
  if (particle_target) {
    HermitianConstraint c;
    for (int j = 0; j < n; ++j) append_imag_part(c, 2 * j, 2 * j + 1, 1.0);
    c.rhs = n - 2 * *particle_target;
    cons.push_back(std::move(c));
  }
  return out;
}

SdpProblem build_mediated_sdp(const CifhInstance& inst, const CovarianceMatrix& gamma_class, double p_class,
                              std::optional<double> particle_target) {
  const ComplexSdp c = build_mediated_sdp_complex(inst, gamma_class, p_class, particle_target);
  return hermitian_embed(c.objective, c.constraints);
}

CovarianceMatrix covariance_from_sdp(const Matrix& y) {
  const ComplexMat x = extract_hermitian(y);
  Matrix g = x.imag();
  g = 0.5 * (g - g.transpose());
  const double norm = spectral_norm(g);
  if (norm > 1) g /= norm;
  return CovarianceMatrix::trusted(g);
}

double lambda_max_quad(const CifhInstance& inst, const QuadSolution& q) {
  double shift = 0;
  if (inst.convention() == Convention::Psd) {
    for (const Edge& e : inst.hopping_edges()) shift += e.weight;
  }
  return shift + q.value;
}

namespace {

struct Candidate {
  CovarianceMatrix gamma;
  double p = 0;
  double e_class = 0;
  double e_quad = 0;
  std::string name;
  double total() const { return e_class + e_quad; }
};

Candidate make_candidate(const CifhInstance& inst, CovarianceMatrix g, double p, std::string name) {
  Candidate c{std::move(g), p, 0, 0, std::move(name)};
  c.e_class = energy_class(c.gamma, inst);
  c.e_quad = energy_quad(c.gamma, inst);
  return c;
}

void adopt(CertifiedSolution& sol, const Candidate& c, double denominator) {
  sol.gamma = c.gamma;
  sol.p_class = c.p;
  sol.energy_class = c.e_class;
  sol.energy_quad = c.e_quad;
  sol.energy_total = c.total();
  sol.candidate = c.name;
  sol.ratio_bound = ratio_or_one(sol.energy_total, denominator);
}

void apply_purify(const CifhInstance& inst, CertifiedSolution& sol) {
  const CovarianceMatrix pure = purify(sol.gamma, inst);
  Candidate c = make_candidate(inst, pure, sol.p_class, sol.candidate);
  if (c.total() >= sol.energy_total - 1e-8) {
    adopt(sol, c, sol.derivation.a_upper + sol.derivation.b_upper);
    sol.purified = true;
  }
}

double scale_of(const CifhInstance& inst) {
  double s = 1;
  for (const Edge& e : inst.interaction_edges()) s += std::abs(e.weight);
  for (const Edge& e : inst.hopping_edges()) s += std::abs(e.weight);
  for (double m : inst.potentials()) s += std::abs(m);
  return s;
}

std::optional<SectorSpectrum> maybe_oracle(const CifhInstance& inst, const SolveOptions& opt) {
  if (!opt.oracle || inst.n() > std::min(opt.oracle_gate, kOracleMaxModes)) return std::nullopt;
  return exact_spectrum(inst);
}


// An iteration-capped point is still a valid state when it is feasible; its
// energy is re-evaluated from Gamma, so only feasibility matters.
bool usable(const SdpSolution& s, double tol) {
  return s.status == SdpStatus::Converged || (s.status == SdpStatus::IterLimit && s.primal_residual <= tol);
}

struct MediatedSolve {
  CovarianceMatrix gamma;
  SdpSolution sdp;
  bool reduced_to_point = false;
};

// Modes pinned to |Gamma_{2j,2j+1}| = 1 carry a rank-one block of X, which
// together with Re X = 0 forces every other entry in their rows to vanish.
// They are removed before solving; the remaining SDP is the original one
// restricted to the free modes.
MediatedSolve solve_mediated(const CifhInstance& inst, const CovarianceMatrix& gamma_class, double p,
                             std::optional<double> particle_target, const SdpOptions& sopt) {
  const int n = inst.n();
  std::vector<int> index(n, -1);
  std::vector<int> free_modes;
  Matrix full = Matrix::Zero(2 * n, 2 * n);
  double fixed_sum = 0;
  for (int j = 0; j < n; ++j) {
    const double g = p * gamma_class(2 * j, 2 * j + 1);
    if (std::abs(g) >= 1.0) {
      full(2 * j, 2 * j + 1) = g > 0 ? 1.0 : -1.0;
      full(2 * j + 1, 2 * j) = -full(2 * j, 2 * j + 1);
      fixed_sum += full(2 * j, 2 * j + 1);
    } else {
      index[j] = static_cast<int>(free_modes.size());
      free_modes.push_back(j);
    }
  }

  MediatedSolve out;
  const int m = static_cast<int>(free_modes.size());
  if (m == 0) {
    if (particle_target && std::abs(fixed_sum - (n - 2 * *particle_target)) > 1e-9)
      throw Error("particle constraint is incompatible with the pinned classical state");
    out.gamma = CovarianceMatrix::trusted(full);
    out.sdp.status = SdpStatus::Converged;
    out.sdp.primal_residual = 0;
    out.sdp.iterations = 0;
    out.reduced_to_point = true;
    return out;
  }

  std::vector<Edge> inter, hop;
  for (const Edge& e : inst.interaction_edges())
    if (index[e.j] >= 0 && index[e.k] >= 0) inter.push_back({index[e.j], index[e.k], e.weight});
  for (const Edge& e : inst.hopping_edges())
    if (index[e.j] >= 0 && index[e.k] >= 0) hop.push_back({index[e.j], index[e.k], e.weight});
  const CifhInstance sub =
      m == n ? inst
             : CifhInstance::create(m, std::move(inter), std::vector<double>(m, 0.0), std::move(hop),
                                    Convention::Traceless);
  Matrix sub_class = Matrix::Zero(2 * m, 2 * m);
  for (int a = 0; a < m; ++a) {
    const int j = free_modes[a];
    sub_class(2 * a, 2 * a + 1) = gamma_class(2 * j, 2 * j + 1);
    sub_class(2 * a + 1, 2 * a) = -sub_class(2 * a, 2 * a + 1);
  }
  std::optional<double> sub_target;
  if (particle_target) sub_target = (m - (n - 2 * *particle_target - fixed_sum)) / 2;

  const SdpProblem prob = build_mediated_sdp(sub, CovarianceMatrix::trusted(sub_class), p, sub_target);
  out.sdp = solve_sdp(prob, sopt);
  const Matrix g = covariance_from_sdp(out.sdp.x_matrix).gamma();
  for (int a = 0; a < 2 * m; ++a)
    for (int b = 0; b < 2 * m; ++b) full(2 * free_modes[a / 2] + a % 2, 2 * free_modes[b / 2] + b % 2) = g(a, b);
  out.gamma = CovarianceMatrix::trusted(full);
  return out;
}

}  // namespace

CertifiedSolution sweep_p_class(const CifhInstance& inst, const CovarianceMatrix& gamma_class,
                                const ClassicalSolution& classical, double a_upper, const QuadSolution& quad,
                                const SolveOptions& opt, const SectorSpectrum* oracle) {
  if (opt.grid < 1) throw Error("sweep grid size must be at least 1");
  const double b_upper = lambda_max_quad(inst, quad);
  const double denominator = a_upper + b_upper;

  CertifiedSolution sol;
  sol.derivation.a_upper = a_upper;
  sol.derivation.b_upper = b_upper;
  sol.derivation.classical_value = classical.value;
  sol.derivation.classical_method = std::string(to_string(classical.method));
  sol.derivation.class_exact = classical.exact();

  std::vector<Candidate> candidates;
  candidates.push_back(
      make_candidate(inst, blend({{0.5, mediator(quad.gamma)}, {0.5, quad.gamma}}), 0.0, "mediator-blend"));
  candidates.push_back(make_candidate(inst, quad.gamma, 0.0, "quadratic-optimum"));

  SdpOptions sopt;
  sopt.tol = opt.sdp_tol;
  sopt.max_iter = opt.sdp_max_iter;
  bool any_ok = false;
  for (int j = 0; j <= opt.grid; ++j) {
    const double p = static_cast<double>(j) / opt.grid;
    const MediatedSolve ms = solve_mediated(inst, gamma_class, p, std::nullopt, sopt);
    const SdpSolution& s = ms.sdp;
    CurvePoint pt;
    pt.p_class = p;
    pt.status = s.status;
    pt.primal_residual = s.primal_residual;
    pt.iterations = s.iterations;
    const bool ok = usable(s, sopt.tol);
    Candidate c = make_candidate(inst, ms.gamma, p, "sdp");
    pt.energy_class = c.e_class;
    pt.energy_quad = c.e_quad;
    pt.energy_total = c.total();
    if (oracle) {
      pt.ratio = ratio_or_one(pt.energy_total, oracle->global_max);
    } else {
      pt.ratio = ratio_or_one(pt.energy_total, denominator);
    }
    sol.curve.push_back(pt);
    if (ok) {
      any_ok = true;
      sol.max_sdp_residual = std::max(sol.max_sdp_residual, s.primal_residual);
      candidates.push_back(std::move(c));
      if (!ms.reduced_to_point) {
        sopt.warm_z = s.x_matrix;
        sopt.warm_u = s.dual_u;
        sopt.rho = s.rho;
      }
    }
  }
  if (!any_ok) throw Error("every SDP in the p_class sweep failed");
  candidates.push_back(make_candidate(inst, gamma_class, 1.0, "classical-optimum"));

  const double tie = 1e-12 * scale_of(inst);
  const Candidate* best = nullptr;
  for (const Candidate& c : candidates) {
    if (!best || c.total() > best->total() + tie || (c.total() > best->total() - tie && c.p < best->p)) best = &c;
  }
  adopt(sol, *best, denominator);
  return sol;
}

ClassicalSolution traceless_classical(const CifhInstance& inst, int brute_force_gate) {
  if (is_disjoint_edges(inst)) return disjoint_edge_exact(inst);
  if (auto bp = detect_bipartition(inst)) return bipartite_exact(inst, *bp);
  if (inst.n() <= std::min(brute_force_gate, kBruteForceMaxModes)) return brute_force_classical(inst);
  throw Error("classical optimum unavailable: interaction graph is not bipartite and n = " +
              std::to_string(inst.n()) + " exceeds the brute-force gate");
}

namespace {

void fill_traceless_bounds(RatioDerivation& d) {
  const double a = d.a_upper, b = d.b_upper;
  if (a + b <= 1e-14) {
    d.beta = 0;
    d.f_beta_0 = d.f_beta_1 = d.guarantee = 1.0;
    return;
  }
  d.beta = b > 0 ? a / b : std::numeric_limits<double>::infinity();
  d.f_beta_0 = f_beta_traceless(d.beta, 0.0);
  d.f_beta_1 = f_beta_traceless(d.beta, 1.0);
  d.guarantee = std::max(d.f_beta_0, d.f_beta_1);
}

void finish(const CifhInstance& inst, CertifiedSolution& sol, const std::optional<SectorSpectrum>& spec,
            std::optional<int> q = std::nullopt) {
  if (spec) certify(inst, sol, *spec, q);
}

}  // namespace

CertifiedSolution solve_traceless(const CifhInstance& inst, const SolveOptions& opt) {
  if (inst.convention() != Convention::Traceless) throw Error("solve_traceless: instance is not traceless");
  const ClassicalSolution cls = traceless_classical(inst, opt.brute_force_gate);
  const QuadSolution quad = solve_quad(inst);
  const std::optional<SectorSpectrum> spec = maybe_oracle(inst, opt);
  CertifiedSolution sol = sweep_p_class(inst, covariance_from_bits(cls.assignment), cls, cls.value, quad, opt,
                                        spec ? &*spec : nullptr);
  sol.method = "traceless";
  fill_traceless_bounds(sol.derivation);
  sol.derivation.nominal_ratio = 1.0 / 3.0;
  apply_purify(inst, sol);
  finish(inst, sol, spec);
  return sol;
}

PsdClassicalMode resolve_psd_mode(const CifhInstance& inst, const SolveOptions& opt) {
  if (opt.psd_mode != PsdClassicalMode::Auto) return opt.psd_mode;
  const bool structured = is_disjoint_edges(inst) || detect_bipartition(inst).has_value();
  return structured || inst.n() <= std::min(opt.brute_force_gate, kBruteForceMaxModes)
             ? PsdClassicalMode::Exact
             : PsdClassicalMode::GoemansWilliamson;
}

CertifiedSolution solve_psd(const CifhInstance& inst, const SolveOptions& opt) {
  if (inst.convention() != Convention::Psd) throw Error("solve_psd: instance is not in the psd convention");
  const PsdClassicalMode mode = resolve_psd_mode(inst, opt);

  ClassicalSolution cls;
  double a_upper = 0;
  double gw_residual = 0;
  if (mode == PsdClassicalMode::Exact) {
    cls = traceless_classical(inst, opt.brute_force_gate);
    a_upper = cls.value;
  } else {
    const GwClassicalResult gw = gw_classical_psd(inst, opt.gw_trials, opt.seed);
    cls = gw.solution;
    gw_residual = gw.sdp_residual;
    double trivial = inst.total_interaction_weight();
    for (double m : inst.potentials()) trivial += m;
    a_upper = std::min(gw.relaxation_bound, trivial);
    a_upper = std::max(a_upper, cls.value);
  }
  BitAssignment flipped = cls.assignment;
  for (int& b : flipped) b = 1 - b;
  if (classical_value(flipped, inst) > cls.value) {
    cls.assignment = flipped;
    cls.value = classical_value(flipped, inst);
  }

  const QuadSolution quad = solve_quad(inst);
  const std::optional<SectorSpectrum> spec = maybe_oracle(inst, opt);
  CertifiedSolution sol =
      sweep_p_class(inst, covariance_from_bits(cls.assignment), cls, a_upper, quad, opt, spec ? &*spec : nullptr);
  sol.method = "psd";
  sol.max_sdp_residual = std::max(sol.max_sdp_residual, gw_residual);

  RatioDerivation& d = sol.derivation;
  const double r = a_upper > 0 ? std::min(1.0, cls.value / a_upper) : 1.0;
  d.classical_ratio = r;
  if (d.a_upper + d.b_upper <= 1e-14) {
    d.f_beta_0 = d.f_beta_1 = d.guarantee = 1.0;
  } else {
    d.beta = d.b_upper > 0 ? d.a_upper / d.b_upper : std::numeric_limits<double>::infinity();
    d.f_beta_0 = f_beta_psd(d.beta, 0.0, r);
    d.f_beta_1 = f_beta_psd(d.beta, 1.0, r);
    d.guarantee = std::max(d.f_beta_0, d.f_beta_1);
  }
  const double r_nominal = cls.exact() ? 1.0 : kGoemansWilliamson;
  d.nominal_ratio = r_nominal / (r_nominal + 0.5);
  apply_purify(inst, sol);
  finish(inst, sol, spec);
  return sol;
}

CertifiedSolution solve_fixed_particles(const CifhInstance& inst, int q, const SolveOptions& opt) {
  if (inst.convention() != Convention::Traceless) throw Error("solve_fixed_particles: instance is not traceless");
  for (double m : inst.potentials())
    if (m != 0) throw Error("solve_fixed_particles: requires zero potentials");
  const int n = inst.n();
  if (q < 0 || q > n / 2) throw Error("solve_fixed_particles: q outside [0, n/2]");
  std::optional<Bipartition> bp = detect_bipartition(inst);
  if (!bp) throw Error("solve_fixed_particles: interaction graph is not bipartite");
  if (bp->side_a.size() < bp->side_b.size()) std::swap(bp->side_a, bp->side_b);

  const QuadSolution quad = solve_quad(inst);
  const Vector& eps = quad.spectrum.mode_energies;  // ascending
  double b_q = 0;
  for (int m = 0; m < q; ++m) b_q += eps(n - 1 - m);
  const double a_q = inst.total_interaction_weight() / 4;
  const double denominator = a_q + b_q;

  const std::optional<SectorSpectrum> spec = maybe_oracle(inst, opt);
  CertifiedSolution sol;
  sol.method = "fixed-particles";
  sol.derivation.a_upper = a_q;
  sol.derivation.b_upper = b_q;
  sol.derivation.class_exact = true;

  SdpOptions sopt;
  sopt.tol = opt.sdp_tol;
  sopt.max_iter = opt.sdp_max_iter;
  std::vector<int> choices = {0};
  if (q != 0) choices.push_back(q);
  std::optional<Candidate> best;
  const double tie = 1e-12 * scale_of(inst);
  for (int qp : choices) {
    const ClassicalSolution cls = classical_fixed_q_bipartite(inst, *bp, qp);
    const double p = n - 2 * qp == 0 ? 1.0 : static_cast<double>(n - 2 * q) / (n - 2 * qp);
    const MediatedSolve ms = solve_mediated(inst, covariance_from_bits(cls.assignment), p, q, sopt);
    const SdpSolution& s = ms.sdp;
    CurvePoint pt;
    pt.p_class = p;
    pt.status = s.status;
    pt.primal_residual = s.primal_residual;
    pt.iterations = s.iterations;
    Candidate c = make_candidate(inst, ms.gamma, p, "sdp-q" + std::to_string(qp));
    pt.energy_class = c.e_class;
    pt.energy_quad = c.e_quad;
    pt.energy_total = c.total();
    pt.ratio = spec ? ratio_or_one(pt.energy_total, spec->avg_q_max(q)) : ratio_or_one(pt.energy_total, denominator);
    sol.curve.push_back(pt);
    if (!usable(s, sopt.tol)) continue;
    sol.max_sdp_residual = std::max(sol.max_sdp_residual, s.primal_residual);
    sol.derivation.classical_value = cls.value;
    sol.derivation.classical_method = std::string(to_string(cls.method));
    if (!best || c.total() > best->total() + tie || (c.total() > best->total() - tie && c.p < best->p))
      best = std::move(c);
  }
  if (!best) throw Error("every particle-constrained SDP failed");
  adopt(sol, *best, denominator);
  sol.derivation.beta = b_q > 0 ? a_q / b_q : std::numeric_limits<double>::infinity();
  sol.derivation.guarantee = fixed_particle_guarantee(n, q);
  sol.derivation.nominal_ratio = sol.derivation.guarantee;

  double particles = 0;
  for (int j = 0; j < n; ++j) particles += (1 - sol.gamma(2 * j, 2 * j + 1)) / 2;
  sol.particle_expectation = particles;
  finish(inst, sol, spec, q);
  return sol;
}

CertifiedSolution solve_fmc(const CifhInstance& inst, const SolveOptions& opt) {
  if (inst.convention() != Convention::Fmc) throw Error("solve_fmc: instance is not in the fmc convention");
  const QuadSolution quad = solve_quad(inst);
  const std::optional<SectorSpectrum> spec = maybe_oracle(inst, opt);

  CertifiedSolution sol;
  sol.method = "fmc";
  RatioDerivation& d = sol.derivation;
  if (inst.n() <= std::min(opt.brute_force_gate, kBruteForceMaxModes)) {
    const ClassicalSolution cls = brute_force_classical(inst);
    d.a_upper = cls.value;
    d.classical_value = cls.value;
    d.classical_method = std::string(to_string(cls.method));
    d.class_exact = true;
  } else {
    d.a_upper = inst.total_interaction_weight() / 2;
    d.classical_method = "edge-sum-bound";
  }
  d.b_upper = quad.value;
  d.beta = d.b_upper > 0 ? d.a_upper / d.b_upper : std::numeric_limits<double>::infinity();
  d.guarantee = d.nominal_ratio = 0.5;

  const CovarianceMatrix mixed = blend({{0.5, mediator(quad.gamma)}, {0.5, quad.gamma}});
  adopt(sol, make_candidate(inst, mixed, 0.0, "mediator-blend"), d.a_upper + d.b_upper);
  apply_purify(inst, sol);
  finish(inst, sol, spec);
  return sol;
}

CertifiedSolution solve(const CifhInstance& inst, const SolveOptions& opt) {
  switch (inst.convention()) {
    case Convention::Traceless:
      if (inst.particle_target()) {
        const double q = *inst.particle_target();
        if (q != std::floor(q)) throw Error("particle target must be an integer for the fixed-particle solver");
        return solve_fixed_particles(inst, static_cast<int>(q), opt);
      }
      return solve_traceless(inst, opt);
    case Convention::Psd: return solve_psd(inst, opt);
    case Convention::Fmc: return solve_fmc(inst, opt);
  }
  throw Error("unknown convention");
}

void certify(const CifhInstance& inst, CertifiedSolution& sol, const SectorSpectrum& spectrum,
             std::optional<int> particle_target) {
  const double lam = particle_target ? spectrum.avg_q_max(*particle_target) : spectrum.global_max;
  sol.derivation.oracle_lambda_max = lam;
  sol.exact_ratio = ratio_or_one(sol.energy_total, lam);
  if (inst.convention() == Convention::Traceless && !particle_target && sol.derivation.class_exact) {
    const double ab = sol.derivation.a_upper + sol.derivation.b_upper;
    const double tol = 1e-9 * scale_of(inst);
    sol.derivation.sandwich_holds = ab / 3 <= lam + tol && lam <= ab + tol;
  }
}

bool guarantee_violated(const CertifiedSolution& sol) {
  const double g = sol.derivation.guarantee;
  if (sol.ratio_bound < g - 1e-4 * std::max(1.0, std::abs(g))) return true;
  if (sol.exact_ratio && *sol.exact_ratio < sol.ratio_bound - 1e-6) return true;
  if (sol.derivation.sandwich_holds && !*sol.derivation.sandwich_holds) return true;
  return false;
}

}  // namespace cifh
