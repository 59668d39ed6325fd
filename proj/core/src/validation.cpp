#include "cifh/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cifh/classical.hpp"
#include "cifh/oracle.hpp"
#include "cifh/pipeline.hpp"
#include "cifh/quad.hpp"
#include "cifh/sdp.hpp"

namespace cifh::validation {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream(std::uint64_t seed, int criterion, int index) {
  return mix(mix(seed ^ (static_cast<std::uint64_t>(criterion) << 40)) + static_cast<std::uint64_t>(index));
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  va_list ap;
  va_start(ap, f);
  va_list copy;
  va_copy(copy, ap);
  const int len = std::vsnprintf(nullptr, 0, f, copy);
  va_end(copy);
  std::string out(static_cast<std::size_t>(std::max(len, 0)), '\0');
  std::vsnprintf(out.data(), out.size() + 1, f, ap);
  va_end(ap);
  return out;
}

class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      ++failures_;
      if (first_.empty()) first_ = what;
    }
  }
  bool ok() const { return failures_ == 0; }
  int checks() const { return checks_; }
  std::string summary() const {
    if (ok()) return fmt("%d checks", checks_);
    return fmt("%d/%d checks failed; first: %s", failures_, checks_, first_.c_str());
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string first_;
};

struct Shared {
  std::vector<double> residuals;
  int sandwich_checks = 0;
  int sandwich_failures = 0;
};

struct Ctx {
  const SuiteOptions& opt;
  Shared shared;
  EnergyFn energy;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void record(Ctx& ctx, const CertifiedSolution& sol) {
  for (const CurvePoint& p : sol.curve) ctx.shared.residuals.push_back(p.primal_residual);
  ctx.shared.residuals.push_back(sol.max_sdp_residual);
  if (sol.derivation.sandwich_holds) {
    ++ctx.shared.sandwich_checks;
    if (!*sol.derivation.sandwich_holds) ++ctx.shared.sandwich_failures;
  }
}

std::string describe(const CifhInstance& inst) {
  return fmt("%s n=%d |E|=%zu |E'|=%zu digest=%s", std::string(to_string(inst.convention())).c_str(), inst.n(),
             inst.interaction_edges().size(), inst.hopping_edges().size(), instance_digest(inst).c_str());
}

// ---- 1 ---------------------------------------------------------------------

void heisenberg(CriterionResult& r, Ctx&) {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  const double lam_ref = (3 + 2 * std::sqrt(3.0)) / 4;
  const double gap_ref = (1 + std::sqrt(3.0) - std::sqrt(2.0)) / 2;
  const double s_ref = (5 + 2 * std::sqrt(3.0)) / 9;

  const GapBoundRecord rec = heisenberg_gap_bound();
  t.expect(std::abs(rec.lambda_max - lam_ref) <= 1e-9, fmt("lambda_max %.12f", rec.lambda_max));
  t.expect(std::abs(rec.gap - gap_ref) <= 1e-9, fmt("gap %.12f", rec.gap));

  const SectorSpectrum spec = exact_spectrum(heisenberg_line4(), true);
  const Matrix g = covariance_of_state(4, spec.top_vector).gamma();
  const double dev = max_abs(g * g.transpose() - s_ref * Matrix::Identity(8, 8));
  t.expect(dev <= 1e-8, fmt("Gamma Gamma^T deviates from s I by %.3e", dev));
  t.expect(std::abs(rec.alpha_star - 0.998818) <= 1e-5, fmt("alpha* %.8f", rec.alpha_star));
  t.expect(rec.ratio_upper < 0.99904 && rec.ratio_upper >= 0.9989, fmt("ratio_upper %.8f", rec.ratio_upper));
  const double secs = elapsed(t0);
  t.expect(secs < 1.0, fmt("runtime %.2f s", secs));
  r.passed = t.ok();
  r.detail = fmt("lambda=%.10f gap=%.10f alpha*=%.7f ratio_upper=%.7f; ", rec.lambda_max, rec.gap, rec.alpha_star,
                 rec.ratio_upper) +
             t.summary();
}

// ---- 2 ---------------------------------------------------------------------

void complete_graph(CriterionResult& r, Ctx&) {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  for (int n = 3; n <= 12; ++n) {
    const CifhInstance inst = complete_graph_instance(n, 1.0);
    const double hi = brute_force_classical(inst).value;
    const double lo = brute_force_classical_min(inst).value;
    t.expect(8 * hi == n + 1, fmt("n=%d: 8 lambda_max = %.17g", n, 8 * hi));
    t.expect(8 * lo == -n * (n + 1), fmt("n=%d: 8 lambda_min = %.17g", n, 8 * lo));
    if (n <= 8) {
      const SectorSpectrum s = exact_spectrum(inst);
      t.expect(std::abs(s.global_max - hi) <= 1e-9 && std::abs(s.global_min - lo) <= 1e-9,
               fmt("n=%d: oracle disagrees with enumeration", n));
    }
  }
  const double secs = elapsed(t0);
  t.expect(secs < 10.0, fmt("runtime %.2f s", secs));
  r.passed = t.ok();
  r.detail = "n=3..12; " + t.summary();
}

// ---- 3 ---------------------------------------------------------------------

void traceless_guarantee(CriterionResult& r, Ctx& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  double worst_bound = std::numeric_limits<double>::infinity();
  double worst_gap = std::numeric_limits<double>::infinity();
  SolveOptions so;
  so.oracle = true;
  for (int i = 0; i < 200; ++i) {
    RandomSpec rs;
    rs.n = 4 + i % 7;
    rs.convention = Convention::Traceless;
    rs.bipartite = true;
    const bool dense = (i / 7) % 2 == 0;
    rs.interaction_density = dense ? 0.9 : 0.3;
    rs.hopping_density = dense ? 0.9 : 0.3;
    rs.seed = substream(ctx.opt.seed, 3, i);
    const CifhInstance inst = random_instance(rs);
    const CertifiedSolution sol = solve_traceless(inst, so);
    record(ctx, sol);
    worst_bound = std::min(worst_bound, sol.ratio_bound);
    t.expect(sol.ratio_bound >= 1.0 / 3 - 1e-6, fmt("ratio_bound %.8f on %s", sol.ratio_bound, describe(inst).c_str()));
    t.expect(sol.exact_ratio.has_value(), "oracle did not run on " + describe(inst));
    if (sol.exact_ratio) {
      worst_gap = std::min(worst_gap, *sol.exact_ratio - sol.ratio_bound);
      t.expect(*sol.exact_ratio >= sol.ratio_bound - 1e-12,
               fmt("exact %.8f < bound %.8f on %s", *sol.exact_ratio, sol.ratio_bound, describe(inst).c_str()));
    }
  }
  const double secs = elapsed(t0);
  t.expect(secs < 300.0, fmt("runtime %.1f s", secs));
  r.passed = t.ok();
  r.detail = fmt("200 instances; min ratio_bound=%.6f min(exact-bound)=%.3e; ", worst_bound, worst_gap) + t.summary();
}

// ---- 4 ---------------------------------------------------------------------

void beta_half(CriterionResult& r, Ctx& ctx) {
  Tally t;
  int built = 0;
  SolveOptions so;
  so.oracle = true;
  for (int i = 0; built < 6 && i < 100; ++i) {
    RandomSpec rs;
    rs.n = 4 + 2 * (built % 3);
    rs.convention = Convention::Traceless;
    rs.bipartite = true;
    rs.interaction_density = 0.7;
    rs.hopping_density = 0.7;
    rs.seed = substream(ctx.opt.seed, 4, i);
    const CifhInstance raw = random_instance(rs);
    const double a = traceless_classical(raw, so.brute_force_gate).value;
    const double b = solve_quad(raw).value;
    if (a <= 1e-6 || b <= 1e-6) continue;
    ++built;
    const CifhInstance inst = scale_classical(raw, b / (2 * a));
    const CertifiedSolution sol = solve_traceless(inst, so);
    record(ctx, sol);
    const RatioDerivation& d = sol.derivation;
    const double ab = d.a_upper + d.b_upper;
    const std::string who = describe(inst);
    t.expect(std::abs(d.beta - 0.5) <= 1e-9, fmt("beta %.12f on %s", d.beta, who.c_str()));
    t.expect(std::abs(d.f_beta_0 - 1.0 / 3) <= 1e-3, fmt("f_beta(0) %.6f on %s", d.f_beta_0, who.c_str()));
    t.expect(std::abs(d.f_beta_1 - 1.0 / 3) <= 1e-3, fmt("f_beta(1) %.6f on %s", d.f_beta_1, who.c_str()));
    const double r0 = sol.curve.front().energy_total / ab;
    const double r1 = sol.curve.back().energy_total / ab;
    t.expect(std::abs(r1 - 1.0 / 3) <= 1e-3, fmt("p=1 endpoint ratio %.6f on %s", r1, who.c_str()));
    t.expect(r0 >= d.f_beta_0 - 1e-6, fmt("p=0 endpoint ratio %.6f below f_beta(0) on %s", r0, who.c_str()));
    t.expect(std::max(r0, r1) >= std::max(d.beta, 0.5) / (d.beta + 1) - 1e-6, "best endpoint below max(beta,1/2)/(beta+1)");
    t.expect(sol.ratio_bound >= 1.0 / 3 - 1e-6, fmt("ratio_bound %.6f", sol.ratio_bound));
  }
  t.expect(built == 6, fmt("only %d synthetic instances could be built", built));
  r.passed = t.ok();
  r.detail = fmt("%d rescaled instances; ", built) + t.summary();
}

// ---- 5 ---------------------------------------------------------------------

void psd_guarantee(CriterionResult& r, Ctx& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  double worst_gw = std::numeric_limits<double>::infinity();
  double worst_exact = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    RandomSpec rs;
    rs.n = 3 + i % 8;
    rs.convention = Convention::Psd;
    const bool dense = (i / 8) % 2 == 0;
    rs.interaction_density = dense ? 0.8 : 0.35;
    rs.hopping_density = dense ? 0.8 : 0.35;
    rs.seed = substream(ctx.opt.seed, 5, i);
    const CifhInstance inst = random_instance(rs);
    const std::string who = describe(inst);

    SolveOptions gw;
    gw.oracle = true;
    gw.psd_mode = PsdClassicalMode::GoemansWilliamson;
    gw.gw_trials = 64;
    gw.seed = substream(ctx.opt.seed, 50, i);
    const CertifiedSolution a = solve_psd(inst, gw);
    record(ctx, a);
    t.expect(a.exact_ratio.has_value(), "oracle did not run on " + who);
    if (a.exact_ratio) {
      worst_gw = std::min(worst_gw, *a.exact_ratio);
      t.expect(*a.exact_ratio >= 0.637, fmt("GW path exact ratio %.6f on %s", *a.exact_ratio, who.c_str()));
    }

    SolveOptions ex;
    ex.oracle = true;
    ex.psd_mode = PsdClassicalMode::Exact;
    const CertifiedSolution b = solve_psd(inst, ex);
    record(ctx, b);
    worst_exact = std::min(worst_exact, b.ratio_bound);
    t.expect(b.ratio_bound >= 2.0 / 3 - 1e-6, fmt("exact-classical bound %.6f on %s", b.ratio_bound, who.c_str()));
    if (b.exact_ratio)
      t.expect(*b.exact_ratio >= b.ratio_bound - 1e-12, "exact ratio below certified bound on " + who);
  }
  const double secs = elapsed(t0);
  t.expect(secs < 600.0, fmt("runtime %.1f s", secs));
  r.passed = t.ok();
  r.detail = fmt("100 instances; min GW exact ratio=%.6f min exact-classical bound=%.6f; ", worst_gw, worst_exact) +
             t.summary();
}

// ---- 6 ---------------------------------------------------------------------

void fixed_particles(CriterionResult& r, Ctx& ctx) {
  Tally t;
  std::vector<CifhInstance> insts;
  for (int n : {4, 6, 8}) {
    int i = 0;
    for (double density : {0.9, 0.5, 0.3}) {
      RandomSpec rs;
      rs.n = n;
      rs.convention = Convention::Traceless;
      rs.bipartite = true;
      rs.zero_potentials = true;
      rs.interaction_density = density;
      rs.hopping_density = density;
      rs.seed = substream(ctx.opt.seed, 6, 10 * n + i++);
      insts.push_back(random_instance(rs));
    }
  }
  insts.push_back(hubbard_triangle(1.0, 2.0, 0.0));

  SolveOptions so;
  so.oracle = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  int runs = 0;
  for (const CifhInstance& inst : insts) {
    const int n = inst.n();
    const std::string who = describe(inst);
    for (int q = 0; q <= n / 2; ++q) {
      const CertifiedSolution sol = solve_fixed_particles(inst, q, so);
      record(ctx, sol);
      ++runs;
      const double g = fixed_particle_guarantee(n, q);
      t.expect(sol.particle_expectation && std::abs(*sol.particle_expectation - q) <= 1e-6,
               fmt("particle expectation %.9f for q=%d on %s", sol.particle_expectation.value_or(-1), q, who.c_str()));
      t.expect(sol.exact_ratio.has_value(), "oracle did not run on " + who);
      if (sol.exact_ratio) {
        worst_margin = std::min(worst_margin, *sol.exact_ratio - g);
        t.expect(*sol.exact_ratio >= g - 1e-6,
                 fmt("exact ratio %.6f < %.6f for q=%d on %s", *sol.exact_ratio, g, q, who.c_str()));
      }
      if (2 * q == n) t.expect(std::abs(g - 1.0 / 3) <= 1e-15, fmt("half-filling guarantee %.17g", g));
    }
  }
  r.passed = t.ok();
  r.detail = fmt("%zu instances, %d (instance, q) runs; min(exact - guarantee)=%.4f; ", insts.size(), runs, worst_margin) +
             t.summary();
}

// ---- 7 ---------------------------------------------------------------------

double mixed_state_energy(const CifhInstance& inst) {
  const SparseMatrix h = jw_hamiltonian(inst);
  double tr = 0;
  for (int k = 0; k < h.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(h, k); it; ++it)
      if (it.row() == it.col()) tr += it.value();
  return tr / std::ldexp(1.0, inst.n());
}

void fmc_guarantee(CriterionResult& r, Ctx& ctx) {
  Tally t;
  SolveOptions so;
  so.oracle = true;
  double worst = std::numeric_limits<double>::infinity();
  double worst_mixed = std::numeric_limits<double>::infinity();
  int built = 0;
  for (int i = 0; built < 50 && i < 500; ++i) {
    RandomSpec rs;
    rs.n = 2 + built % 9;
    rs.convention = Convention::Fmc;
    rs.interaction_density = 0.25 + 0.15 * (built % 5);
    rs.max_interaction = 1.0;
    rs.seed = substream(ctx.opt.seed, 7, i);
    const CifhInstance inst = random_instance(rs);
    if (inst.interaction_edges().empty()) continue;
    ++built;
    const std::string who = describe(inst);
    const CertifiedSolution sol = solve_fmc(inst, so);
    record(ctx, sol);
    const double lam = *sol.derivation.oracle_lambda_max;
    const QuadSolution quad = solve_quad(inst);
    const double blend_ratio =
        energy_total(blend({{0.5, mediator(quad.gamma)}, {0.5, quad.gamma}}), inst) / lam;
    worst = std::min(worst, blend_ratio);
    t.expect(blend_ratio >= 0.5 - 1e-6, fmt("blend ratio %.6f on %s", blend_ratio, who.c_str()));
    t.expect(*sol.exact_ratio >= 0.5 - 1e-6, fmt("purified ratio %.6f on %s", *sol.exact_ratio, who.c_str()));
    const double mixed = mixed_state_energy(inst) / lam;
    worst_mixed = std::min(worst_mixed, mixed);
    t.expect(mixed >= 0.25 - 1e-6, fmt("mixed-state ratio %.6f on %s", mixed, who.c_str()));
  }
  t.expect(built == 50, fmt("only %d graphs with edges", built));
  const CifhInstance edge = fmc_from_graph(2, {{0, 1, 1.0}});
  const double edge_mixed = mixed_state_energy(edge) / exact_spectrum(edge).global_max;
  t.expect(std::abs(edge_mixed - 0.25) <= 1e-6, fmt("single-edge mixed ratio %.9f", edge_mixed));
  r.passed = t.ok();
  r.detail = fmt("%d graphs; min blend ratio=%.6f min mixed ratio=%.6f edge mixed=%.6f; ", built, worst, worst_mixed,
                 edge_mixed) +
             t.summary();
}

// ---- 8 ---------------------------------------------------------------------

void hubbard_sweep(CriterionResult& r, Ctx& ctx) {
  Tally t;
  const CifhInstance inst = hubbard_triangle(1.0, 2.0, 0.0);
  SolveOptions so;
  so.grid = 40;
  so.oracle = true;
  const CertifiedSolution sol = solve_traceless(inst, so);
  record(ctx, sol);
  t.expect(sol.curve.size() == 41, fmt("%zu grid points", sol.curve.size()));
  double best = -1;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < sol.curve.size(); ++i) {
    const CurvePoint& p = sol.curve[i];
    t.expect(p.ratio <= 1 + 1e-6, fmt("ratio %.8f at p=%.3f", p.ratio, p.p_class));
    if (p.ratio > best) {
      best = p.ratio;
      arg = i;
    }
  }
  const double r0 = sol.curve.front().ratio, r1 = sol.curve.back().ratio;
  t.expect(best >= r0 && best >= r1, "best grid ratio below an endpoint");
  t.expect(best > 1.0 / 3, fmt("best ratio %.6f", best));
  r.passed = t.ok();
  r.detail = fmt("best ratio %.6f at p=%.3f (endpoints %.6f, %.6f); ", best, sol.curve[arg].p_class, r0, r1) +
             t.summary();
}

// ---- 9 ---------------------------------------------------------------------

void wick_oracle(CriterionResult& r, Ctx& ctx) {
  Tally t;
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    const int n = 2 + i % 4;
    RandomSpec rs;
    rs.n = n;
    rs.convention = static_cast<Convention>((i / 4) % 3);
    rs.interaction_density = 0.7;
    rs.hopping_density = 0.7;
    rs.seed = substream(ctx.opt.seed, 9, i);
    const CifhInstance inst = random_instance(rs);
    const bool pure = (i / 12) % 2 == 0;
    const CovarianceMatrix g = random_covariance(n, substream(ctx.opt.seed, 90, i), pure);
    const SectorSpectrum spec = exact_spectrum(inst);
    const double hnorm = std::max(std::abs(spec.global_max), std::abs(spec.global_min));
    const double want = expectation(gaussian_density_matrix(g), jw_hamiltonian(inst));
    const double got = ctx.energy(g.gamma(), inst);
    const double err = std::abs(got - want) / (1 + hnorm);
    worst = std::max(worst, err);
    t.expect(err <= 1e-8, fmt("|E - tr(rho H)| = %.3e on %s (%s)", std::abs(got - want), describe(inst).c_str(),
                              pure ? "pure" : "mixed"));
  }
  r.passed = t.ok();
  r.detail = fmt("500 states; max scaled error %.2e; ", worst) + t.summary();
}

// ---- 10 --------------------------------------------------------------------

void gaussian_ops(CriterionResult& r, Ctx& ctx) {
  Tally t;
  std::mt19937_64 rng(substream(ctx.opt.seed, 10, 0));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const int n = 2 + i % 5;
    const int parts = 2 + i % 3;
    std::vector<double> w(parts);
    for (double& x : w) x = u01(rng) + 1e-3;
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<std::pair<double, CovarianceMatrix>> comps;
    double used = 0;
    for (int c = 0; c < parts; ++c) {
      const double wc = c + 1 == parts ? 1.0 - used : w[c] / total;
      used += wc;
      comps.emplace_back(wc, random_covariance(n, substream(ctx.opt.seed, 100, i * 8 + c), c % 2 == 0));
    }
    try {
      const CovarianceMatrix b = blend(comps);
      const CovarianceMatrix again(b.gamma());
      t.expect(spectral_norm(again.gamma()) <= 1 + CovarianceMatrix::kFeasibilityTol, "blend outside the unit ball");
    } catch (const Error& e) {
      t.expect(false, fmt("blend %d rejected: %s", i, e.what()));
    }
  }
  double worst_diag = 0, worst_pure = 0, worst_drop = 0;
  for (int i = 0; i < 500; ++i) {
    RandomSpec rs;
    rs.n = 2 + i % 5;
    rs.convention = static_cast<Convention>(i % 3);
    rs.interaction_density = 0.6;
    rs.hopping_density = 0.6;
    rs.seed = substream(ctx.opt.seed, 101, i);
    const CifhInstance inst = random_instance(rs);
    const QuadSolution q = solve_quad(inst);
    const CovarianceMatrix b = blend({{0.5, mediator(q.gamma)}, {0.5, q.gamma}});
    for (int j = 0; j < inst.n(); ++j) worst_diag = std::max(worst_diag, std::abs(b(2 * j, 2 * j + 1)));
    const CovarianceMatrix g = random_covariance(inst.n(), substream(ctx.opt.seed, 102, i), false);
    const CovarianceMatrix p = purify(g, inst);
    const PurityCertificate cert = purity(p);
    worst_pure = std::max(worst_pure, cert.max_deviation);
    const double drop = energy_total(g, inst) - energy_total(p, inst);
    worst_drop = std::max(worst_drop, drop);
    t.expect(cert.max_deviation <= 1e-8, fmt("purify output deviation %.3e on %s", cert.max_deviation, describe(inst).c_str()));
    t.expect(drop <= 1e-8, fmt("purify lowered energy by %.3e on %s", drop, describe(inst).c_str()));
  }
  t.expect(worst_diag <= 1e-12, fmt("mediator blend leaves mode block %.3e", worst_diag));
  r.passed = t.ok();
  r.detail = fmt("500 blends; mediator residue %.1e; purity dev %.1e; max energy drop %.1e; ", worst_diag, worst_pure,
                 worst_drop) +
             t.summary();
}

// ---- 11 --------------------------------------------------------------------

double enumerate_signed_cut(int n, const std::vector<SignedEdge>& edges) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double v = 0;
    for (const SignedEdge& e : edges) {
      const int zj = (mask >> e.j) & 1u ? -1 : 1;
      const int zk = (mask >> e.k) & 1u ? -1 : 1;
      v += e.weight * (1 - e.sign * zj * zk);
    }
    best = std::max(best, v);
  }
  return best;
}

void classical_solvers(CriterionResult& r, Ctx& ctx) {
  Tally t;
  for (int i = 0; i < 200; ++i) {
    RandomSpec rs;
    rs.n = 2 + i % 17;
    rs.convention = i % 2 == 0 ? Convention::Traceless : Convention::Psd;
    rs.bipartite = true;
    rs.interaction_density = 0.2 + 0.2 * (i % 4);
    rs.hopping_density = 0.0;
    rs.max_potential = 1.5;
    rs.seed = substream(ctx.opt.seed, 11, i);
    const CifhInstance inst = random_instance(rs);
    const auto bp = detect_bipartition(inst);
    if (!bp) {
      t.expect(false, "bipartite generator produced an odd cycle: " + describe(inst));
      continue;
    }
    const ClassicalSolution a = bipartite_exact(inst, *bp);
    const ClassicalSolution b = brute_force_classical(inst);
    const double tol = 1e-9 * (1 + inst.total_interaction_weight());
    t.expect(std::abs(a.value - b.value) <= tol, fmt("bipartite %.12f vs enumeration %.12f on %s", a.value, b.value,
                                                     describe(inst).c_str()));
    t.expect(std::abs(classical_value(a.assignment, inst) - a.value) <= tol, "bipartite value does not match assignment");
  }

  std::mt19937_64 rng(substream(ctx.opt.seed, 11, 1000));
  std::uniform_real_distribution<double> weight(0.0, 1.0), mu(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + i % 11;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const int pairs = static_cast<int>(rng() % (n / 2 + 1));
    std::vector<Edge> edges;
    for (int p = 0; p < pairs; ++p) edges.push_back({perm[2 * p], perm[2 * p + 1], weight(rng)});
    const bool psd = i % 3 == 2;
    std::vector<double> pot(n);
    for (double& m : pot) m = psd ? std::abs(mu(rng)) : mu(rng);
    const CifhInstance inst =
        CifhInstance::create(n, edges, pot, {}, psd ? Convention::Psd : Convention::Traceless);
    const double a = disjoint_edge_exact(inst).value;
    const double b = brute_force_classical(inst).value;
    t.expect(std::abs(a - b) <= 1e-9 * (1 + n), fmt("disjoint-edge %.12f vs enumeration %.12f on %s", a, b,
                                                    describe(inst).c_str()));
  }

  for (int i = 0; i < 40; ++i) {
    const int n = 3 + i % 10;
    std::vector<SignedEdge> edges;
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (weight(rng) < 0.5 || (i < 10 && k == j + 1)) edges.push_back({j, k, weight(rng), i % 3 == 0 ? 1 : (rng() % 2 ? 1 : -1)});
    const double opt = enumerate_signed_cut(n, edges);
    const SignedMaxCutResult gw = gw_signed_maxcut(n, edges, 16, substream(ctx.opt.seed, 110, i));
    double scale = 1;
    for (const SignedEdge& e : edges) scale += e.weight;
    t.expect(gw.sdp_bound >= opt - 1e-6 * scale, fmt("relaxation %.9f below cut optimum %.9f (n=%d)", gw.sdp_bound, opt, n));
    t.expect(gw.value <= opt + 1e-9 * scale, "rounded cut exceeds the optimum");
  }
  r.passed = t.ok();
  r.detail = "200 bipartite, 100 matching, 40 signed graphs; " + t.summary();
}

// ---- 12 --------------------------------------------------------------------

void sandwich(CriterionResult& r, Ctx& ctx) {
  Tally t;
  for (int i = 0; i < 100; ++i) {
    RandomSpec rs;
    rs.n = 2 + i % 9;
    rs.convention = Convention::Traceless;
    rs.bipartite = i % 2 == 0;
    rs.interaction_density = 0.3 + 0.1 * (i % 6);
    rs.hopping_density = 0.3 + 0.1 * ((i / 6) % 6);
    rs.seed = substream(ctx.opt.seed, 12, i);
    const CifhInstance inst = random_instance(rs);
    const double a = brute_force_classical(inst).value;
    const double b = solve_quad(inst).value;
    const double lam = exact_spectrum(inst).global_max;
    const double tol = 1e-9 * (1 + std::abs(a) + std::abs(b));
    t.expect((a + b) / 3 <= lam + tol && lam <= a + b + tol,
             fmt("A=%.9f B=%.9f lambda=%.9f on %s", a, b, lam, describe(inst).c_str()));
  }
  if (ctx.shared.sandwich_checks > 0)
    t.expect(ctx.shared.sandwich_failures == 0,
             fmt("sandwich failed on %d pipeline instances", ctx.shared.sandwich_failures));
  r.passed = t.ok();
  r.detail = fmt("100 direct + %d pipeline instances; ", ctx.shared.sandwich_checks) + t.summary();
}

// ---- 13 --------------------------------------------------------------------

void sdp_calibration(CriterionResult& r, Ctx& ctx) {
  Tally t;
  auto diag_constraints = [](int d) {
    std::vector<SdpConstraint> out;
    for (int j = 0; j < d; ++j) out.push_back({{{j, j, 1.0}}, 1.0});
    return out;
  };

  SdpProblem p1{2, Matrix::Zero(2, 2), diag_constraints(2)};
  p1.objective(0, 0) = 1;
  p1.objective(1, 1) = -1;
  SdpProblem p2{2, Matrix::Zero(2, 2), diag_constraints(2)};
  p2.objective(0, 1) = p2.objective(1, 0) = 1;
  SdpProblem p3{3, Matrix::Zero(3, 3), diag_constraints(3)};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) p3.objective(j, k) = j == k ? 0.5 : -0.25;

  // K3 reference: the feasible symmetric family Y(t) = (1 - t) I + t J.
  double k3_ref = -std::numeric_limits<double>::infinity();
  for (int step = 0; step <= 300000; ++step) {
    const double tt = -1.0 + step * 1e-5;
    Matrix y = (1 - tt) * Matrix::Identity(3, 3) + tt * Matrix::Ones(3, 3);
    Eigen::SelfAdjointEigenSolver<Matrix> es(y, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12) continue;
    k3_ref = std::max(k3_ref, (p3.objective.cwiseProduct(y)).sum());
  }

  const std::vector<std::pair<const SdpProblem*, double>> cal = {{&p1, 0.0}, {&p2, 2.0}, {&p3, k3_ref}};
  std::string vals;
  for (const auto& [prob, ref] : cal) {
    const SdpSolution s = solve_sdp(*prob);
    t.expect(s.status == SdpStatus::Converged, "calibration SDP did not converge");
    t.expect(std::abs(s.objective_value - ref) <= 1e-6, fmt("objective %.9f vs reference %.9f", s.objective_value, ref));
    t.expect(s.primal_residual <= 1e-7, fmt("calibration residual %.2e", s.primal_residual));
    vals += fmt("%.7f/%.7f ", s.objective_value, ref);
  }

  if (ctx.shared.residuals.empty()) {
    SolveOptions so;
    so.grid = 10;
    record(ctx, solve_traceless(hubbard_triangle(1.0, 2.0, 0.0), so));
    record(ctx, solve_fixed_particles(hubbard_triangle(1.0, 2.0, 0.0), 2, so));
  }
  double worst = 0;
  for (double res : ctx.shared.residuals) worst = std::max(worst, res);
  t.expect(worst <= 1e-7, fmt("pipeline SDP residual %.3e", worst));
  r.passed = t.ok();
  r.detail = "objective/reference " + vals + fmt("; %zu pipeline SDPs, max residual %.2e; ", ctx.shared.residuals.size(),
                                                worst) +
             t.summary();
}

using Runner = void (*)(CriterionResult&, Ctx&);

struct Entry {
  CriterionInfo info;
  Runner run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {{1, "heisenberg-line", "Heisenberg line spectrum, gap and Gaussian ceiling"}, heisenberg},
      {{2, "complete-graph", "complete-graph closed forms"}, complete_graph},
      {{3, "traceless-guarantee", "traceless 1/3 guarantee on bipartite instances"}, traceless_guarantee},
      {{4, "beta-half", "beta = 1/2 endpoint identity"}, beta_half},
      {{5, "psd-guarantee", "psd 0.637 and 2/3 guarantees"}, psd_guarantee},
      {{6, "fixed-particles", "fixed particle-number guarantee"}, fixed_particles},
      {{7, "fmc-guarantee", "fermionic max cut 1/2 guarantee and mixed-state 1/4"}, fmc_guarantee},
      {{8, "hubbard-sweep", "Hubbard triangle p_class sweep"}, hubbard_sweep},
      {{9, "wick-oracle", "Wick-oracle equivalence"}, wick_oracle},
      {{10, "gaussian-ops", "blend, mediator and purify properties"}, gaussian_ops},
      {{11, "classical-solvers", "classical solver equivalences"}, classical_solvers},
      {{12, "sandwich", "component sandwich (A+B)/3 <= lambda_max <= A+B"}, sandwich},
      {{13, "sdp-calibration", "SDP engine calibration and feasibility"}, sdp_calibration},
  };
  return e;
}

}  // namespace

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> out = [] {
    std::vector<CriterionInfo> v;
    for (const Entry& e : entries()) v.push_back(e.info);
    return v;
  }();
  return out;
}

bool selected(const CriterionInfo& c, const std::string& filter) {
  if (filter.empty()) return true;
  std::stringstream ss(filter);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    if (tok == std::to_string(c.id) || c.key.find(tok) != std::string::npos) return true;
  }
  return false;
}

std::vector<CriterionResult> run_suite(const SuiteOptions& opt,
                                       const std::function<void(const CriterionResult&)>& on_result) {
  Ctx ctx{opt, {}, opt.energy ? opt.energy : EnergyFn([](const Matrix& g, const CifhInstance& inst) {
                     return energy_total(g, inst);
                   })};
  std::vector<CriterionResult> out;
  for (const Entry& e : entries()) {
    if (!selected(e.info, opt.filter)) continue;
    CriterionResult r;
    r.id = e.info.id;
    r.key = e.info.key;
    r.title = e.info.title;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.run(r, ctx);
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = elapsed(t0);
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt("%s %2d %-20s %s (%.1f s)", r.passed ? "PASS" : "FAIL", r.id, r.key.c_str(), r.detail.c_str(), r.seconds);
}

}  // namespace cifh::validation
