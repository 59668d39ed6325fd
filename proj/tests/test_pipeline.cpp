#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cifh/oracle.hpp"
#include "cifh/pipeline.hpp"

using namespace cifh;

namespace {

SolveOptions fast() {
  SolveOptions o;
  o.grid = 8;
  return o;
}

double occupation(const CovarianceMatrix& g) {
  double s = 0;
  for (int j = 0; j < g.n(); ++j) s += (1 - g.mode_value(j)) / 2;
  return s;
}

void expect_consistent(const CertifiedSolution& s, const CifhInstance& inst) {
  EXPECT_LE(spectral_norm(s.gamma.gamma()), 1 + 1e-9);
  EXPECT_NEAR(s.energy_total, energy_total(s.gamma, inst), 1e-8);
  EXPECT_NEAR(s.energy_class + s.energy_quad, s.energy_total, 1e-10);
}

}  // namespace

TEST(Formulas, FBetaTraceless) {
  EXPECT_DOUBLE_EQ(f_beta_traceless(0.5, 0.0), 1.0 / 3);
  EXPECT_DOUBLE_EQ(f_beta_traceless(0.5, 1.0), 1.0 / 3);
  EXPECT_DOUBLE_EQ(f_beta_traceless(1.0, 0.5), (0.25 + 0.25) / 2);
  EXPECT_DOUBLE_EQ(f_beta_traceless(std::numeric_limits<double>::infinity(), 0.3), 0.09);
  EXPECT_DOUBLE_EQ(f_beta_traceless(0.0, 0.0), 0.5);
}

TEST(Formulas, FBetaPsdAndFixedParticles) {
  EXPECT_DOUBLE_EQ(f_beta_psd(1.0, 1.0, 1.0), (1.0 + 0.5) / 2);
  EXPECT_DOUBLE_EQ(f_beta_psd(0.0, 0.0, 1.0), 0.75);
  EXPECT_DOUBLE_EQ(fixed_particle_guarantee(6, 3), 1.0 / 3);
  EXPECT_DOUBLE_EQ(fixed_particle_guarantee(6, 0), 0.2);
}

TEST(MediatedSdp, BlendIsFeasible) {
  const auto inst = hubbard_triangle(1.0, 2.0, 0.0);
  const auto cls = traceless_classical(inst, 20);
  const auto gc = covariance_from_bits(cls.assignment);
  const auto quad = solve_quad(inst);
  const double p = 0.4;
  // Mixing in the mediator zeroes the quadratic mode blocks, as the pins require.
  const auto target = blend({{1 - p, blend({{0.5, quad.gamma}, {0.5, mediator(quad.gamma)}})}, {p, gc}});
  const Matrix x = Matrix::Identity(2 * inst.n(), 2 * inst.n());
  ComplexMat xc = x.cast<std::complex<double>>() + std::complex<double>(0, 1) * target.gamma().cast<std::complex<double>>();
  const auto sdp = build_mediated_sdp_complex(inst, gc, p);
  for (const auto& c : sdp.constraints) {
    std::complex<double> v = 0;
    for (const auto& e : c.entries) v += e.value * xc(e.col, e.row);
    EXPECT_NEAR(v.real(), c.rhs, 1e-12);
  }
}

TEST(MediatedSdp, EmbeddedObjectiveIsHoppingEnergy) {
  const auto inst = hubbard_triangle(1.0, 2.0, 0.0);
  const auto g = random_covariance(inst.n(), 3, true);
  const auto sdp = build_mediated_sdp_complex(inst, vacuum_covariance(inst.n()), 0.0);
  ComplexMat x = ComplexMat::Identity(12, 12) + std::complex<double>(0, 1) * g.gamma().cast<std::complex<double>>();
  const double lin = (sdp.objective * x).trace().real();
  EXPECT_NEAR(lin, energy_quad(g, inst) - energy_quad(zero_covariance(inst.n()), inst), 1e-10);
}

TEST(Solve, ClassicalOnlyInstanceIsExact) {
  const auto inst = CifhInstance::create(4, {{0, 1, 1.0}, {2, 3, 0.5}}, {0.3, -0.2, 0.1, 0.0}, {},
                                         Convention::Traceless);
  auto o = fast();
  o.oracle = true;
  const auto s = solve(inst, o);
  ASSERT_TRUE(s.exact_ratio.has_value());
  EXPECT_NEAR(*s.exact_ratio, 1.0, 1e-8);
  expect_consistent(s, inst);
}

TEST(Solve, HoppingOnlyInstanceIsExact) {
  const auto inst = CifhInstance::create(4, {}, {0, 0, 0, 0}, {{0, 1, 0.7}, {1, 2, -0.4}, {2, 3, 1.0}},
                                         Convention::Traceless);
  auto o = fast();
  o.oracle = true;
  const auto s = solve(inst, o);
  EXPECT_NEAR(*s.exact_ratio, 1.0, 1e-8);
}

TEST(Solve, TracelessGuaranteeAndCurve) {
  const auto inst = hubbard_triangle(1.0, 2.0, 0.0);
  auto o = fast();
  o.oracle = true;
  const auto s = solve_traceless(inst, o);
  expect_consistent(s, inst);
  EXPECT_EQ(s.curve.size(), 9u);
  for (const auto& pt : s.curve) EXPECT_LE(pt.energy_total, s.energy_total + 1e-9);
  EXPECT_GE(s.ratio_bound, 1.0 / 3 - 1e-6);
  EXPECT_GE(*s.exact_ratio, s.ratio_bound - 1e-9);
  EXPECT_EQ(s.derivation.sandwich_holds, std::optional<bool>(true));
  EXPECT_LE(s.max_sdp_residual, 1e-7);
  EXPECT_FALSE(guarantee_violated(s));
  EXPECT_LE(purity(s.gamma).max_deviation, 1e-8);
}

TEST(Solve, IsDeterministic) {
  const auto inst = hubbard_triangle(1.0, 2.0, 0.0);
  const auto a = solve(inst, fast());
  const auto b = solve(inst, fast());
  EXPECT_EQ(a.gamma.gamma(), b.gamma.gamma());
  EXPECT_EQ(a.candidate, b.candidate);
}

TEST(Solve, PsdModes) {
  RandomSpec rs;
  rs.n = 6;
  rs.convention = Convention::Psd;
  rs.seed = 4;
  const auto inst = random_instance(rs);
  auto o = fast();
  o.oracle = true;
  EXPECT_EQ(resolve_psd_mode(inst, o), PsdClassicalMode::Exact);
  const auto exact = solve_psd(inst, o);
  EXPECT_GE(exact.ratio_bound, 2.0 / 3 - 1e-6);
  EXPECT_GE(*exact.exact_ratio, exact.ratio_bound - 1e-9);

  o.psd_mode = PsdClassicalMode::GoemansWilliamson;
  o.seed = 17;
  const auto gw = solve_psd(inst, o);
  EXPECT_FALSE(gw.derivation.class_exact);
  EXPECT_GE(*gw.exact_ratio, gw.ratio_bound - 1e-9);
  EXPECT_FALSE(guarantee_violated(gw));
}

TEST(Solve, FixedParticlesHitTheTarget) {
  RandomSpec rs;
  rs.n = 6;
  rs.bipartite = true;
  rs.zero_potentials = true;
  rs.interaction_density = 0.8;
  rs.seed = 21;
  const auto inst = random_instance(rs);
  auto o = fast();
  o.oracle = true;
  for (int q : {0, 1, 3}) {
    const auto s = solve_fixed_particles(inst, q, o);
    ASSERT_TRUE(s.particle_expectation.has_value());
    EXPECT_NEAR(*s.particle_expectation, q, 1e-6);
    EXPECT_NEAR(occupation(s.gamma), q, 1e-6);
    EXPECT_NEAR(s.derivation.guarantee, fixed_particle_guarantee(6, q), 1e-15);
    EXPECT_GE(*s.exact_ratio, s.derivation.guarantee - 1e-6);
  }
  EXPECT_THROW(solve_fixed_particles(hubbard_triangle(1, 2, 0.5), 3, o), Error);
}

TEST(Solve, DispatchesOnParticleTarget) {
  const auto base = hubbard_triangle(1.0, 2.0, 0.0);
  const auto inst = CifhInstance::create(base.n(), base.interaction_edges(), base.potentials(),
                                         base.hopping_edges(), Convention::Traceless, 3.0);
  const auto s = solve(inst, fast());
  ASSERT_TRUE(s.particle_expectation.has_value());
  EXPECT_NEAR(*s.particle_expectation, 3.0, 1e-6);
}

TEST(Fmc, SingleEdgeAndLine) {
  auto o = fast();
  o.oracle = true;
  const auto edge = fmc_from_graph(2, {{0, 1, 1.0}});
  const auto s = solve_fmc(edge, o);
  EXPECT_GE(*s.exact_ratio, 0.5 - 1e-6);
  EXPECT_NEAR(s.derivation.guarantee, 0.5, 1e-15);

  const auto line = fmc_from_graph(4, named_graph("line4", nullptr));
  const auto r = solve_fmc(line, o);
  EXPECT_GE(*r.exact_ratio, 0.5 - 1e-6);
  const auto refined = local_refine(r.gamma, line, 200);
  EXPECT_GE(energy_total(refined, line) / exact_spectrum(line).global_max, 0.98);
}

TEST(Certify, SandwichOnTracelessInstances) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RandomSpec rs;
    rs.n = 5;
    rs.seed = seed;
    const auto inst = random_instance(rs);
    auto s = solve(inst, fast());
    certify(inst, s, exact_spectrum(inst));
    const double a = s.derivation.a_upper, b = s.derivation.b_upper;
    const double lam = *s.derivation.oracle_lambda_max;
    EXPECT_LE((a + b) / 3, lam + 1e-9);
    EXPECT_LE(lam, a + b + 1e-9);
    EXPECT_EQ(s.derivation.sandwich_holds, std::optional<bool>(true));
  }
}

TEST(Certify, ViolationIsDetected) {
  CertifiedSolution s;
  s.ratio_bound = 0.2;
  s.derivation.guarantee = 1.0 / 3;
  EXPECT_TRUE(guarantee_violated(s));
  s.ratio_bound = 0.4;
  s.exact_ratio = 0.35;
  EXPECT_TRUE(guarantee_violated(s));
  s.exact_ratio = 0.5;
  EXPECT_FALSE(guarantee_violated(s));
}
