#include <gtest/gtest.h>

#include "cifh/gaussian.hpp"
#include "cifh/oracle.hpp"

using namespace cifh;

namespace {

CifhInstance random_of(Convention c, int n, std::uint64_t seed) {
  RandomSpec rs;
  rs.n = n;
  rs.convention = c;
  rs.seed = seed;
  return random_instance(rs);
}

}  // namespace

TEST(Covariance, BitsGiveModeValues) {
  const auto g = covariance_from_bits({1, 0, 1});
  EXPECT_EQ(g.mode_value(0), -1.0);
  EXPECT_EQ(g.mode_value(1), 1.0);
  EXPECT_TRUE(purity(g).is_pure);
  EXPECT_EQ(vacuum_covariance(3).gamma(), covariance_from_bits({0, 0, 0}).gamma());
  EXPECT_FALSE(purity(zero_covariance(2)).is_pure);
}

TEST(Covariance, RejectsOutsideUnitBall) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.5;
  m(1, 0) = -1.5;
  EXPECT_THROW(CovarianceMatrix{m}, Error);
  Matrix odd = Matrix::Zero(3, 3);
  EXPECT_THROW(CovarianceMatrix{odd}, Error);
}

TEST(Covariance, RandomPureAndMixed) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto p = random_covariance(4, s, true);
    EXPECT_TRUE(purity(p).is_pure);
    const auto m = random_covariance(4, s, false);
    EXPECT_LE(spectral_norm(m.gamma()), 1 + 1e-9);
    EXPECT_LT(max_abs(m.gamma() + m.gamma().transpose()), 1e-15);
  }
}

// Energies by Wick's theorem against tr(rho H) from the Jordan-Wigner matrices.
TEST(Wick, EnergiesMatchTheOracle) {
  for (Convention c : {Convention::Traceless, Convention::Psd, Convention::Fmc}) {
    for (std::uint64_t s = 0; s < 12; ++s) {
      const int n = 2 + static_cast<int>(s % 4);
      const auto inst = random_of(c, n, 100 + s);
      const auto h = jw_hamiltonian(inst);
      const auto g = random_covariance(n, 7 * s + 1, s % 2 == 0);
      const double ref = expectation(gaussian_density_matrix(g), h);
      EXPECT_NEAR(energy_total(g, inst), ref, 1e-10) << to_string(c) << " seed " << s;
      EXPECT_NEAR(energy_class(g, inst) + energy_quad(g, inst), energy_total(g, inst), 1e-12);
    }
  }
}

TEST(Wick, QuarticAndPairOccupation) {
  const auto g = random_covariance(3, 9, true);
  const auto maj = majorana_matrices(3);
  const auto rho = gaussian_density_matrix(g);
  const std::complex<double> ref = (rho * maj[0] * maj[2] * maj[3] * maj[5]).trace();
  EXPECT_NEAR(wick_quartic(g.gamma(), 0, 2, 3, 5), ref.real(), 1e-12);
  const auto x = covariance_from_bits({1, 1, 0});
  EXPECT_NEAR(pair_occupation(x.gamma(), 0, 1), 1.0, 1e-15);
  EXPECT_NEAR(pair_occupation(x.gamma(), 0, 2), 0.0, 1e-15);
}

TEST(Wick, ClassicalValueIsBasisEnergy) {
  const auto inst = random_of(Convention::Traceless, 5, 3);
  const auto h = jw_hamiltonian(inst);
  for (int mask = 0; mask < 32; ++mask) {
    BitAssignment x(5);
    for (int j = 0; j < 5; ++j) x[j] = (mask >> j) & 1;
    EXPECT_NEAR(classical_value(x, inst), h.coeff(mask, mask), 1e-12);
    EXPECT_NEAR(energy_class(covariance_from_bits(x), inst), classical_value(x, inst), 1e-12);
  }
}

TEST(Blend, ValidatesWeights) {
  const auto a = covariance_from_bits({0, 1});
  const auto b = covariance_from_bits({1, 0});
  const auto mid = blend({{0.5, a}, {0.5, b}});
  EXPECT_NEAR(mid.mode_value(0), 0.0, 1e-15);
  EXPECT_THROW(blend({{0.6, a}, {0.6, b}}), Error);
  EXPECT_THROW(blend({{-0.1, a}, {1.1, b}}), Error);
  EXPECT_THROW(blend({{0.5, a}, {0.5, vacuum_covariance(3)}}), Error);
}

TEST(Mediator, KeepsNegatedModeBlocks) {
  const auto g = random_covariance(4, 5, true);
  const auto m = mediator(g);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const double want = (a / 2 == b / 2) ? -g(a, b) : 0.0;
      EXPECT_EQ(m(a, b), want);
    }
  const auto half = blend({{0.5, g}, {0.5, m}});
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(half.mode_value(j), 0.0, 1e-15);
}

TEST(Purify, PureAndNoWorse) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const int n = 2 + static_cast<int>(s % 5);
    const auto inst = random_of(s % 2 ? Convention::Traceless : Convention::Psd, n, s);
    const auto g = random_covariance(n, s + 1000, false);
    const auto p = purify(g, inst);
    EXPECT_LE(purity(p).max_deviation, 1e-8);
    EXPECT_GE(energy_total(p, inst), energy_total(g, inst) - 1e-8);
  }
}

TEST(Purify, FixedPointsAreBlockOptimal) {
  const auto inst = random_of(Convention::Traceless, 4, 1);
  const auto once = purify(random_covariance(4, 2, true), inst);
  EXPECT_NEAR(energy_total(purify(once, inst), inst), energy_total(once, inst), 1e-9);
}

TEST(LocalRefine, ImprovesAndStaysPure) {
  const auto inst = fmc_from_graph(4, named_graph("line4", nullptr));
  const auto g = local_refine(vacuum_covariance(4), inst, 50);
  EXPECT_TRUE(purity(g).is_pure);
  EXPECT_GE(energy_total(g, inst), energy_total(vacuum_covariance(4), inst));
}
