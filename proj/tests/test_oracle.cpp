#include <gtest/gtest.h>

#include "cifh/oracle.hpp"

using namespace cifh;

namespace {

using CMat = Eigen::MatrixXcd;

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Pauli operator P on qubit q of n, built by Kronecker products with qubit 0
// as the least significant bit.
CMat pauli_at(const CMat& p, int q, int n) {
  CMat out = CMat::Identity(1, 1);
  for (int k = n - 1; k >= 0; --k) {
    const CMat f = (k == q) ? p : CMat::Identity(2, 2);
    out = kron(out, f);
  }
  return out;
}

CMat heisenberg_line4_spin() {
  CMat x(2, 2), y(2, 2), z(2, 2);
  const std::complex<double> i(0, 1);
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  z << 1, 0, 0, -1;
  CMat h = CMat::Zero(16, 16);
  for (int q = 0; q < 3; ++q)
    for (const CMat* p : {&x, &y, &z}) h -= 0.25 * pauli_at(*p, q, 4) * pauli_at(*p, q + 1, 4);
  return h;
}

}  // namespace

TEST(JordanWigner, AnticommutationRelations) {
  const int n = 3;
  std::vector<Eigen::MatrixXd> a;
  for (int j = 0; j < n; ++j) a.emplace_back(Eigen::MatrixXd(annihilation_operator(n, j)));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const Eigen::MatrixXd ac = a[j] * a[k].transpose() + a[k].transpose() * a[j];
      const Eigen::MatrixXd want = (j == k ? 1.0 : 0.0) * Eigen::MatrixXd::Identity(8, 8);
      EXPECT_LT((ac - want).cwiseAbs().maxCoeff(), 1e-15);
      EXPECT_LT((a[j] * a[k] + a[k] * a[j]).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(JordanWigner, MajoranasSquareToOneAndAnticommute) {
  const auto c = majorana_matrices(2);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const CMat ac = c[a] * c[b] + c[b] * c[a];
      const CMat want = (a == b ? 2.0 : 0.0) * CMat::Identity(4, 4);
      EXPECT_LT((ac - want).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(JordanWigner, HeisenbergLineMatchesSpinHamiltonian) {
  const Eigen::MatrixXd h(jw_hamiltonian(heisenberg_line4()));
  const CMat ref = heisenberg_line4_spin();
  EXPECT_LT((h.cast<std::complex<double>>() - ref).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(JordanWigner, SingleEdgeSpectra) {
  const auto fmc = exact_spectrum(fmc_from_graph(2, {{0, 1, 1.0}}));
  const std::vector<double> fmc_want = {1.0, 0.0, 0.0, 0.0};
  ASSERT_EQ(fmc.eigenvalues.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(fmc.eigenvalues[i], fmc_want[i], 1e-14);

  // -1/4 (XX + YY + ZZ): singlet at 3/4, triplet at -1/4.
  const auto heis = exact_spectrum(
      CifhInstance::create(2, {{0, 1, 1.0}}, {0.5, 0.5}, {{0, 1, 0.5}}, Convention::Traceless));
  const std::vector<double> heis_want = {0.75, -0.25, -0.25, -0.25};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(heis.eigenvalues[i], heis_want[i], 1e-14);
}

TEST(JordanWigner, SingleModePotential) {
  const auto inst = CifhInstance::create(1, {}, {0.8}, {}, Convention::Traceless);
  const Eigen::MatrixXd h(jw_hamiltonian(inst));
  EXPECT_NEAR(h(0, 0), -0.4, 1e-15);
  EXPECT_NEAR(h(1, 1), 0.4, 1e-15);
}

TEST(Spectrum, ConservesParticleNumber) {
  RandomSpec rs;
  rs.n = 6;
  rs.seed = 8;
  const auto inst = random_instance(rs);
  const Eigen::MatrixXd h(jw_hamiltonian(inst));
  const Eigen::MatrixXd nop(number_operator(6));
  EXPECT_LT((h * nop - nop * h).cwiseAbs().maxCoeff(), 1e-13);
  const auto spec = exact_spectrum(inst);
  double mx = -1e300, mn = 1e300;
  for (int q = 0; q <= 6; ++q) {
    mx = std::max(mx, spec.per_sector_max[q]);
    mn = std::min(mn, spec.per_sector_min[q]);
  }
  EXPECT_DOUBLE_EQ(mx, spec.global_max);
  EXPECT_DOUBLE_EQ(mn, spec.global_min);
  EXPECT_NEAR(spec.eigenvalues.front(), spec.global_max, 1e-12);
}

TEST(Spectrum, TopVectorAchievesTheMaximum) {
  const auto inst = heisenberg_line4();
  const auto spec = exact_spectrum(inst, true);
  EXPECT_NEAR(expectation(spec.top_vector, jw_hamiltonian(inst)), spec.global_max, 1e-10);
}

TEST(Spectrum, ConcaveEnvelope) {
  SectorSpectrum s;
  s.n = 2;
  s.per_sector_max = {0.0, 0.0, 2.0};
  EXPECT_NEAR(s.avg_q_max(1.0), 1.0, 1e-15);
  EXPECT_NEAR(s.avg_q_max(2.0), 2.0, 1e-15);
  s.per_sector_max = {0.0, 3.0, 0.0};
  EXPECT_NEAR(s.avg_q_max(1.0), 3.0, 1e-15);
}

TEST(Spectrum, BipartiteZeroPotentialHasFlatSectorMaxima) {
  RandomSpec rs;
  rs.n = 6;
  rs.bipartite = true;
  rs.zero_potentials = true;
  rs.hopping_density = 0;
  rs.interaction_density = 1.0;
  rs.seed = 3;
  const auto spec = exact_spectrum(random_instance(rs));
  for (int q = 1; q < 6; ++q) EXPECT_LE(spec.per_sector_max[q], spec.per_sector_max[3] + 1e-12);
}

TEST(Density, CovarianceRoundTrip) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto g = random_covariance(3, s, true);
    const CMat rho = gaussian_density_matrix(g);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<CMat> es(rho);
    const ComplexVector v = es.eigenvectors().col(7);
    EXPECT_NEAR(es.eigenvalues()(7), 1.0, 1e-10);
    EXPECT_LT(max_abs(covariance_of_state(3, v).gamma() - g.gamma()), 1e-10);
  }
}

TEST(GapBound, HeisenbergLine) {
  const auto r = heisenberg_gap_bound();
  EXPECT_NEAR(r.lambda_max, (3 + 2 * std::sqrt(3.0)) / 4, 1e-9);
  EXPECT_NEAR(r.gap, (1 + std::sqrt(3.0) - std::sqrt(2.0)) / 2, 1e-9);
  EXPECT_NEAR(r.s, (5 + 2 * std::sqrt(3.0)) / 9, 1e-8);
  EXPECT_NEAR(r.alpha_star, 0.998818, 1e-5);
  EXPECT_GE(r.ratio_upper, 0.9989);
  EXPECT_LT(r.ratio_upper, 0.99904);
  EXPECT_NEAR(gap_overlap_g(1.0, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(gap_overlap_g(0.5, 0.0), 7.0, 1e-15);
}

TEST(ProductStates, GridStaysBelowTheGaussianCeiling) {
  const auto inst = fmc_from_graph(4, named_graph("line4", nullptr));
  const double lam = exact_spectrum(inst).global_max;
  EXPECT_NEAR(lam, 0.75 + (3 + 2 * std::sqrt(3.0)) / 4, 1e-10);
  const double r = product_state_grid_max(inst, 13, 12) / lam;
  EXPECT_LE(r, 0.634 + 1e-3);
  EXPECT_NEAR(r, 1.5 / lam, 1e-9);
}

TEST(Oracle, RefusesTooManyModes) {
  RandomSpec rs;
  rs.n = kOracleMaxModes + 1;
  rs.interaction_density = 0.1;
  rs.hopping_density = 0.1;
  EXPECT_THROW(exact_spectrum(random_instance(rs)), Error);
}
