#include <gtest/gtest.h>

#include "cifh/sdp.hpp"

using namespace cifh;

namespace {

SdpProblem unit_diagonal(const Matrix& c) {
  SdpProblem p;
  p.dim = static_cast<int>(c.rows());
  p.objective = c;
  for (int i = 0; i < p.dim; ++i) p.constraints.push_back({{{i, i, 1.0}}, 1.0});
  return p;
}

}  // namespace

TEST(Sdp, DiagonalObjectiveIsZeroOnCorrelationMatrices) {
  const auto s = solve_sdp(unit_diagonal(Matrix::Zero(3, 3)));
  EXPECT_EQ(s.status, SdpStatus::Converged);
  EXPECT_NEAR(s.objective_value, 0.0, 1e-6);
}

TEST(Sdp, OffDiagonalObjectiveSaturates) {
  Matrix c = Matrix::Zero(2, 2);
  c(0, 1) = c(1, 0) = 1.0;
  const auto s = solve_sdp(unit_diagonal(c));
  EXPECT_EQ(s.status, SdpStatus::Converged);
  EXPECT_NEAR(s.objective_value, 2.0, 1e-6);
  EXPECT_LE(s.primal_residual, 1e-7);
}

// Max cut of a triangle: the relaxation gives 9/4 with C = L/4.
TEST(Sdp, TriangleMaxCutRelaxation) {
  Matrix l = 2 * Matrix::Identity(3, 3) - (Matrix::Ones(3, 3) - Matrix::Identity(3, 3));
  const auto s = solve_sdp(unit_diagonal(l / 4));
  EXPECT_NEAR(s.objective_value, 2.25, 1e-6);
  EXPECT_GE(eig_sym(s.x_matrix).values.minCoeff(), -1e-9);
}

TEST(Sdp, WarmStartIsDeterministicAndFaster) {
  Matrix l = 3 * Matrix::Identity(4, 4) - (Matrix::Ones(4, 4) - Matrix::Identity(4, 4));
  const auto p = unit_diagonal(l / 4);
  const auto a = solve_sdp(p);
  const auto b = solve_sdp(p);
  EXPECT_EQ(a.x_matrix, b.x_matrix);
  SdpOptions warm;
  warm.warm_z = a.x_matrix;
  warm.warm_u = a.dual_u;
  warm.rho = a.rho;
  EXPECT_LE(solve_sdp(p, warm).iterations, a.iterations);
}

TEST(Sdp, ConstraintValue) {
  SdpConstraint c{{{0, 1, 0.5}, {1, 0, 0.5}, {2, 2, 2.0}}, 0};
  Matrix x = Matrix::Identity(3, 3);
  x(0, 1) = x(1, 0) = 0.3;
  EXPECT_NEAR(constraint_value(c, x), 0.3 + 2.0, 1e-15);
}

TEST(Sdp, IterationCapIsReported) {
  Matrix l = 2 * Matrix::Identity(3, 3) - (Matrix::Ones(3, 3) - Matrix::Identity(3, 3));
  SdpOptions o;
  o.max_iter = 3;
  const auto s = solve_sdp(unit_diagonal(l), o);
  EXPECT_EQ(s.status, SdpStatus::IterLimit);
  EXPECT_EQ(s.iterations, 3);
}

TEST(HermitianEmbedding, RoundTripsAndPreservesObjective) {
  ComplexMat x(2, 2);
  x << 1.0, std::complex<double>(0, 0.6), std::complex<double>(0, -0.6), 1.0;
  const Matrix y = real_embedding(x);
  EXPECT_LT((extract_hermitian(y) - x).cwiseAbs().maxCoeff(), 1e-15);

  // maximize tr(C X) with C = [[0, i/2], [-i/2, 0]] under unit diagonal: optimum 1.
  ComplexMat c = ComplexMat::Zero(2, 2);
  c(0, 1) = std::complex<double>(0, 0.5);
  c(1, 0) = std::complex<double>(0, -0.5);
  std::vector<HermitianConstraint> cons = {{{{0, 0, 1.0}}, 1.0}, {{{1, 1, 1.0}}, 1.0}};
  const auto s = solve_sdp(hermitian_embed(c, cons));
  EXPECT_NEAR(s.objective_value, 1.0, 1e-6);
  const ComplexMat sol = extract_hermitian(s.x_matrix);
  EXPECT_NEAR(sol(0, 1).imag(), 1.0, 1e-5);
}
