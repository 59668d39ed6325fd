#include <gtest/gtest.h>

#include <random>

#include "cifh/linalg.hpp"
#include "cifh/model.hpp"

using namespace cifh;

namespace {

Matrix random_antisym(int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  return a - a.transpose();
}

}  // namespace

TEST(EigSym, ReconstructsAndSorts) {
  Matrix m = random_antisym(6, 1);
  m = m * m.transpose();
  const SymEig e = eig_sym(m);
  EXPECT_LT(max_abs(e.vectors * e.values.asDiagonal() * e.vectors.transpose() - m), 1e-10);
  for (int i = 1; i < 6; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
  Matrix bad = m;
  bad(0, 1) += 1.0;
  EXPECT_THROW(eig_sym(bad), Error);
}

TEST(AntisymForm, ReconstructsWithSpecialOrthogonalRotation) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const int d = 2 + 2 * (seed % 5);
    const Matrix a = random_antisym(d, seed);
    const AntisymBlockForm f = block_diagonalize_antisym(a);
    EXPECT_LT(max_abs(f.rotation * f.rotation.transpose() - Matrix::Identity(d, d)), 1e-10);
    EXPECT_NEAR(f.rotation.determinant(), 1.0, 1e-9);
    EXPECT_LT(max_abs(assemble_antisym(f.rotation, f.block_values) - a), 1e-9);
    for (int i = 1; i + 1 < f.block_values.size(); ++i) EXPECT_GE(f.block_values(i - 1), f.block_values(i));
    for (int i = 0; i + 1 < f.block_values.size(); ++i) EXPECT_GE(f.block_values(i), 0.0);
  }
}

TEST(AntisymForm, SingleBlock) {
  Matrix a(2, 2);
  a << 0, 0.7, -0.7, 0;
  const AntisymBlockForm f = block_diagonalize_antisym(a);
  EXPECT_NEAR(std::abs(f.block_values(0)), 0.7, 1e-14);
  EXPECT_LT(max_abs(assemble_antisym(f.rotation, f.block_values) - a), 1e-14);
}

TEST(AntisymForm, HandlesZeroBlocks) {
  Matrix a = Matrix::Zero(4, 4);
  a(0, 1) = 0.5;
  a(1, 0) = -0.5;
  const AntisymBlockForm f = block_diagonalize_antisym(a);
  EXPECT_NEAR(f.block_values(0), 0.5, 1e-14);
  EXPECT_NEAR(f.block_values(1), 0.0, 1e-14);
  EXPECT_LT(max_abs(assemble_antisym(f.rotation, f.block_values) - a), 1e-14);
}

TEST(ProjectPsd, ClipsNegativeEigenvalues) {
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  const Matrix p = project_psd(m);
  EXPECT_LT(max_abs(p - 1.5 * Matrix::Ones(2, 2)), 1e-12);
  EXPECT_GE(eig_sym(p).values.minCoeff(), -1e-12);
}

TEST(Norms, SpectralAndMaxAbs) {
  Matrix m(2, 2);
  m << 3, 0, 0, -4;
  EXPECT_NEAR(spectral_norm(m), 4.0, 1e-12);
  EXPECT_EQ(max_abs(m), 4.0);
  EXPECT_EQ(max_abs(Matrix()), 0.0);
}
