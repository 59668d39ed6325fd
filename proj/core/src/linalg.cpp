#include "cifh/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cifh/model.hpp"

namespace cifh {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

namespace {

double tolerance(const Matrix& m, double rel) { return std::max(rel * max_abs(m), 1e-14); }

}  // namespace

SymEig eig_sym(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error("eig_sym: matrix is not square");
  if (max_abs(m - m.transpose()) > tolerance(m, 1e-12)) throw Error("eig_sym: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw Error("eig_sym: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix project_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Vector clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
}

Matrix assemble_antisym(const Matrix& rotation, const Vector& block_values) {
  const Eigen::Index dim = rotation.rows();
  Matrix d = Matrix::Zero(dim, dim);
  for (Eigen::Index j = 0; j < block_values.size(); ++j) {
    d(2 * j, 2 * j + 1) = block_values(j);
    d(2 * j + 1, 2 * j) = -block_values(j);
  }
  return rotation.transpose() * d * rotation;
}

AntisymBlockForm block_diagonalize_antisym(const Matrix& a) {
  const Eigen::Index dim = a.rows();
  if (a.cols() != dim || dim % 2 != 0) throw Error("block_diagonalize_antisym: expected an even square matrix");
  if (max_abs(a + a.transpose()) > tolerance(a, 1e-12))
    throw Error("block_diagonalize_antisym: matrix is not antisymmetric");
  const Eigen::Index n = dim / 2;
  if (n == 0) return {Matrix(0, 0), Vector(0)};

  const Matrix sym = 0.5 * (a - a.transpose());
  Eigen::RealSchur<Matrix> schur(sym);
  const Matrix& t = schur.matrixT();
  const Matrix& u = schur.matrixU();

  struct Block {
    Eigen::Index first, second;  // columns of U
    double value;
  };
  std::vector<Block> blocks;
  std::vector<Eigen::Index> singles;
  for (Eigen::Index i = 0; i < dim;) {
    if (i + 1 < dim && t(i + 1, i) != 0.0) {
      double lambda = 0.5 * (t(i, i + 1) - t(i + 1, i));
      if (lambda >= 0) {
        blocks.push_back({i, i + 1, lambda});
      } else {
        blocks.push_back({i + 1, i, -lambda});
      }
      i += 2;
    } else {
      singles.push_back(i);
      i += 1;
    }
  }
  for (std::size_t s = 0; s + 1 < singles.size(); s += 2) blocks.push_back({singles[s], singles[s + 1], 0.0});

  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& x, const Block& y) { return x.value > y.value; });

  AntisymBlockForm out{Matrix(dim, dim), Vector(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    out.rotation.row(2 * j) = u.col(blocks[j].first).transpose();
    out.rotation.row(2 * j + 1) = u.col(blocks[j].second).transpose();
    out.block_values(j) = blocks[j].value;
  }
  if (out.rotation.determinant() < 0) {
    out.rotation.row(2 * n - 2).swap(out.rotation.row(2 * n - 1));
    out.block_values(n - 1) = -out.block_values(n - 1);
  }
  return out;
}

}  // namespace cifh
