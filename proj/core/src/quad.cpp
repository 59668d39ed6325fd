#include "cifh/quad.hpp"

#include <algorithm>

namespace cifh {

Matrix hopping_matrix(const CifhInstance& inst) {
  Matrix t = Matrix::Zero(inst.n(), inst.n());
  for (const Edge& e : inst.hopping_edges()) {
    t(e.j, e.k) = -e.weight;
    t(e.k, e.j) = -e.weight;
  }
  return t;
}

HoppingSpectrum hopping_spectrum(const CifhInstance& inst) {
  SymEig es = eig_sym(hopping_matrix(inst));
  return {std::move(es.values), std::move(es.vectors)};
}

CovarianceMatrix slater_covariance(const Matrix& p) {
  const Eigen::Index n = p.rows();
  const Matrix m = Matrix::Identity(n, n) - 2 * p;
  Matrix g = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      g(2 * j, 2 * k + 1) = m(j, k);
      g(2 * j + 1, 2 * k) = -m(j, k);
    }
  }
  return CovarianceMatrix::trusted(g);
}

QuadSolution solve_quad(const CifhInstance& inst) {
  HoppingSpectrum spec = hopping_spectrum(inst);
  const Eigen::Index n = inst.n();
  const double scale = std::max(1.0, spec.mode_energies.cwiseAbs().maxCoeff());
  const double cut = 1e-12 * scale;
  Matrix p = Matrix::Zero(n, n);
  double value = 0;
  for (Eigen::Index m = 0; m < n; ++m) {
    const double eps = spec.mode_energies(m);
    if (eps > cut) {
      const auto u = spec.mode_frame.col(m);
      p += u * u.transpose();
      value += eps;
    }
  }
  return {slater_covariance(p), value, std::move(spec)};
}

}  // namespace cifh
