#include "cifh/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/QR>

namespace cifh {

CovarianceMatrix::CovarianceMatrix(const Matrix& gamma, Trusted) : gamma_(0.5 * (gamma - gamma.transpose())) {}

CovarianceMatrix::CovarianceMatrix(const Matrix& gamma) : CovarianceMatrix(gamma, Trusted{}) {
  if (gamma.rows() != gamma.cols() || gamma.rows() % 2 != 0)
    throw Error("covariance matrix must be square with even dimension");
  if (!gamma.allFinite()) throw Error("covariance matrix has non-finite entries");
  if (max_abs(gamma + gamma.transpose()) > std::max(1e-9 * max_abs(gamma), 1e-12))
    throw Error("covariance matrix is not antisymmetric");
  if (spectral_norm(gamma_) > 1 + kFeasibilityTol) throw Error("covariance matrix has block values outside [-1, 1]");
}

CovarianceMatrix CovarianceMatrix::trusted(const Matrix& gamma) { return CovarianceMatrix(gamma, Trusted{}); }

PurityCertificate purity(const CovarianceMatrix& g) {
  const Matrix& m = g.gamma();
  const double dev = max_abs(m * m.transpose() - Matrix::Identity(m.rows(), m.cols()));
  return {dev <= 1e-8, dev};
}

CovarianceMatrix covariance_from_bits(const BitAssignment& x) {
  const int n = static_cast<int>(x.size());
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    const double v = x[j] ? -1.0 : 1.0;
    m(2 * j, 2 * j + 1) = v;
    m(2 * j + 1, 2 * j) = -v;
  }
  return CovarianceMatrix::trusted(m);
}

CovarianceMatrix vacuum_covariance(int n) { return covariance_from_bits(BitAssignment(n, 0)); }

CovarianceMatrix zero_covariance(int n) { return CovarianceMatrix::trusted(Matrix::Zero(2 * n, 2 * n)); }

double wick_quartic(const Matrix& g, int i, int j, int k, int l) {
  if (!(i < j && j < k && k < l)) throw Error("wick_quartic: indices must satisfy i < j < k < l");
  if (i < 0 || l >= g.rows()) throw Error("wick_quartic: index out of range");
  return -g(i, j) * g(k, l) + g(i, k) * g(j, l) - g(i, l) * g(j, k);
}

double pair_occupation(const Matrix& g, int j, int k) {
  if (j > k) std::swap(j, k);
  const int a = 2 * j, b = a + 1, c = 2 * k, d = c + 1;
  const double pp = g(a, b) * g(c, d) - g(a, c) * g(b, d) + g(a, d) * g(b, c);
  return (1 - g(a, b) - g(c, d) + pp) / 4;
}

namespace {

void check_dim(const Matrix& g, const CifhInstance& inst) {
  if (g.rows() != 2 * inst.n() || g.cols() != 2 * inst.n())
    throw Error("covariance dimension " + std::to_string(g.rows()) + " does not match 2n = " +
                std::to_string(2 * inst.n()));
}

double edge_constant(Convention c) {
  switch (c) {
    case Convention::Traceless: return 0.25;
    case Convention::Psd: return 1.0;
    case Convention::Fmc: return 0.0;
  }
  return 0.0;
}

double potential_offset(Convention c) { return c == Convention::Traceless ? 0.5 : 0.0; }

}  // namespace

double energy_class(const Matrix& g, const CifhInstance& inst) {
  check_dim(g, inst);
  const double ce = edge_constant(inst.convention());
  const double cm = potential_offset(inst.convention());
  double e = 0;
  for (const Edge& ed : inst.interaction_edges()) e += ed.weight * (ce - pair_occupation(g, ed.j, ed.k));
  const auto& mu = inst.potentials();
  for (int j = 0; j < inst.n(); ++j) {
    if (mu[j] != 0) e += mu[j] * ((1 - g(2 * j, 2 * j + 1)) / 2 - cm);
  }
  return e;
}

double energy_quad(const Matrix& g, const CifhInstance& inst) {
  check_dim(g, inst);
  const double shift = inst.convention() == Convention::Psd ? 1.0 : 0.0;
  double e = 0;
  for (const Edge& ed : inst.hopping_edges()) {
    const double hop = 0.5 * (g(2 * ed.j, 2 * ed.k + 1) - g(2 * ed.j + 1, 2 * ed.k));
    e += ed.weight * (shift + hop);
  }
  return e;
}

double energy_total(const Matrix& g, const CifhInstance& inst) { return energy_class(g, inst) + energy_quad(g, inst); }

double classical_value(const BitAssignment& x, const CifhInstance& inst) {
  if (static_cast<int>(x.size()) != inst.n()) throw Error("assignment length does not match n");
  const double ce = edge_constant(inst.convention());
  const double cm = potential_offset(inst.convention());
  double e = 0;
  for (const Edge& ed : inst.interaction_edges()) e += ed.weight * (ce - (x[ed.j] && x[ed.k] ? 1.0 : 0.0));
  const auto& mu = inst.potentials();
  for (int j = 0; j < inst.n(); ++j) e += mu[j] * ((x[j] ? 1.0 : 0.0) - cm);
  return e;
}

CovarianceMatrix blend(const std::vector<std::pair<double, CovarianceMatrix>>& components) {
  if (components.empty()) throw Error("blend: no components");
  const Eigen::Index dim = components.front().second.gamma().rows();
  double total = 0;
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& [p, g] : components) {
    if (!(p >= 0)) throw Error("blend: negative weight");
    if (g.gamma().rows() != dim) throw Error("blend: dimension mismatch");
    total += p;
    m += p * g.gamma();
  }
  if (std::abs(total - 1) > 1e-12) throw Error("blend: weights do not sum to 1");
  return CovarianceMatrix(m);
}

CovarianceMatrix mediator(const CovarianceMatrix& gq) {
  const int n = gq.n();
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    m(2 * j, 2 * j + 1) = -gq(2 * j, 2 * j + 1);
    m(2 * j + 1, 2 * j) = gq(2 * j, 2 * j + 1);
  }
  return CovarianceMatrix::trusted(m);
}

bool slater_check(const CovarianceMatrix& cg, double tol) {
  const Matrix& g = cg.gamma();
  const int n = cg.n();
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      if (std::abs(g(2 * j, 2 * k + 1) + g(2 * j + 1, 2 * k)) > tol) return false;
      if (std::abs(g(2 * j, 2 * k) - g(2 * j + 1, 2 * k + 1)) > tol) return false;
    }
  }
  return true;
}

namespace {

// R_j^T J R_j for block j of a normal form.
Matrix block_generator(const Matrix& r, int j) {
  const auto u = r.row(2 * j).transpose();
  const auto v = r.row(2 * j + 1).transpose();
  return u * v.transpose() - v * u.transpose();
}

}  // namespace

CovarianceMatrix purify(const CovarianceMatrix& cg, const CifhInstance& inst) {
  const int n = cg.n();
  check_dim(cg.gamma(), inst);
  if (n == 0) return cg;
  const AntisymBlockForm form = block_diagonalize_antisym(cg.gamma());
  Vector lambda = form.block_values;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return 1 - std::abs(lambda(a)) > 1 - std::abs(lambda(b));
  });

  Matrix g = assemble_antisym(form.rotation, lambda);
  for (int j : order) {
    const double l = lambda(j);
    if (std::abs(l) == 1.0) continue;
    const Matrix gen = block_generator(form.rotation, j);
    const Matrix plus = g + (1.0 - l) * gen;
    const Matrix minus = g + (-1.0 - l) * gen;
    const double ep = energy_total(plus, inst);
    const double em = energy_total(minus, inst);
    if (ep >= em) {
      g = plus;
      lambda(j) = 1.0;
    } else {
      g = minus;
      lambda(j) = -1.0;
    }
  }
  for (int j = 0; j < n; ++j) lambda(j) = lambda(j) < 0 ? -1.0 : 1.0;
  return CovarianceMatrix::trusted(assemble_antisym(form.rotation, lambda));
}

namespace {

void rotate_plane(Matrix& g, int a, int b, double c, double s) {
  // g <- G g G^T with G the Givens rotation acting on coordinates (a, b)
  const Vector ra = g.row(a), rb = g.row(b);
  g.row(a) = c * ra - s * rb;
  g.row(b) = s * ra + c * rb;
  const Vector ca = g.col(a), cb = g.col(b);
  g.col(a) = c * ca - s * cb;
  g.col(b) = s * ca + c * cb;
}

void reflect(Matrix& g, int a) {
  g.row(a) *= -1;
  g.col(a) *= -1;
}

}  // namespace

CovarianceMatrix local_refine(const CovarianceMatrix& g0, const CifhInstance& inst, int budget) {
  check_dim(g0.gamma(), inst);
  if (budget <= 0) return g0;
  CovarianceMatrix start = purity(g0).is_pure ? g0 : purify(g0, inst);
  Matrix g = start.gamma();
  const int dim = static_cast<int>(g.rows());
  double best = energy_total(g, inst);
  double step = 0.5;
  constexpr double kImprove = 1e-13;

  for (int sweep = 0; sweep < budget && step > 1e-9; ++sweep) {
    bool improved = false;
    for (int a = 0; a < dim; ++a) {
      reflect(g, a);
      const double e = energy_total(g, inst);
      if (e > best + kImprove) {
        best = e;
        improved = true;
      } else {
        reflect(g, a);
      }
    }
    const double c = std::cos(step), s = std::sin(step);
    for (int a = 0; a < dim; ++a) {
      for (int b = a + 1; b < dim; ++b) {
        for (double sign : {1.0, -1.0}) {
          rotate_plane(g, a, b, c, sign * s);
          const double e = energy_total(g, inst);
          if (e > best + kImprove) {
            best = e;
            improved = true;
            break;
          }
          rotate_plane(g, a, b, c, -sign * s);
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  g = 0.5 * (g - g.transpose());
  return CovarianceMatrix::trusted(g);
}

CovarianceMatrix random_covariance(int n, std::uint64_t seed, bool pure) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Matrix a(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int i = 0; i < 2 * n; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1;
  }
  Vector lambda(n);
  for (int j = 0; j < n; ++j) lambda(j) = pure ? (rng() & 1U ? 1.0 : -1.0) : uni(rng);
  return CovarianceMatrix::trusted(assemble_antisym(q.transpose(), lambda));
}

}  // namespace cifh
