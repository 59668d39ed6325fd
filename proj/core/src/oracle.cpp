#include "cifh/oracle.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <bit>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace cifh {

namespace {

void check_size(int n, int limit) {
  if (n < 1 || n > limit)
    throw Error("oracle supports 1 <= n <= " + std::to_string(limit) + ", got n = " + std::to_string(n));
}

int parity_below(std::uint32_t x, int j) { return std::popcount(x & ((1U << j) - 1U)) & 1; }

}  // namespace

SparseMatrix annihilation_operator(int n, int j) {
  check_size(n, kOracleMaxModes);
  const std::uint32_t dim = 1U << n;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(dim / 2);
  for (std::uint32_t x = 0; x < dim; ++x) {
    if (!(x >> j & 1U)) continue;
    trip.emplace_back(x ^ (1U << j), x, parity_below(x, j) ? -1.0 : 1.0);
  }
  SparseMatrix a(dim, dim);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

SparseMatrix number_operator(int n) {
  check_size(n, kOracleMaxModes);
  const std::uint32_t dim = 1U << n;
  SparseMatrix m(dim, dim);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::uint32_t x = 0; x < dim; ++x) trip.emplace_back(x, x, std::popcount(x));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrix jw_hamiltonian(const CifhInstance& inst) {
  const int n = inst.n();
  check_size(n, kOracleMaxModes);
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::vector<SparseMatrix> a, ad, num;
  for (int j = 0; j < n; ++j) {
    a.push_back(annihilation_operator(n, j));
    ad.push_back(SparseMatrix(a.back().transpose()));
    num.push_back(SparseMatrix(ad.back() * a.back()));
  }
  SparseMatrix id(dim, dim);
  id.setIdentity();

  double edge_c = 0, mu_c = 0, hop_c = 0;
  switch (inst.convention()) {
    case Convention::Traceless: edge_c = 0.25; mu_c = 0.5; break;
    case Convention::Psd: edge_c = 1.0; hop_c = 1.0; break;
    case Convention::Fmc: break;
  }

  SparseMatrix h(dim, dim);
  for (const Edge& e : inst.interaction_edges()) {
    SparseMatrix nn = num[e.j] * num[e.k];
    h += e.weight * (edge_c * id - nn);
  }
  for (int j = 0; j < n; ++j) {
    const double mu = inst.potentials()[j];
    if (mu != 0) h += mu * (num[j] - mu_c * id);
  }
  for (const Edge& e : inst.hopping_edges()) {
    SparseMatrix hop = ad[e.j] * a[e.k];
    SparseMatrix back = ad[e.k] * a[e.j];
    h += e.weight * (hop_c * id - hop - back);
  }
  h.prune(0.0);
  return h;
}

std::vector<ComplexMatrix> majorana_matrices(int n) {
  check_size(n, kDensityMaxModes);
  std::vector<ComplexMatrix> c;
  const std::complex<double> i(0, 1);
  for (int j = 0; j < n; ++j) {
    const ComplexMatrix a = Matrix(annihilation_operator(n, j)).cast<std::complex<double>>();
    const ComplexMatrix ad = a.adjoint();
    c.push_back(a + ad);
    c.push_back(i * (a - ad));
  }
  return c;
}

ComplexVector apply_majorana(int n, int a, const ComplexVector& v) {
  check_size(n, kOracleMaxModes);
  const int j = a / 2;
  const bool second = a % 2 == 1;
  const std::uint32_t dim = 1U << n;
  ComplexVector out = ComplexVector::Zero(dim);
  const std::complex<double> i(0, 1);
  for (std::uint32_t x = 0; x < dim; ++x) {
    const std::uint32_t y = x ^ (1U << j);
    double sign = parity_below(x, j) ? -1.0 : 1.0;
    std::complex<double> coef = sign;
    if (second) coef *= (x >> j & 1U) ? i : -i;
    out(y) += coef * v(x);
  }
  return out;
}

double SectorSpectrum::avg_q_max(double q) const {
  if (q < 0 || q > n) throw Error("particle target outside [0, n]");
  double best = -std::numeric_limits<double>::infinity();
  for (int lo = 0; lo <= n; ++lo) {
    for (int hi = lo; hi <= n; ++hi) {
      if (q < lo || q > hi) continue;
      double v;
      if (hi == lo) {
        v = per_sector_max[lo];
      } else {
        const double t = (q - lo) / (hi - lo);
        v = (1 - t) * per_sector_max[lo] + t * per_sector_max[hi];
      }
      best = std::max(best, v);
    }
  }
  return best;
}

SectorSpectrum exact_spectrum(const CifhInstance& inst, bool want_top_vector) {
  const int n = inst.n();
  check_size(n, kOracleMaxModes);
  const SparseMatrix h = jw_hamiltonian(inst);
  const std::uint32_t dim = 1U << n;

  SectorSpectrum out;
  out.n = n;
  out.per_sector_max.assign(n + 1, 0.0);
  out.per_sector_min.assign(n + 1, 0.0);
  out.global_max = -std::numeric_limits<double>::infinity();
  out.global_min = std::numeric_limits<double>::infinity();

  std::vector<std::vector<std::uint32_t>> sectors(n + 1);
  for (std::uint32_t x = 0; x < dim; ++x) sectors[std::popcount(x)].push_back(x);
  std::vector<int> position(dim);
  for (const auto& s : sectors)
    for (std::size_t i = 0; i < s.size(); ++i) position[s[i]] = static_cast<int>(i);

  for (int N = 0; N <= n; ++N) {
    const auto& basis = sectors[N];
    const Eigen::Index m = static_cast<Eigen::Index>(basis.size());
    Matrix block = Matrix::Zero(m, m);
    for (Eigen::Index c = 0; c < m; ++c) {
      for (SparseMatrix::InnerIterator it(h, basis[c]); it; ++it) {
        const auto row = static_cast<std::uint32_t>(it.row());
        if (std::popcount(row) != N) throw Error("hamiltonian does not conserve particle number");
        block(position[row], c) = it.value();
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(block, want_top_vector ? Eigen::ComputeEigenvectors
                                                                     : Eigen::EigenvaluesOnly);
    const Vector& ev = es.eigenvalues();
    out.per_sector_max[N] = ev(m - 1);
    out.per_sector_min[N] = ev(0);
    for (Eigen::Index i = 0; i < m; ++i) out.eigenvalues.push_back(ev(i));
    if (ev(m - 1) > out.global_max) {
      out.global_max = ev(m - 1);
      if (want_top_vector) {
        out.top_vector = ComplexVector::Zero(dim);
        for (Eigen::Index i = 0; i < m; ++i) out.top_vector(basis[i]) = es.eigenvectors()(i, m - 1);
      }
    }
    out.global_min = std::min(out.global_min, ev(0));
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<>());
  return out;
}

ComplexMatrix gaussian_density_matrix(const CovarianceMatrix& g) {
  const int n = g.n();
  check_size(n, kDensityMaxModes);
  const AntisymBlockForm form = block_diagonalize_antisym(g.gamma());
  const std::vector<ComplexMatrix> c = majorana_matrices(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  const std::complex<double> i(0, 1);
  auto rotated = [&](int a) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (int b = 0; b < 2 * n; ++b) {
      const double r = form.rotation(a, b);
      if (r != 0) m += r * c[b];
    }
    return m;
  };
  ComplexMatrix rho = ComplexMatrix::Identity(dim, dim);
  for (int j = 0; j < n; ++j) {
    const ComplexMatrix factor =
        ComplexMatrix::Identity(dim, dim) + i * form.block_values(j) * rotated(2 * j) * rotated(2 * j + 1);
    rho = rho * factor;
  }
  return rho / static_cast<double>(dim);
}

CovarianceMatrix covariance_of_state(int n, const ComplexVector& v) {
  check_size(n, kOracleMaxModes);
  if (v.size() != (Eigen::Index{1} << n)) throw Error("state vector has the wrong dimension");
  std::vector<ComplexVector> cv;
  for (int a = 0; a < 2 * n; ++a) cv.push_back(apply_majorana(n, a, v));
  Matrix g = Matrix::Zero(2 * n, 2 * n);
  const std::complex<double> i(0, 1);
  for (int a = 0; a < 2 * n; ++a) {
    for (int b = a + 1; b < 2 * n; ++b) {
      // <v| i c_a c_b |v> = i <c_a v | c_b v> since c_a is Hermitian
      const std::complex<double> val = i * cv[a].dot(cv[b]);
      g(a, b) = val.real();
      g(b, a) = -val.real();
    }
  }
  return CovarianceMatrix::trusted(g);
}

double expectation(const ComplexMatrix& rho, const SparseMatrix& h) {
  std::complex<double> acc = 0;
  for (Eigen::Index k = 0; k < h.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(h, k); it; ++it) acc += rho(it.col(), it.row()) * it.value();
  }
  return acc.real();
}

double expectation(const ComplexVector& v, const SparseMatrix& h) {
  const ComplexVector hv = h.cast<std::complex<double>>() * v;
  return v.dot(hv).real();
}

double gap_overlap_g(double s, double alpha) {
  const double a2 = alpha * alpha;
  const double first = a2 * std::sqrt(s) + (1 - a2);
  const double second = 2 * alpha * std::sqrt(std::max(0.0, 1 - a2)) + (1 - a2);
  return first * first + 6 * second * second;
}

GapBoundRecord heisenberg_gap_bound() {
  const CifhInstance inst = heisenberg_line4();
  const SectorSpectrum spec = exact_spectrum(inst, true);
  GapBoundRecord rec;
  rec.lambda_max = spec.global_max;
  const double scale = std::max(1.0, std::abs(spec.global_max));
  for (double e : spec.eigenvalues) {
    if (e < spec.global_max - 1e-9 * scale) {
      rec.gap = spec.global_max - e;
      break;
    }
  }
  const CovarianceMatrix g = covariance_of_state(inst.n(), spec.top_vector);
  rec.s = (g.gamma() * g.gamma().transpose()).trace() / static_cast<double>(2 * inst.n());

  double lo = 0.9, hi = 1.0;  // g_s(lo) > 1 > g_s(hi) = s
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (gap_overlap_g(rec.s, mid) > 1) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  rec.alpha_star = 0.5 * (lo + hi);
  const double a2 = rec.alpha_star * rec.alpha_star;
  rec.ratio_upper = (a2 * rec.lambda_max + (1 - a2) * (rec.lambda_max - rec.gap)) / rec.lambda_max;
  return rec;
}

double product_state_grid_max(const CifhInstance& inst, int theta_steps, int phi_steps) {
  const int n = inst.n();
  check_size(n, 6);
  if (theta_steps < 2 || phi_steps < 1) throw Error("grid too coarse");
  const Eigen::SparseMatrix<std::complex<double>> h = jw_hamiltonian(inst).cast<std::complex<double>>();
  const Eigen::Index dim = Eigen::Index{1} << n;

  std::vector<std::array<std::complex<double>, 2>> grid;
  for (int t = 0; t < theta_steps; ++t) {
    const double theta = std::numbers::pi * t / (theta_steps - 1);
    const int phis = (t == 0 || t == theta_steps - 1) ? 1 : phi_steps;
    for (int p = 0; p < phis; ++p) {
      const double phi = 2 * std::numbers::pi * p / phi_steps;
      grid.push_back({std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)});
    }
  }
  const std::size_t g = grid.size();
  std::vector<std::size_t> idx(n - 1, 0);
  double best = -std::numeric_limits<double>::infinity();
  ComplexVector psi(dim);
  while (true) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      std::complex<double> amp = (x & 1) ? 0.0 : 1.0;
      for (int q = 1; q < n && amp != 0.0; ++q) amp *= grid[idx[q - 1]][(x >> q) & 1];
      psi(x) = amp;
    }
    best = std::max(best, psi.dot(h * psi).real());
    int q = 0;
    while (q < n - 1 && ++idx[q] == g) idx[q++] = 0;
    if (q == n - 1) break;
  }
  return best;
}

}  // namespace cifh
