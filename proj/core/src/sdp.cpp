#include "cifh/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "cifh/model.hpp"

namespace cifh {

std::string_view to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Converged: return "converged";
    case SdpStatus::IterLimit: return "iteration-limit";
    case SdpStatus::Stalled: return "stalled";
  }
  return "unknown";
}

double constraint_value(const SdpConstraint& a, const Matrix& x) {
  double v = 0;
  for (const auto& e : a.entries) v += e.value * x(e.row, e.col);
  return v;
}

namespace {

class AffineProjector {
 public:
  AffineProjector(const SdpProblem& p) : p_(p) {
    const std::size_t m = p.constraints.size();
    const int d = p.dim;
    std::unordered_map<long, std::vector<std::pair<int, double>>> by_entry;
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& e : p.constraints[i].entries) {
        if (e.row < 0 || e.row >= d || e.col < 0 || e.col >= d) throw Error("sdp constraint entry out of range");
        by_entry[static_cast<long>(e.row) * d + e.col].emplace_back(static_cast<int>(i), e.value);
      }
    }
    Matrix gram = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (const auto& [key, list] : by_entry) {
      // duplicate (row, col) listings within one constraint are summed first
      std::unordered_map<int, double> merged;
      for (const auto& [i, v] : list) merged[i] += v;
      for (const auto& [i, vi] : merged)
        for (const auto& [j, vj] : merged) gram(i, j) += vi * vj;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    const Vector& ev = es.eigenvalues();
    const double top = ev.size() ? std::max(ev.cwiseAbs().maxCoeff(), 1e-300) : 1.0;
    Vector inv = Vector::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (ev(i) > 1e-10 * top) inv(i) = 1.0 / ev(i);
    }
    pinv_ = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    b_ = Vector(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) b_(i) = p.constraints[i].rhs;
  }

  Vector apply_a(const Matrix& x) const {
    Vector out(b_.size());
    for (Eigen::Index i = 0; i < b_.size(); ++i) out(i) = constraint_value(p_.constraints[i], x);
    return out;
  }

  void project(Matrix& v) const {
    if (b_.size() == 0) return;
    const Vector y = pinv_ * (apply_a(v) - b_);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) == 0) continue;
      for (const auto& e : p_.constraints[i].entries) v(e.row, e.col) -= y(i) * e.value;
    }
  }

  double residual(const Matrix& x) const {
    if (b_.size() == 0) return 0.0;
    return (apply_a(x) - b_).cwiseAbs().maxCoeff();
  }

 private:
  const SdpProblem& p_;
  Matrix pinv_;
  Vector b_;
};

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opt) {
  const int d = p.dim;
  if (d < 1) throw Error("sdp dimension must be positive");
  if (p.objective.rows() != d || p.objective.cols() != d) throw Error("sdp objective has the wrong shape");
  if (max_abs(p.objective - p.objective.transpose()) > 1e-12 * std::max(1.0, max_abs(p.objective)))
    throw Error("sdp objective is not symmetric");

  const AffineProjector aff(p);
  const Matrix& c = p.objective;
  const double c_norm = std::max(1.0, c.norm());

  Matrix z = opt.warm_z && opt.warm_z->rows() == d ? *opt.warm_z : Matrix::Identity(d, d);
  Matrix u = opt.warm_u && opt.warm_u->rows() == d ? *opt.warm_u : Matrix::Zero(d, d);
  double rho = opt.rho;

  SdpSolution sol;
  sol.status = SdpStatus::IterLimit;
  Eigen::SelfAdjointEigenSolver<Matrix> es(d);
  Matrix y(d, d), w(d, d), z_prev(d, d);

  double mark_residual = std::numeric_limits<double>::infinity();
  long mark_iter = 0;
  long it = 0;
  for (; it < opt.max_iter; ++it) {
    y = z - u + c / rho;
    aff.project(y);
    w = opt.alpha * y + (1 - opt.alpha) * z + u;
    z_prev = z;
    es.compute(0.5 * (w + w.transpose()));
    const Vector lam = es.eigenvalues().cwiseMax(0.0);
    z = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    u = w - z;

    const double r_primal = (y - z).norm();
    const double r_dual = rho * (z - z_prev).norm();
    const double eps_p = opt.tol * std::max(1.0, z.norm());
    const double eps_d = opt.tol * c_norm;
    if (r_primal <= eps_p && r_dual <= eps_d) {
      const double r_aff = aff.residual(z);
      if (r_aff <= opt.tol) {
        sol.status = SdpStatus::Converged;
        ++it;
        break;
      }
    }

    if ((it + 1) % 50 == 0) {
      if (r_primal > 10 * r_dual && rho < 1e6) {
        rho *= 2;
        u /= 2;
      } else if (r_dual > 10 * r_primal && rho > 1e-6) {
        rho /= 2;
        u *= 2;
      }
    }

    if ((it + 1) % 100 == 0) {
      const double r_aff = aff.residual(z);
      if (r_aff < 0.9 * mark_residual) {
        mark_residual = r_aff;
        mark_iter = it;
      } else if (r_aff > 1e3 * opt.tol && it - mark_iter >= opt.stall_window) {
        sol.status = SdpStatus::Stalled;
        ++it;
        break;
      }
    }
  }

  sol.iterations = it;
  sol.x_matrix = z;
  sol.objective_value = (c.cwiseProduct(z)).sum();
  sol.primal_residual = aff.residual(z);
  sol.dual_u = u;
  sol.rho = rho;
  return sol;
}

Matrix real_embedding(const ComplexMat& x) {
  const Eigen::Index d = x.rows();
  Matrix m(2 * d, 2 * d);
  m.topLeftCorner(d, d) = x.real();
  m.bottomRightCorner(d, d) = x.real();
  m.topRightCorner(d, d) = -x.imag();
  m.bottomLeftCorner(d, d) = x.imag();
  return m;
}

ComplexMat extract_hermitian(const Matrix& y) {
  const Eigen::Index d = y.rows() / 2;
  const Matrix re = 0.5 * (y.topLeftCorner(d, d) + y.bottomRightCorner(d, d));
  const Matrix im = 0.5 * (y.bottomLeftCorner(d, d) - y.topRightCorner(d, d));
  ComplexMat x(d, d);
  x.real() = re;
  x.imag() = im;
  return x;
}

SdpProblem hermitian_embed(const ComplexMat& c, const std::vector<HermitianConstraint>& constraints) {
  const Eigen::Index d = c.rows();
  if (c.cols() != d) throw Error("hermitian_embed: objective is not square");
  if ((c - c.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff()))
    throw Error("hermitian_embed: objective is not Hermitian");

  SdpProblem p;
  p.dim = static_cast<int>(2 * d);
  p.objective = 0.5 * real_embedding(c);
  const int n = static_cast<int>(d);
  for (const HermitianConstraint& hc : constraints) {
    ComplexMat dense = ComplexMat::Zero(d, d);
    for (const auto& e : hc.entries) {
      if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n) throw Error("hermitian_embed: entry out of range");
      dense(e.row, e.col) += e.value;
    }
    if ((dense - dense.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw Error("hermitian_embed: constraint matrix is not Hermitian");
    SdpConstraint rc;
    rc.rhs = 2 * hc.rhs;
    for (const auto& e : hc.entries) {
      const double re = e.value.real(), im = e.value.imag();
      if (re != 0) {
        rc.entries.push_back({e.row, e.col, re});
        rc.entries.push_back({e.row + n, e.col + n, re});
      }
      if (im != 0) {
        rc.entries.push_back({e.row, e.col + n, -im});
        rc.entries.push_back({e.row + n, e.col, im});
      }
    }
    p.constraints.push_back(std::move(rc));
  }
  return p;
}

}  // namespace cifh
