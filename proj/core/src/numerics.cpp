#include "wenlr/numerics.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace wenlr {

SymEig sym_eig(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("sym_eig: matrix is not square");
  if (!a.allFinite()) throw std::invalid_argument("sym_eig: non-finite entries");
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0)) {
    throw std::invalid_argument("sym_eig: matrix is not symmetric");
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("sym_eig: decomposition failed");

  // Eigen returns ascending order; flip to descending.
  const Eigen::Index n = a.rows();
  SymEig out{solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index arg = 0;
    out.vectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (out.vectors(arg, k) < 0.0) out.vectors.col(k) *= -1.0;
  }
  return out;
}

Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& g, const Eigen::VectorXd& r) {
  if (g.rows() != g.cols() || g.rows() != r.size()) {
    throw std::invalid_argument("ridge_solve: dimension mismatch");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("ridge_solve: system is not positive definite (check ridge parameter)");
  }
  Eigen::VectorXd z = llt.solve(r);
  if (!z.allFinite()) throw NumericalError("ridge_solve: non-finite solution");
  return z;
}

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double inner(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

CgResult conjugate_gradient(const LinearOperator& a, std::span<const double> rhs,
                            std::span<double> x, const CgOptions& options,
                            std::span<const double> inverse_diagonal) {
  const std::size_t n = a.dim;
  if (rhs.size() != n || x.size() != n) {
    throw std::invalid_argument("conjugate_gradient: dimension mismatch");
  }
  if (!inverse_diagonal.empty() && inverse_diagonal.size() != n) {
    throw std::invalid_argument("conjugate_gradient: preconditioner has wrong length");
  }
  if (options.tol <= 0.0) throw std::invalid_argument("conjugate_gradient: tol must be positive");

  CgResult result;
  const double rhs_norm = norm2(rhs);
  if (!std::isfinite(rhs_norm)) throw NumericalError("conjugate_gradient: non-finite right-hand side");
  if (rhs_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    result.converged = true;
    return result;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  a.apply(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];

  double res = norm2(r) / rhs_norm;
  if (!std::isfinite(res)) throw NumericalError("conjugate_gradient: non-finite residual");
  result.relative_residual = res;
  if (res <= options.tol) {
    result.converged = true;
    return result;
  }

  auto precondition = [&](std::span<const double> in, std::span<double> out) {
    if (inverse_diagonal.empty()) {
      std::copy(in.begin(), in.end(), out.begin());
    } else {
      for (std::size_t i = 0; i < n; ++i) out[i] = inverse_diagonal[i] * in[i];
    }
  };

  double best = res;
  double rho = 0.0;
  for (int it = 0; it < options.max_iter; ++it) {
    precondition(r, z);
    const double rho_new = inner(r, z);
    if (it == 0) {
      p = z;
    } else {
      const double beta = rho_new / rho;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    rho = rho_new;

    a.apply(p, q);
    const double pq = inner(p, q);
    if (!std::isfinite(pq) || pq <= 0.0) {
      throw NumericalError("conjugate_gradient: operator is not positive definite (p'Ap = " +
                           std::to_string(pq) + ")");
    }
    const double alpha = rho / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }

    res = norm2(r) / rhs_norm;
    result.iterations = it + 1;
    result.relative_residual = res;
    if (!std::isfinite(res)) throw NumericalError("conjugate_gradient: non-finite residual");
    if (res <= options.tol) {
      result.converged = true;
      return result;
    }
    if (res > 10.0 * best) throw NumericalError("conjugate_gradient: residual diverged");
    best = std::min(best, res);
  }
  return result;
}

}  // namespace wenlr
