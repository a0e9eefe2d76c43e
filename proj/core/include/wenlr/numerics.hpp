#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace wenlr {

/// Non-finite values or divergence inside a numerical routine.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigen-pairs of a symmetric matrix. Column k of `vectors` pairs with
/// `values[k]`; values are in descending order and each eigenvector has its
/// largest-magnitude component positive.
struct SymEig {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

SymEig sym_eig(const Eigen::MatrixXd& a);

/// Solves g z = r for symmetric positive definite g (Cholesky).
Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& g, const Eigen::VectorXd& r);

/// Matrix-free square operator: apply(in, out) writes A*in into out.
struct LinearOperator {
  std::size_t dim = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
};

struct CgOptions {
  double tol = 1e-6;  // relative residual ||Ax - b|| / ||b||
  int max_iter = 400;
};

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Preconditioned conjugate gradient for SPD operators. `x` holds the warm
/// start on entry and the solution on exit. `inverse_diagonal`, if
/// non-empty, is a Jacobi preconditioner. Throws NumericalError on
/// non-finite values or when the residual grows 10x past its best value.
CgResult conjugate_gradient(const LinearOperator& a, std::span<const double> rhs,
                            std::span<double> x, const CgOptions& options = {},
                            std::span<const double> inverse_diagonal = {});

}  // namespace wenlr
