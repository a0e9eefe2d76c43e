#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

namespace wenlr {

/// Adaptive PCA sub-dictionary trained on a group of similar patches.
///
/// `basis` rows are the principal directions, ordered by descending
/// eigenvalue of the group covariance. Coding is taken relative to the
/// group mean: code(v) = basis * (v - mean), decode(a) = basis^T a + mean.
struct SubDictionary {
  Eigen::MatrixXd basis;
  Eigen::VectorXd mean;
  Eigen::VectorXd eigenvalues;

  Eigen::Index dim() const { return mean.size(); }

  Eigen::VectorXd code(const Eigen::VectorXd& patch) const;
  Eigen::VectorXd decode(const Eigen::VectorXd& alpha) const;
};

/// Covariance (1/n) sum (s - mean)(s - mean)^T of the columns of `samples`.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples, Eigen::VectorXd* mean = nullptr);

/// PCA on the columns of `samples` (dim x n, n >= 2). A group with zero
/// covariance gets the identity basis.
SubDictionary train_subdictionary(const Eigen::MatrixXd& samples);

/// Code of the weighted average of the columns of `neighbors`.
Eigen::VectorXd prior_coefficient(const SubDictionary& dict, const Eigen::MatrixXd& neighbors,
                                  std::span<const double> weights);

struct DictionaryDiagnostics {
  double orthonormality_error = 0.0;  // max |Phi Phi^T - I|
  double diagonalization_error = 0.0;  // max off-diagonal |Phi C Phi^T|
};

DictionaryDiagnostics check_subdictionary(const SubDictionary& dict,
                                          const Eigen::MatrixXd& covariance);

}  // namespace wenlr
