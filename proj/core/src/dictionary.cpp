#include "wenlr/dictionary.hpp"

#include <stdexcept>

#include "wenlr/numerics.hpp"

namespace wenlr {

Eigen::VectorXd SubDictionary::code(const Eigen::VectorXd& patch) const {
  if (patch.size() != dim()) throw std::invalid_argument("code: patch length mismatch");
  return basis * (patch - mean);
}

Eigen::VectorXd SubDictionary::decode(const Eigen::VectorXd& alpha) const {
  if (alpha.size() != dim()) throw std::invalid_argument("decode: coefficient length mismatch");
  return basis.transpose() * alpha + mean;
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples, Eigen::VectorXd* mean) {
  const Eigen::VectorXd mu = samples.rowwise().mean();
  const Eigen::MatrixXd centered = samples.colwise() - mu;
  Eigen::MatrixXd cov = (centered * centered.transpose()) / static_cast<double>(samples.cols());
  // Exact symmetry for the eigen-solver's check.
  cov = 0.5 * (cov + cov.transpose()).eval();
  if (mean != nullptr) *mean = mu;
  return cov;
}

SubDictionary train_subdictionary(const Eigen::MatrixXd& samples) {
  if (samples.cols() < 2) throw std::invalid_argument("train_subdictionary: need at least 2 samples");
  SubDictionary dict;
  const Eigen::MatrixXd cov = sample_covariance(samples, &dict.mean);
  const Eigen::Index d = samples.rows();
  if (cov.isZero(0.0)) {
    dict.basis = Eigen::MatrixXd::Identity(d, d);
    dict.eigenvalues = Eigen::VectorXd::Zero(d);
    return dict;
  }
  const SymEig eig = sym_eig(cov);
  dict.basis = eig.vectors.transpose();
  dict.eigenvalues = eig.values;
  return dict;
}

Eigen::VectorXd prior_coefficient(const SubDictionary& dict, const Eigen::MatrixXd& neighbors,
                                  std::span<const double> weights) {
  if (neighbors.cols() < 1) throw std::invalid_argument("prior_coefficient: no neighbours");
  if (static_cast<Eigen::Index>(weights.size()) != neighbors.cols()) {
    throw std::invalid_argument("prior_coefficient: weight/neighbour count mismatch");
  }
  const Eigen::Map<const Eigen::VectorXd> w(weights.data(), neighbors.cols());
  return dict.code(neighbors * w);
}

DictionaryDiagnostics check_subdictionary(const SubDictionary& dict,
                                          const Eigen::MatrixXd& covariance) {
  const Eigen::Index d = dict.dim();
  DictionaryDiagnostics diag;
  const Eigen::MatrixXd gram = dict.basis * dict.basis.transpose();
  const Eigen::MatrixXd gram_t = dict.basis.transpose() * dict.basis;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  diag.orthonormality_error =
      std::max((gram - eye).cwiseAbs().maxCoeff(), (gram_t - eye).cwiseAbs().maxCoeff());
  Eigen::MatrixXd rotated = dict.basis * covariance * dict.basis.transpose();
  rotated.diagonal().setZero();
  diag.diagonalization_error = rotated.cwiseAbs().maxCoeff();
  return diag;
}

}  // namespace wenlr
