#include "wenlr/nlr_operator.hpp"

#include <cmath>
#include <string>

#include "wenlr/numerics.hpp"

namespace wenlr {

KernelWeights kernel_weights(int patch_size, double sigma) {
  if (patch_size < 1 || patch_size % 2 == 0) {
    throw std::invalid_argument("kernel_weights: patch size must be odd (got " +
                                std::to_string(patch_size) + ")");
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("kernel_weights: sigma must be positive");
  KernelWeights k;
  k.sigma = sigma;
  k.values.resize(static_cast<std::size_t>(patch_size * patch_size));
  const int h = patch_size / 2;
  const double s2 = sigma * sigma;
  for (int r = 0; r < patch_size; ++r) {
    for (int c = 0; c < patch_size; ++c) {
      const double d2 = static_cast<double>((r - h) * (r - h) + (c - h) * (c - h));
      k.values[static_cast<std::size_t>(r * patch_size + c)] = std::exp(-d2 / s2);
    }
  }
  return k;
}

namespace {

Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& neighbors) {
  Eigen::MatrixXd x(neighbors.rows(), neighbors.cols() + 1);
  x.leftCols(neighbors.cols()) = neighbors;
  x.col(neighbors.cols()).setOnes();
  return x;
}

}  // namespace

RegressionFit fit_patch_regression(const Eigen::VectorXd& target,
                                   const Eigen::MatrixXd& neighbors, const KernelWeights& kernel,
                                   double chi) {
  const auto dim = static_cast<Eigen::Index>(kernel.values.size());
  if (neighbors.cols() < 1) throw std::invalid_argument("fit_patch_regression: no neighbours");
  if (target.size() != dim || neighbors.rows() != dim) {
    throw std::invalid_argument("fit_patch_regression: vector length mismatch");
  }
  if (!(chi > 0.0)) throw std::invalid_argument("fit_patch_regression: chi must be positive");

  const Eigen::Map<const Eigen::VectorXd> kappa(kernel.values.data(), dim);
  const Eigen::MatrixXd x = design_matrix(neighbors);
  const Eigen::MatrixXd kx = kappa.asDiagonal() * x;
  Eigen::MatrixXd g = x.transpose() * kx;
  g.diagonal().head(neighbors.cols()).array() += chi;  // intercept is not shrunk
  const Eigen::VectorXd r = kx.transpose() * target;
  const Eigen::VectorXd w = ridge_solve(g, r);

  RegressionFit fit;
  fit.weights = w.head(neighbors.cols());
  fit.bias = w(neighbors.cols());
  return fit;
}

double regression_objective(const Eigen::VectorXd& target, const Eigen::MatrixXd& neighbors,
                            const KernelWeights& kernel, double chi,
                            const Eigen::VectorXd& weights, double bias) {
  const auto dim = static_cast<Eigen::Index>(kernel.values.size());
  const Eigen::Map<const Eigen::VectorXd> kappa(kernel.values.data(), dim);
  const Eigen::VectorXd resid =
      target - neighbors * weights - Eigen::VectorXd::Constant(dim, bias);
  return resid.cwiseAbs2().dot(kappa) + chi * weights.squaredNorm();
}

NlrOperator::NlrOperator(Dims dims) : dims_(dims) {
  const std::size_t n = dims.pixels();
  row_ptr_.resize(n + 1);
  cols_.resize(n);
  vals_.assign(n, 1.0);
  bias_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    row_ptr_[i] = i;
    cols_[i] = static_cast<std::int32_t>(i);
  }
  row_ptr_[n] = n;
}

std::span<const std::int32_t> NlrOperator::row_columns(std::size_t row) const {
  return std::span<const std::int32_t>(cols_).subspan(row_ptr_[row],
                                                      row_ptr_[row + 1] - row_ptr_[row]);
}

std::span<const double> NlrOperator::row_weights(std::size_t row) const {
  return std::span<const double>(vals_).subspan(row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]);
}

double NlrOperator::apply_row(std::size_t row, std::span<const double> in) const {
  double s = 0.0;
  for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) {
    s += vals_[k] * in[static_cast<std::size_t>(cols_[k])];
  }
  return s;
}

Image NlrOperator::apply(const Image& img) const {
  if (img.dims() != dims_) throw DimensionError("NLR operator applied to image of wrong size");
  Image out(dims_);
  apply_linear(img.data(), out.data());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bias_[i];
  return out;
}

void NlrOperator::apply_linear(std::span<const double> in, std::span<double> out) const {
  if (in.size() != rows() || out.size() != rows()) {
    throw DimensionError("NLR operator vector length mismatch");
  }
  for (std::size_t i = 0; i < rows(); ++i) out[i] = apply_row(i, in);
}

void NlrOperator::apply_transpose(std::span<const double> in, std::span<double> out) const {
  if (in.size() != rows() || out.size() != rows()) {
    throw DimensionError("NLR operator vector length mismatch");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i) {
    const double v = in[i];
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      out[static_cast<std::size_t>(cols_[k])] += vals_[k] * v;
    }
  }
}

NlrOperatorBuilder::NlrOperatorBuilder(Dims dims) : dims_(dims), rows_(dims.pixels()) {}

void NlrOperatorBuilder::set_row(std::size_t pixel, std::span<const std::int32_t> columns,
                                 std::span<const double> weights, double bias) {
  if (pixel >= rows_.size()) throw std::out_of_range("NLR row index out of range");
  if (columns.size() != weights.size()) {
    throw std::invalid_argument("NLR row columns/weights length mismatch");
  }
  for (std::int32_t c : columns) {
    if (c < 0 || static_cast<std::size_t>(c) >= rows_.size()) {
      throw std::out_of_range("NLR row references invalid pixel " + std::to_string(c));
    }
  }
  Row& row = rows_[pixel];
  row.cols.assign(columns.begin(), columns.end());
  row.vals.assign(weights.begin(), weights.end());
  row.bias = bias;
  row.set = true;
}

NlrOperator NlrOperatorBuilder::build() const {
  NlrOperator op;
  op.dims_ = dims_;
  const std::size_t n = rows_.size();
  op.row_ptr_.resize(n + 1);
  op.bias_.resize(n);
  std::size_t nnz = 0;
  for (const Row& r : rows_) nnz += r.set ? r.cols.size() : 1;
  op.cols_.reserve(nnz);
  op.vals_.reserve(nnz);
  for (std::size_t i = 0; i < n; ++i) {
    op.row_ptr_[i] = op.cols_.size();
    const Row& r = rows_[i];
    if (r.set) {
      op.cols_.insert(op.cols_.end(), r.cols.begin(), r.cols.end());
      op.vals_.insert(op.vals_.end(), r.vals.begin(), r.vals.end());
      op.bias_[i] = r.bias;
    } else {
      op.cols_.push_back(static_cast<std::int32_t>(i));
      op.vals_.push_back(1.0);
      op.bias_[i] = 0.0;
    }
  }
  op.row_ptr_[n] = op.cols_.size();
  return op;
}

bool fit_center_row(const Image& img, const PatchSystem& sys, std::size_t query,
                    const SimilarPatchSet& similar, const KernelWeights& kernel, double chi,
                    std::size_t max_neighbors, std::vector<std::int32_t>& columns,
                    std::vector<double>& weights, double& bias) {
  const std::size_t m = std::min(max_neighbors, similar.size());
  if (m == 0) return false;
  const int p = sys.patch_size();
  const int h = p / 2;
  const auto len = static_cast<Eigen::Index>(sys.patch_length());

  Eigen::VectorXd target(len);
  sys.extract(img, query, std::span<double>(target.data(), sys.patch_length()));
  Eigen::MatrixXd neighbors(len, static_cast<Eigen::Index>(m));
  columns.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const Origin o = similar.neighbors[j];
    extract_window(img, o, p,
                   std::span<double>(neighbors.col(static_cast<Eigen::Index>(j)).data(),
                                     sys.patch_length()));
    columns[j] = static_cast<std::int32_t>(img.index(o.row + h, o.col + h));
  }
  const RegressionFit fit = fit_patch_regression(target, neighbors, kernel, chi);
  weights.assign(fit.weights.data(), fit.weights.data() + fit.weights.size());
  bias = fit.bias;
  return true;
}

NlrOperator build_nlr_operator(const Image& img, const PatchSystem& sys, const SearchConfig& cfg,
                               const NlrParams& params) {
  if (params.neighbors < 1) throw std::invalid_argument("NLR neighbour count must be positive");
  const KernelWeights kernel = kernel_weights(sys.patch_size(), params.sigma);
  SearchConfig search = cfg;
  search.exclude_self = true;

  const std::size_t k = sys.count();
  std::vector<std::vector<std::int32_t>> cols(k);
  std::vector<std::vector<double>> vals(k);
  std::vector<double> biases(k, 0.0);
  std::vector<char> ok(k, 0);

#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(k); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const SimilarPatchSet similar = find_similar(img, sys, i, search, params.neighbors);
    ok[i] = fit_center_row(img, sys, i, similar, kernel, params.chi, params.neighbors, cols[i],
                           vals[i], biases[i])
                ? 1
                : 0;
  }

  NlrOperatorBuilder builder(img.dims());
  for (std::size_t i = 0; i < k; ++i) {
    if (ok[i]) builder.set_row(sys.center_index(i), cols[i], vals[i], biases[i]);
  }
  return builder.build();
}

}  // namespace wenlr
