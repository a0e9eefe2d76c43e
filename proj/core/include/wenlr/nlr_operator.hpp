#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "wenlr/image.hpp"
#include "wenlr/patch.hpp"
#include "wenlr/patch_search.hpp"

namespace wenlr {

/// Spatial kernel over a p x p patch: exp(-(dr^2 + dc^2) / sigma^2) at
/// offset (dr, dc) from the centre, flattened row-major.
struct KernelWeights {
  std::vector<double> values;
  double sigma = 0.0;
};

KernelWeights kernel_weights(int patch_size, double sigma);

struct RegressionFit {
  Eigen::VectorXd weights;  // a, one per neighbour
  double bias = 0.0;        // b
};

/// Kernel-weighted ridge regression of `target` on the columns of
/// `neighbors` plus a constant column:
///   min_{a,b} ||K^{1/2}(target - N a - b)||^2 + chi ||a||^2.
/// The intercept b is not penalized, so constant data is fit exactly.
RegressionFit fit_patch_regression(const Eigen::VectorXd& target,
                                   const Eigen::MatrixXd& neighbors, const KernelWeights& kernel,
                                   double chi);

/// Objective of the ridge problem above at (weights, bias).
double regression_objective(const Eigen::VectorXd& target, const Eigen::MatrixXd& neighbors,
                            const KernelWeights& kernel, double chi,
                            const Eigen::VectorXd& weights, double bias);

/// Row-sparse affine operator x -> Hx + b over HR pixels (CSR storage).
class NlrOperator {
 public:
  NlrOperator() = default;
  /// Identity operator (every row weights only its own pixel, zero bias).
  explicit NlrOperator(Dims dims);

  Dims dims() const { return dims_; }
  std::size_t rows() const { return bias_.size(); }

  std::span<const std::int32_t> row_columns(std::size_t row) const;
  std::span<const double> row_weights(std::size_t row) const;
  double bias(std::size_t row) const { return bias_[row]; }
  std::span<const double> biases() const { return bias_; }

  /// Hx + b.
  Image apply(const Image& img) const;
  /// Hx (linear part only) on raw vectors.
  void apply_linear(std::span<const double> in, std::span<double> out) const;
  /// H^T v.
  void apply_transpose(std::span<const double> in, std::span<double> out) const;
  /// (Hx)_row for a single row.
  double apply_row(std::size_t row, std::span<const double> in) const;

  friend bool operator==(const NlrOperator&, const NlrOperator&) = default;

 private:
  friend class NlrOperatorBuilder;
  Dims dims_{};
  std::vector<std::size_t> row_ptr_;
  std::vector<std::int32_t> cols_;
  std::vector<double> vals_;
  std::vector<double> bias_;
};

/// Collects per-pixel rows (in any order) and assembles an NlrOperator.
/// Pixels without an explicit row become identity rows.
class NlrOperatorBuilder {
 public:
  explicit NlrOperatorBuilder(Dims dims);

  void set_row(std::size_t pixel, std::span<const std::int32_t> columns,
               std::span<const double> weights, double bias);
  NlrOperator build() const;

 private:
  struct Row {
    std::vector<std::int32_t> cols;
    std::vector<double> vals;
    double bias = 0.0;
    bool set = false;
  };
  Dims dims_;
  std::vector<Row> rows_;
};

struct NlrParams {
  std::size_t neighbors = 15;  // m
  double sigma = 1.7;
  double chi = 0.01;
};

/// Fits the regression row for the centre pixel of patch `query` from the
/// first `max_neighbors` entries of `similar` (self excluded by caller).
/// Returns false when `similar` is empty.
bool fit_center_row(const Image& img, const PatchSystem& sys, std::size_t query,
                    const SimilarPatchSet& similar, const KernelWeights& kernel, double chi,
                    std::size_t max_neighbors, std::vector<std::int32_t>& columns,
                    std::vector<double>& weights, double& bias);

/// Builds H, b from the current estimate: one fitted row per patch-centre
/// pixel, identity rows elsewhere.
NlrOperator build_nlr_operator(const Image& img, const PatchSystem& sys, const SearchConfig& cfg,
                               const NlrParams& params);

}  // namespace wenlr
