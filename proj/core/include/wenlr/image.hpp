#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wenlr {

struct Dims {
  int height = 0;
  int width = 0;

  std::size_t pixels() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Raised when image dimensions are incompatible with an operation. `axis()`
/// names the offending axis ("height", "width") when there is one.
class DimensionError : public std::invalid_argument {
 public:
  DimensionError(const std::string& what, std::string axis = {})
      : std::invalid_argument(what), axis_(std::move(axis)) {}
  const std::string& axis() const { return axis_; }

 private:
  std::string axis_;
};

/// Grayscale image with luminance samples stored row-major. Samples are
/// nominally in [0,1]; intermediate results may leave that range until
/// clamp() is applied.
class Image {
 public:
  Image() = default;
  Image(int height, int width, double fill = 0.0);
  Image(int height, int width, std::vector<double> data);
  explicit Image(Dims dims, double fill = 0.0) : Image(dims.height, dims.width, fill) {}

  int height() const { return dims_.height; }
  int width() const { return dims_.width; }
  Dims dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int row, int col) { return data_[index(row, col)]; }
  double operator()(int row, int col) const { return data_[index(row, col)]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(dims_.width) +
           static_cast<std::size_t>(col);
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  /// Clamps every sample into [lo, hi]; returns how many samples moved.
  std::size_t clamp(double lo = 0.0, double hi = 1.0);

  friend bool operator==(const Image&, const Image&) = default;

 private:
  Dims dims_{};
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);

/// Direct (selection) down-sampling by an integer factor with phase (0,0):
/// LR pixel (r,c) is HR pixel (factor*r, factor*c).
class Downsampler {
 public:
  /// Throws DimensionError if either HR dimension is not a multiple of factor.
  Downsampler(int factor, Dims hr);

  int factor() const { return factor_; }
  Dims hr_dims() const { return hr_; }
  Dims lr_dims() const { return {hr_.height / factor_, hr_.width / factor_}; }

  /// HR linear index of LR sample i.
  std::size_t hr_index(std::size_t lr_index) const;

  Image apply(const Image& hr) const;
  /// Scatters LR samples onto their HR grid positions; zero elsewhere.
  Image adjoint(const Image& lr) const;

 private:
  int factor_;
  Dims hr_;
};

Image downsample(const Image& hr, int factor);

}  // namespace wenlr
