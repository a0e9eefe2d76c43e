#include "wenlr/image.hpp"

#include <algorithm>

namespace wenlr {

Image::Image(int height, int width, double fill) : dims_{height, width} {
  if (height < 0 || width < 0) {
    throw DimensionError("image dimensions must be non-negative");
  }
  data_.assign(dims_.pixels(), fill);
}

Image::Image(int height, int width, std::vector<double> data)
    : dims_{height, width}, data_(std::move(data)) {
  if (height < 0 || width < 0) {
    throw DimensionError("image dimensions must be non-negative");
  }
  if (data_.size() != dims_.pixels()) {
    throw DimensionError("image data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(height) + "x" +
                         std::to_string(width));
  }
}

std::size_t Image::clamp(double lo, double hi) {
  std::size_t moved = 0;
  for (double& v : data_) {
    const double c = std::clamp(v, lo, hi);
    if (c != v) {
      ++moved;
      v = c;
    }
  }
  return moved;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Downsampler::Downsampler(int factor, Dims hr) : factor_(factor), hr_(hr) {
  if (factor < 1) throw DimensionError("down-sampling factor must be positive");
  if (hr.height % factor != 0) {
    throw DimensionError("height " + std::to_string(hr.height) +
                             " is not divisible by factor " + std::to_string(factor),
                         "height");
  }
  if (hr.width % factor != 0) {
    throw DimensionError("width " + std::to_string(hr.width) +
                             " is not divisible by factor " + std::to_string(factor),
                         "width");
  }
}

std::size_t Downsampler::hr_index(std::size_t lr_index) const {
  const auto lr_w = static_cast<std::size_t>(hr_.width / factor_);
  const std::size_t r = lr_index / lr_w;
  const std::size_t c = lr_index % lr_w;
  return r * static_cast<std::size_t>(factor_) * static_cast<std::size_t>(hr_.width) +
         c * static_cast<std::size_t>(factor_);
}

Image Downsampler::apply(const Image& hr) const {
  if (hr.dims() != hr_) throw DimensionError("down-sampling input has unexpected dimensions");
  const Dims lr = lr_dims();
  Image out(lr);
  for (int r = 0; r < lr.height; ++r) {
    for (int c = 0; c < lr.width; ++c) out(r, c) = hr(factor_ * r, factor_ * c);
  }
  return out;
}

Image Downsampler::adjoint(const Image& lr) const {
  if (lr.dims() != lr_dims()) throw DimensionError("adjoint input has unexpected dimensions");
  Image out(hr_);
  for (int r = 0; r < lr.height(); ++r) {
    for (int c = 0; c < lr.width(); ++c) out(factor_ * r, factor_ * c) = lr(r, c);
  }
  return out;
}

Image downsample(const Image& hr, int factor) {
  return Downsampler(factor, hr.dims()).apply(hr);
}

}  // namespace wenlr
