#pragma once

#include "wenlr/image.hpp"

namespace wenlr {

struct QualityScore {
  double psnr = 0.0;  // dB; +infinity for identical images
  double ssim = 0.0;

  bool identical() const;
};

/// 10 log10(peak^2 / MSE) over all pixels; +infinity when MSE is zero.
double psnr(const Image& a, const Image& b, double peak = 1.0);

/// Mean single-scale SSIM: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, dynamic range 1, averaged over window positions fully inside
/// the image.
double ssim(const Image& a, const Image& b);

QualityScore evaluate_quality(const Image& reference, const Image& test);

}  // namespace wenlr
