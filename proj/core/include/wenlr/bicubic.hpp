#pragma once

#include "wenlr/image.hpp"

namespace wenlr {

/// Keys cubic convolution kernel with parameter a.
double cubic_kernel(double t, double a = -0.5);

/// Separable bicubic up-scaling by an integer factor. HR pixel
/// (factor*r, factor*c) reproduces LR pixel (r, c) exactly; samples beyond
/// the LR border are replicated.
Image bicubic_upscale(const Image& lr, int factor);

}  // namespace wenlr
