#include "wenlr/bicubic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace wenlr {

double cubic_kernel(double t, double a) {
  const double x = std::abs(t);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return (((x - 5.0) * x + 8.0) * x - 4.0) * a;
  return 0.0;
}

namespace {

struct Taps {
  std::array<int, 4> index;
  std::array<double, 4> weight;
};

// Interpolation taps for every output position along one axis.
std::vector<Taps> axis_taps(int lr_extent, int factor) {
  std::vector<Taps> taps(static_cast<std::size_t>(lr_extent * factor));
  for (int x = 0; x < lr_extent * factor; ++x) {
    const int left = x / factor;
    const double t = static_cast<double>(x % factor) / factor;
    Taps& tp = taps[static_cast<std::size_t>(x)];
    for (int k = 0; k < 4; ++k) {
      tp.index[static_cast<std::size_t>(k)] = std::clamp(left - 1 + k, 0, lr_extent - 1);
      tp.weight[static_cast<std::size_t>(k)] = cubic_kernel(t - (k - 1));
    }
  }
  return taps;
}

}  // namespace

Image bicubic_upscale(const Image& lr, int factor) {
  if (factor < 1) throw DimensionError("bicubic_upscale: factor must be positive");
  if (lr.empty()) throw DimensionError("bicubic_upscale: empty image");
  const int h = lr.height();
  const int w = lr.width();
  const auto col_taps = axis_taps(w, factor);
  const auto row_taps = axis_taps(h, factor);

  Image horiz(h, w * factor);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w * factor; ++c) {
      const Taps& tp = col_taps[static_cast<std::size_t>(c)];
      double s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += tp.weight[k] * lr(r, tp.index[k]);
      horiz(r, c) = s;
    }
  }
  Image out(h * factor, w * factor);
  for (int r = 0; r < h * factor; ++r) {
    const Taps& tp = row_taps[static_cast<std::size_t>(r)];
    for (int c = 0; c < w * factor; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += tp.weight[k] * horiz(tp.index[k], c);
      out(r, c) = s;
    }
  }
  return out;
}

}  // namespace wenlr
