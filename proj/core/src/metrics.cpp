#include "wenlr/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace wenlr {
namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> g{};
  double total = 0.0;
  for (int k = 0; k < kWindow; ++k) {
    const double d = k - kWindow / 2;
    g[static_cast<std::size_t>(k)] = std::exp(-(d * d) / (2.0 * kSigma * kSigma));
    total += g[static_cast<std::size_t>(k)];
  }
  for (double& v : g) v /= total;
  return g;
}

// Separable "valid" filtering of a row-major plane.
std::vector<double> filter_valid(const std::vector<double>& src, int h, int w,
                                 const std::array<double, kWindow>& g) {
  const int ow = w - kWindow + 1;
  const int oh = h - kWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < ow; ++c) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) {
        s += g[static_cast<std::size_t>(k)] * src[static_cast<std::size_t>(r) * w + c + k];
      }
      tmp[static_cast<std::size_t>(r) * ow + c] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int r = 0; r < oh; ++r) {
    for (int c = 0; c < ow; ++c) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) {
        s += g[static_cast<std::size_t>(k)] * tmp[static_cast<std::size_t>(r + k) * ow + c];
      }
      out[static_cast<std::size_t>(r) * ow + c] = s;
    }
  }
  return out;
}

}  // namespace

bool QualityScore::identical() const { return std::isinf(psnr) && psnr > 0.0; }

double psnr(const Image& a, const Image& b, double peak) {
  if (a.dims() != b.dims()) throw DimensionError("psnr: image dimensions differ");
  if (a.empty()) throw DimensionError("psnr: empty images");
  double sse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(a.size());
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Image& a, const Image& b) {
  if (a.dims() != b.dims()) throw DimensionError("ssim: image dimensions differ");
  if (a.height() < kWindow || a.width() < kWindow) {
    throw DimensionError("ssim: images are smaller than the 11x11 window");
  }
  const int h = a.height();
  const int w = a.width();
  const auto g = gaussian_taps();

  std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  const auto mu_a = filter_valid(a.values(), h, w, g);
  const auto mu_b = filter_valid(b.values(), h, w, g);
  const auto e_aa = filter_valid(aa, h, w, g);
  const auto e_bb = filter_valid(bb, h, w, g);
  const auto e_ab = filter_valid(ab, h, w, g);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = e_aa[i] - ma * ma;
    const double vb = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    const double num = (2.0 * ma * mb + kC1) * (2.0 * cov + kC2);
    const double den = (ma * ma + mb * mb + kC1) * (va + vb + kC2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

QualityScore evaluate_quality(const Image& reference, const Image& test) {
  return {psnr(reference, test), ssim(reference, test)};
}

}  // namespace wenlr
