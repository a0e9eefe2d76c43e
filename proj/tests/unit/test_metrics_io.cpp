#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "test_util.hpp"
#include "wenlr/bicubic.hpp"
#include "wenlr/image_io.hpp"
#include "wenlr/metrics.hpp"

using namespace wenlr;

TEST(Psnr, ClosedForms) {
  const Image a = test::random_image(16, 16, 1);
  EXPECT_EQ(psnr(a, a), std::numeric_limits<double>::infinity());
  EXPECT_TRUE(evaluate_quality(a, a).identical());
  const Image z(16, 16, 0.2), o(16, 16, 0.3);
  EXPECT_NEAR(psnr(z, o), 20.0, 1e-12);
  EXPECT_THROW(psnr(Image(3, 3), Image(3, 4)), DimensionError);
}

TEST(Psnr, SymmetricAndMonotone) {
  const Image a = test::random_image(20, 20, 2);
  const auto noise = test::random_vector(a.size(), 3);
  double prev = std::numeric_limits<double>::infinity();
  for (double mag : {0.001, 0.01, 0.05, 0.2}) {
    Image b = a;
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += mag * noise[i];
    EXPECT_EQ(psnr(a, b), psnr(b, a));
    EXPECT_LT(psnr(a, b), prev);
    prev = psnr(a, b);
  }
}

TEST(Ssim, IdentityBoundsAndAnticorrelation) {
  const Image a = test::random_image(24, 24, 4);
  EXPECT_EQ(ssim(a, a), 1.0);
  const Image b = test::random_image(24, 24, 5);
  const double s = ssim(a, b);
  EXPECT_GE(s, -1.0);
  EXPECT_LE(s, 1.0);

  Image bin(24, 24), inv(24, 24);
  for (int r = 0; r < 24; ++r) {
    for (int c = 0; c < 24; ++c) {
      bin(r, c) = ((r / 3 + c / 3) % 2 == 0) ? 1.0 : 0.0;
      inv(r, c) = 1.0 - bin(r, c);
    }
  }
  EXPECT_LT(ssim(bin, inv), 0.0);
  EXPECT_THROW(ssim(Image(10, 10), Image(10, 10)), DimensionError);
}

TEST(Ssim, MatchesDirectWindowSum) {
  // Direct evaluation with a non-separable 11x11 window as an oracle.
  const Image a = test::random_image(14, 13, 6);
  Image b = a;
  const auto n = test::random_vector(b.size(), 8);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = 0.7 * b[i] + 0.1 * n[i] + 0.1;
  double g[11], gs = 0.0;
  for (int k = 0; k < 11; ++k) gs += (g[k] = std::exp(-((k - 5) * (k - 5)) / (2 * 1.5 * 1.5)));
  const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  double total = 0.0;
  int windows = 0;
  for (int r0 = 0; r0 + 11 <= a.height(); ++r0) {
    for (int c0 = 0; c0 + 11 <= a.width(); ++c0) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int r = 0; r < 11; ++r) {
        for (int c = 0; c < 11; ++c) {
          const double w = g[r] * g[c] / (gs * gs);
          const double x = a(r0 + r, c0 + c), y = b(r0 + r, c0 + c);
          ma += w * x;
          mb += w * y;
          saa += w * x * x;
          sbb += w * y * y;
          sab += w * x * y;
        }
      }
      const double va = saa - ma * ma, vb = sbb - mb * mb, cov = sab - ma * mb;
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++windows;
    }
  }
  EXPECT_NEAR(ssim(a, b), total / windows, 1e-12);
}

TEST(Bicubic, KernelValues) {
  EXPECT_EQ(cubic_kernel(0.0), 1.0);
  EXPECT_EQ(cubic_kernel(1.0), 0.0);
  EXPECT_EQ(cubic_kernel(2.0), 0.0);
  EXPECT_EQ(cubic_kernel(2.5), 0.0);
  EXPECT_NEAR(cubic_kernel(0.5), 0.5625, 1e-15);
  EXPECT_NEAR(cubic_kernel(1.5), -0.0625, 1e-15);
}

TEST(Bicubic, ConstantGridAndRamp) {
  for (int l : {2, 3}) {
    const Image c = bicubic_upscale(Image(5, 6, 0.4), l);
    EXPECT_EQ(c.dims(), (Dims{5 * l, 6 * l}));
    for (double v : c.data()) EXPECT_NEAR(v, 0.4, 1e-15);

    const Image lr = test::random_image(7, 5, 3);
    EXPECT_EQ(downsample(bicubic_upscale(lr, l), l), lr);

    Image ramp(8, 8);
    for (int r = 0; r < 8; ++r) {
      for (int cc = 0; cc < 8; ++cc) ramp(r, cc) = 0.05 * r + 0.02 * cc;
    }
    const Image up = bicubic_upscale(ramp, l);
    // Interior (away from replicated borders) reproduces the ramp exactly.
    for (int r = 2 * l; r < 5 * l; ++r) {
      for (int cc = 2 * l; cc < 5 * l; ++cc) {
        EXPECT_NEAR(up(r, cc), 0.05 * r / l + 0.02 * cc / l, 1e-14);
      }
    }
  }
}

TEST(Bicubic, DownUpDownRoundTrip) {
  const Image hr = test::random_image(24, 18, 9);
  const Image lr = downsample(hr, 2);
  EXPECT_EQ(downsample(bicubic_upscale(lr, 2), 2), lr);
}

TEST(Quantize, RoundHalfUpAndClamp) {
  EXPECT_EQ(quantize(0.0), 0);
  EXPECT_EQ(quantize(1.0), 255);
  EXPECT_EQ(quantize(-0.3), 0);
  EXPECT_EQ(quantize(1.7), 255);
  EXPECT_EQ(quantize(0.5 / 255.0), 1);
  EXPECT_EQ(quantize(100.0 / 255.0), 100);
}

TEST(Pgm, EncodeDecodeRoundTrip) {
  Image img = test::random_image(7, 11, 3);
  img = quantize(img);
  EXPECT_EQ(decode_pgm(encode_pgm(img)), img);
  const std::string with_comment = "P5\n# comment\n2 1\n255\n\x01\x02";
  const Image d = decode_pgm(with_comment);
  EXPECT_EQ(d.dims(), (Dims{1, 2}));
  EXPECT_NEAR(d[1], 2.0 / 255.0, 1e-15);
  EXPECT_THROW(decode_pgm("P2\n1 1\n255\n0"), IoError);
  EXPECT_THROW(decode_pgm("P5\n2 2\n255\n\x01"), IoError);
}

TEST(Pgm, FileRoundTripAndMissingFile) {
  const auto dir = std::filesystem::temp_directory_path() / "wenlr_io_test";
  std::filesystem::create_directories(dir);
  const Image img = quantize(test::random_image(5, 4, 1));
  write_pgm(dir / "a.pgm", img);
  EXPECT_EQ(read_image(dir / "a.pgm"), img);
  EXPECT_THROW(read_image(dir / "missing.pgm"), IoError);
  std::ofstream(dir / "junk.bin") << "not an image";
  EXPECT_THROW(read_image(dir / "junk.bin"), IoError);
}

TEST(Dataset, BundledImagesLoad) {
  for (const char* name : {"lena", "cameraman", "baboon", "monarch", "barbara", "parrots"}) {
    const Image img = read_image(std::string(WENLR_DATA_DIR) + "/" + name + ".pgm");
    EXPECT_EQ(img.dims(), (Dims{256, 256})) << name;
  }
}
