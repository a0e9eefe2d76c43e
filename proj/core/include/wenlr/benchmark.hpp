#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wenlr/image.hpp"
#include "wenlr/solver.hpp"

namespace wenlr {

inline constexpr const char* kMethodBicubic = "bicubic";
inline constexpr const char* kMethodNlr = "nlr";

struct BenchmarkOptions {
  std::filesystem::path dataset;
  std::vector<int> factors{2};
  std::vector<std::string> methods{kMethodBicubic, kMethodNlr};
  SolverConfig config;
  int workers = 1;
  std::function<void(const std::string&)> progress;
};

struct BenchmarkRecord {
  std::string image;
  int factor = 0;
  std::string method;
  double psnr = 0.0;
  double ssim = 0.0;
  double seconds = 0.0;
  std::string fingerprint;
  bool failed = false;
  std::string error;
  std::optional<ConvergenceReport> report;  // nlr rows only
};

struct BenchmarkAverage {
  int factor = 0;
  std::string method;
  double psnr = 0.0;
  double ssim = 0.0;
  std::size_t count = 0;
};

struct BenchmarkTable {
  std::vector<BenchmarkRecord> rows;
  std::vector<BenchmarkAverage> averages;
  std::string fingerprint;

  std::size_t successes() const;
  const BenchmarkAverage* average(int factor, const std::string& method) const;
};

/// Largest centred crop whose dimensions are multiples of `factor`.
Image center_crop_to_multiple(const Image& img, int factor);

/// Sorted list of .pgm/.png files in `dir`.
std::vector<std::filesystem::path> list_dataset(const std::filesystem::path& dir);

/// Runs one method on one ground-truth image (already cropped); returns the
/// 8-bit quantized reconstruction.
Image run_method(const std::string& method, const Image& lr, int factor, const SolverConfig& cfg,
                 ConvergenceReport* report = nullptr);

/// Crop, down-sample, reconstruct and score every (image, factor, method).
/// Rows are ordered by factor, then image name, then method order; results
/// are independent of the worker count.
BenchmarkTable run_benchmark(const BenchmarkOptions& options);

void compute_averages(BenchmarkTable& table, const std::vector<int>& factors,
                      const std::vector<std::string>& methods);

/// CSV with header image,factor,method,psnr,ssim,fingerprint; failed rows
/// carry FAILED in the metric columns; average rows use image "Average".
void write_csv(std::ostream& out, const BenchmarkTable& table);
/// Aligned plain-text table with the same values as the CSV.
void write_text_table(std::ostream& out, const BenchmarkTable& table);
/// Per-row wall times (kept out of the CSV so it stays reproducible).
void write_timings(std::ostream& out, const BenchmarkTable& table);

struct CsvRow {
  std::string image;
  int factor = 0;
  std::string method;
  std::string psnr;
  std::string ssim;
  std::string fingerprint;
};
std::vector<CsvRow> parse_csv(std::istream& in);

}  // namespace wenlr
