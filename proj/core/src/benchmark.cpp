#include "wenlr/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "wenlr/bicubic.hpp"
#include "wenlr/config.hpp"
#include "wenlr/image_io.hpp"
#include "wenlr/metrics.hpp"

namespace wenlr {

std::size_t BenchmarkTable::successes() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const BenchmarkRecord& r) { return !r.failed; }));
}

const BenchmarkAverage* BenchmarkTable::average(int factor, const std::string& method) const {
  for (const BenchmarkAverage& a : averages) {
    if (a.factor == factor && a.method == method) return &a;
  }
  return nullptr;
}

Image center_crop_to_multiple(const Image& img, int factor) {
  if (factor < 1) throw DimensionError("crop factor must be positive");
  const int h = img.height() - img.height() % factor;
  const int w = img.width() - img.width() % factor;
  if (h == 0 || w == 0) throw DimensionError("image is smaller than the scale factor");
  const int r0 = (img.height() - h) / 2;
  const int c0 = (img.width() - w) / 2;
  Image out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) out(r, c) = img(r0 + r, c0 + c);
  }
  return out;
}

std::vector<std::filesystem::path> list_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm" || ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

Image run_method(const std::string& method, const Image& lr, int factor, const SolverConfig& cfg,
                 ConvergenceReport* report) {
  if (method == kMethodBicubic) return quantize(bicubic_upscale(lr, factor));
  if (method == kMethodNlr) {
    InterpolationResult res = interpolate(lr, factor, cfg);
    if (report != nullptr) *report = std::move(res.report);
    return quantize(res.image);
  }
  throw std::invalid_argument("unknown method '" + method + "'");
}

BenchmarkTable run_benchmark(const BenchmarkOptions& options) {
  for (const std::string& m : options.methods) {
    if (m != kMethodBicubic && m != kMethodNlr) {
      throw std::invalid_argument("unknown method '" + m + "'");
    }
  }
  options.config.validate();
  const auto files = list_dataset(options.dataset);
  const std::string fingerprint = config_fingerprint(options.config);

  struct Job {
    std::filesystem::path file;
    int factor;
  };
  std::vector<Job> jobs;
  for (int f : options.factors) {
    for (const auto& file : files) jobs.push_back({file, f});
  }
  const std::size_t per_job = options.methods.size();
  BenchmarkTable table;
  table.fingerprint = fingerprint;
  table.rows.resize(jobs.size() * per_job);

  auto run_job = [&](std::size_t j) {
    const Job& job = jobs[j];
    const std::string name = job.file.stem().string();
    Image truth;
    std::string load_error;
    try {
      truth = center_crop_to_multiple(read_image(job.file), job.factor);
    } catch (const std::exception& e) {
      load_error = e.what();
    }
    for (std::size_t k = 0; k < per_job; ++k) {
      BenchmarkRecord& rec = table.rows[j * per_job + k];
      rec.image = name;
      rec.factor = job.factor;
      rec.method = options.methods[k];
      rec.fingerprint = fingerprint;
      if (!load_error.empty()) {
        rec.failed = true;
        rec.error = load_error;
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      try {
        const Image lr = downsample(truth, job.factor);
        ConvergenceReport report;
        const Image out = run_method(rec.method, lr, job.factor, options.config, &report);
        const QualityScore q = evaluate_quality(truth, out);
        rec.psnr = q.psnr;
        rec.ssim = q.ssim;
        if (rec.method == kMethodNlr) rec.report = std::move(report);
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
      }
      rec.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (options.progress) {
        std::ostringstream msg;
        msg << name << " x" << job.factor << ' ' << rec.method << ": ";
        if (rec.failed) {
          msg << "FAILED (" << rec.error << ")";
        } else {
          msg << std::fixed << std::setprecision(4) << rec.psnr << " dB, SSIM " << rec.ssim;
        }
        msg << " [" << std::setprecision(1) << rec.seconds << " s]";
        options.progress(msg.str());
      }
    }
  };

  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(jobs.size())));
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) run_job(j);
      });
    }
    for (auto& t : pool) t.join();
  }

  compute_averages(table, options.factors, options.methods);
  return table;
}

void compute_averages(BenchmarkTable& table, const std::vector<int>& factors,
                      const std::vector<std::string>& methods) {
  table.averages.clear();
  for (int f : factors) {
    for (const std::string& m : methods) {
      BenchmarkAverage avg{f, m, 0.0, 0.0, 0};
      for (const BenchmarkRecord& r : table.rows) {
        if (r.failed || r.factor != f || r.method != m) continue;
        avg.psnr += r.psnr;
        avg.ssim += r.ssim;
        ++avg.count;
      }
      if (avg.count > 0) {
        avg.psnr /= static_cast<double>(avg.count);
        avg.ssim /= static_cast<double>(avg.count);
      }
      table.averages.push_back(avg);
    }
  }
}

namespace {

std::string fmt_psnr(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fmt_ssim(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

struct Line {
  std::string image, factor, method, psnr, ssim;
};

std::vector<Line> table_lines(const BenchmarkTable& t) {
  std::vector<Line> lines;
  for (const BenchmarkRecord& r : t.rows) {
    lines.push_back({r.image, std::to_string(r.factor), r.method,
                     r.failed ? "FAILED" : fmt_psnr(r.psnr), r.failed ? "FAILED" : fmt_ssim(r.ssim)});
  }
  for (const BenchmarkAverage& a : t.averages) {
    const bool none = a.count == 0;
    lines.push_back({"Average", std::to_string(a.factor), a.method, none ? "FAILED" : fmt_psnr(a.psnr),
                     none ? "FAILED" : fmt_ssim(a.ssim)});
  }
  return lines;
}

}  // namespace

void write_csv(std::ostream& out, const BenchmarkTable& table) {
  out << "image,factor,method,psnr,ssim,fingerprint\n";
  for (const Line& l : table_lines(table)) {
    out << l.image << ',' << l.factor << ',' << l.method << ',' << l.psnr << ',' << l.ssim << ','
        << table.fingerprint << '\n';
  }
}

void write_text_table(std::ostream& out, const BenchmarkTable& table) {
  const auto lines = table_lines(table);
  std::size_t wi = 5, wm = 6;
  for (const Line& l : lines) {
    wi = std::max(wi, l.image.size());
    wm = std::max(wm, l.method.size());
  }
  out << "# config fingerprint " << table.fingerprint << '\n';
  out << std::left << std::setw(static_cast<int>(wi)) << "image" << "  " << std::setw(6) << "factor"
      << "  " << std::setw(static_cast<int>(wm)) << "method" << "  " << std::right << std::setw(12)
      << "psnr" << "  " << std::setw(10) << "ssim" << '\n';
  for (const Line& l : lines) {
    out << std::left << std::setw(static_cast<int>(wi)) << l.image << "  " << std::setw(6)
        << l.factor << "  " << std::setw(static_cast<int>(wm)) << l.method << "  " << std::right
        << std::setw(12) << l.psnr << "  " << std::setw(10) << l.ssim << '\n';
  }
  for (const BenchmarkRecord& r : table.rows) {
    if (r.failed) out << "# " << r.image << " x" << r.factor << ' ' << r.method << ": " << r.error << '\n';
  }
}

void write_timings(std::ostream& out, const BenchmarkTable& table) {
  out << "image,factor,method,seconds\n";
  for (const BenchmarkRecord& r : table.rows) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", r.seconds);
    out << r.image << ',' << r.factor << ',' << r.method << ',' << buf << '\n';
  }
}

std::vector<CsvRow> parse_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw std::invalid_argument("malformed CSV row: " + line);
    rows.push_back({cells[0], std::stoi(cells[1]), cells[2], cells[3], cells[4], cells[5]});
  }
  return rows;
}

}  // namespace wenlr
