// wenlr command-line tool: downsample, bicubic baseline, interpolation,
// evaluation and benchmark tables.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wenlr/benchmark.hpp"
#include "wenlr/bicubic.hpp"
#include "wenlr/config.hpp"
#include "wenlr/image_io.hpp"
#include "wenlr/metrics.hpp"
#include "wenlr/solver.hpp"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitDims = 2;
constexpr int kExitNumeric = 3;

struct SolverFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

// Every solver key is also a flag of the same name.
void add_solver_flags(CLI::App* cmd, SolverFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key=value config file (flags take precedence)");
  for (const auto& [key, value] : wenlr::config_to_key_values(wenlr::SolverConfig{})) {
    flags.options[key] = cmd->add_option("--" + key, flags.values[key], "default " + value)
                             ->group("Solver parameters");
  }
}

// defaults < config file < flags. Non-solver keys found in the file (e.g.
// factor, workers) are returned for the caller.
wenlr::SolverConfig resolve_config(const SolverFlags& flags, wenlr::KeyValues* extra = nullptr) {
  wenlr::SolverConfig cfg;
  if (!flags.config_path.empty()) {
    for (const auto& [key, value] : wenlr::read_config_file(flags.config_path)) {
      if (!wenlr::apply_config_value(cfg, key, value)) {
        if (extra == nullptr) throw std::invalid_argument("unknown config key '" + key + "'");
        extra->emplace_back(key, value);
      }
    }
  }
  for (const auto& [key, opt] : flags.options) {
    if (opt->count() > 0) wenlr::apply_config_value(cfg, key, flags.values.at(key));
  }
  cfg.validate();
  return cfg;
}

std::optional<std::string> lookup(const wenlr::KeyValues& kv, const std::string& key) {
  std::optional<std::string> found;
  for (const auto& [k, v] : kv) {
    if (k == key) found = v;
  }
  return found;
}

void check_factor(int factor) {
  if (factor != 2 && factor != 3) throw std::invalid_argument("--factor must be 2 or 3");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (char ch : s) {
    if (ch == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else if (ch != ' ') {
      item += ch;
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

double linf_consistency(const wenlr::Image& y, const wenlr::Image& x, int factor) {
  const wenlr::Image dx = wenlr::downsample(x, factor);
  double m = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) m = std::max(m, std::abs(y[i] - dx[i]));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted-encoding nonlocal regression image interpolation"};
  app.require_subcommand(1);

  // downsample
  std::string ds_in, ds_out;
  int ds_factor = 2;
  auto* ds = app.add_subcommand("downsample", "Direct down-sampling (keep every factor-th pixel)");
  ds->add_option("input", ds_in)->required();
  ds->add_option("output", ds_out)->required();
  ds->add_option("--factor", ds_factor)->check(CLI::IsMember({2, 3}));

  // upscale-bicubic
  std::string bc_in, bc_out;
  int bc_factor = 2;
  auto* bc = app.add_subcommand("upscale-bicubic", "Bicubic up-scaling baseline");
  bc->add_option("input", bc_in)->required();
  bc->add_option("output", bc_out)->required();
  bc->add_option("--factor", bc_factor)->check(CLI::IsMember({2, 3}));

  // interpolate
  std::string ip_in, ip_out, ip_report;
  int ip_factor = 2;
  SolverFlags ip_flags;
  auto* ip = app.add_subcommand("interpolate", "Reconstruct a high-resolution image");
  ip->add_option("input", ip_in, "low-resolution image")->required();
  ip->add_option("output", ip_out, "high-resolution PGM")->required();
  auto* ip_factor_opt = ip->add_option("--factor", ip_factor);
  ip->add_option("--report", ip_report, "convergence report path");
  add_solver_flags(ip, ip_flags);

  // evaluate
  std::string ev_ref, ev_test;
  auto* ev = app.add_subcommand("evaluate", "PSNR and SSIM of a test image against a reference");
  ev->add_option("reference", ev_ref)->required();
  ev->add_option("test", ev_test)->required();

  // benchmark
  std::string bm_dataset, bm_output, bm_csv, bm_timings;
  std::string bm_factors = "2", bm_methods = "bicubic,nlr";
  int bm_workers = 1;
  SolverFlags bm_flags;
  auto* bm = app.add_subcommand("benchmark", "PSNR/SSIM table over a dataset directory");
  bm->add_option("dataset", bm_dataset)->required();
  bm->add_option("--output", bm_output, "plain-text table (default: stdout)");
  bm->add_option("--csv", bm_csv, "CSV table (default: <output>.csv)");
  bm->add_option("--timings", bm_timings, "per-row wall times");
  bm->add_option("--factor,--factors", bm_factors, "comma-separated list, e.g. 2,3");
  bm->add_option("--methods", bm_methods, "comma-separated subset of bicubic,nlr");
  auto* bm_workers_opt = bm->add_option("--workers", bm_workers, "concurrent benchmark rows")
                             ->check(CLI::PositiveNumber);
  add_solver_flags(bm, bm_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ds->parsed()) {
      const wenlr::Image img = wenlr::read_image(ds_in);
      const wenlr::Image lr = wenlr::downsample(img, ds_factor);
      wenlr::write_pgm(ds_out, lr);
      std::cout << img.height() << "x" << img.width() << " -> " << lr.height() << "x" << lr.width()
                << '\n';
    } else if (bc->parsed()) {
      const wenlr::Image lr = wenlr::read_image(bc_in);
      const wenlr::Image hr = wenlr::bicubic_upscale(lr, bc_factor);
      wenlr::write_pgm(bc_out, hr);
      std::cout << lr.height() << "x" << lr.width() << " -> " << hr.height() << "x" << hr.width()
                << '\n';
    } else if (ip->parsed()) {
      wenlr::KeyValues extra;
      const wenlr::SolverConfig cfg = resolve_config(ip_flags, &extra);
      for (const auto& [k, v] : extra) {
        if (k == "factor") {
          if (ip_factor_opt->count() == 0) ip_factor = std::stoi(v);
        } else {
          throw std::invalid_argument("unknown config key '" + k + "'");
        }
      }
      check_factor(ip_factor);
      const wenlr::Image y = wenlr::read_image(ip_in);
      const wenlr::InterpolationResult res = wenlr::interpolate(y, ip_factor, cfg);
      wenlr::write_pgm(ip_out, res.image);
      if (!ip_report.empty()) {
        std::ofstream rep(ip_report);
        if (!rep) throw wenlr::IoError("cannot write report " + ip_report);
        rep << "# factor = " << ip_factor << '\n';
        res.report.write_log(rep);
      }
      for (const std::string& w : res.report.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << std::setprecision(6) << "final |y-Dx|_inf = "
                << linf_consistency(y, res.image, ip_factor) << '\n';
    } else if (ev->parsed()) {
      const wenlr::QualityScore q =
          wenlr::evaluate_quality(wenlr::read_image(ev_ref), wenlr::read_image(ev_test));
      std::cout << std::fixed << std::setprecision(4) << "PSNR " << q.psnr << " dB\n"
                << std::setprecision(5) << "SSIM " << q.ssim << '\n';
    } else if (bm->parsed()) {
      wenlr::KeyValues extra;
      wenlr::BenchmarkOptions opts;
      opts.config = resolve_config(bm_flags, &extra);
      for (const auto& [k, v] : extra) {
        if (k == "workers") {
          if (bm_workers_opt->count() == 0) bm_workers = std::stoi(v);
        } else {
          throw std::invalid_argument("unknown config key '" + k + "'");
        }
      }
      opts.dataset = bm_dataset;
      opts.factors.clear();
      for (const std::string& f : split_list(bm_factors)) {
        opts.factors.push_back(std::stoi(f));
        check_factor(opts.factors.back());
      }
      opts.methods = split_list(bm_methods);
      opts.workers = bm_workers;
      opts.progress = [](const std::string& msg) { std::cerr << msg << std::endl; };
      const wenlr::BenchmarkTable table = wenlr::run_benchmark(opts);

      if (bm_output.empty()) {
        wenlr::write_text_table(std::cout, table);
      } else {
        std::ofstream out(bm_output);
        if (!out) throw wenlr::IoError("cannot write " + bm_output);
        wenlr::write_text_table(out, table);
      }
      if (bm_csv.empty() && !bm_output.empty()) bm_csv = bm_output + ".csv";
      if (!bm_csv.empty()) {
        std::ofstream out(bm_csv);
        if (!out) throw wenlr::IoError("cannot write " + bm_csv);
        wenlr::write_csv(out, table);
      }
      if (!bm_timings.empty()) {
        std::ofstream out(bm_timings);
        if (!out) throw wenlr::IoError("cannot write " + bm_timings);
        wenlr::write_timings(out, table);
      }
      return table.successes() > 0 ? 0 : 1;
    }
  } catch (const wenlr::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDims;
  } catch (const wenlr::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
