#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "test_util.hpp"
#include "wenlr/benchmark.hpp"
#include "wenlr/config.hpp"
#include "wenlr/image_io.hpp"

using namespace wenlr;

namespace {

std::filesystem::path make_dataset(const std::string& name, int count) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    write_pgm(dir / ("img" + std::to_string(i) + ".pgm"),
              quantize(test::synthetic_scene(33 + i, 35)));
  }
  return dir;
}

SolverConfig fast_config() {
  SolverConfig cfg;
  cfg.iterations = 1;
  cfg.window = 11;
  return cfg;
}

}  // namespace

TEST(Config, ParseCommentsAndPrefixes) {
  std::istringstream in("# header\n gamma = 0.2 \n--mu=0.5 # trailing\n\nwindow=21\n");
  const KeyValues kv = parse_config(in);
  ASSERT_EQ(kv.size(), 3u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"gamma", "0.2"}));
  EXPECT_EQ(kv[1].first, "mu");
  SolverConfig cfg;
  for (const auto& [k, v] : kv) EXPECT_TRUE(apply_config_value(cfg, k, v));
  EXPECT_EQ(cfg.gamma, 0.2);
  EXPECT_EQ(cfg.mu_init, 0.5);
  EXPECT_EQ(cfg.window, 21);
}

TEST(Config, RejectsMalformed) {
  std::istringstream bad("gamma 0.2\n");
  EXPECT_THROW(parse_config(bad), std::invalid_argument);
  SolverConfig cfg;
  EXPECT_THROW(apply_config_value(cfg, "gamma", "abc"), std::invalid_argument);
  EXPECT_THROW(apply_config_value(cfg, "iterations", "2.5"), std::invalid_argument);
  EXPECT_FALSE(apply_config_value(cfg, "no-such-key", "1"));
  EXPECT_THROW(read_config_file("/nonexistent/config.txt"), IoError);
}

TEST(Config, KeyValuesRoundTrip) {
  SolverConfig cfg;
  cfg.gamma = 0.123456789012345;
  cfg.iterations = 7;
  cfg.verify_dictionaries = true;
  SolverConfig back;
  for (const auto& [k, v] : config_to_key_values(cfg)) ASSERT_TRUE(apply_config_value(back, k, v));
  EXPECT_EQ(config_to_key_values(back), config_to_key_values(cfg));
  EXPECT_EQ(config_fingerprint(back), config_fingerprint(cfg));
  cfg.gamma += 1e-12;
  EXPECT_NE(config_fingerprint(back), config_fingerprint(cfg));
  EXPECT_EQ(config_fingerprint(cfg).size(), 16u);
}

TEST(Benchmark, CenterCrop) {
  Image img(7, 8);
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = static_cast<double>(i);
  const Image c = center_crop_to_multiple(img, 3);
  EXPECT_EQ(c.dims(), (Dims{6, 6}));
  EXPECT_EQ(c(0, 0), img(0, 1));
  EXPECT_EQ(center_crop_to_multiple(img, 1), img);
}

TEST(Benchmark, BicubicOnlySingleImage) {
  const auto dir = make_dataset("wenlr_bm_single", 1);
  BenchmarkOptions opts;
  opts.dataset = dir;
  opts.methods = {kMethodBicubic};
  opts.config = fast_config();
  const BenchmarkTable t = run_benchmark(opts);
  ASSERT_EQ(t.rows.size(), 1u);
  ASSERT_EQ(t.averages.size(), 1u);
  EXPECT_EQ(t.averages[0].psnr, t.rows[0].psnr);
  std::ostringstream csv;
  write_csv(csv, t);
  std::istringstream in(csv.str());
  const auto rows = parse_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].image, "Average");
}

TEST(Benchmark, AveragesCsvTextConsistencyAndWorkers) {
  const auto dir = make_dataset("wenlr_bm_multi", 3);
  BenchmarkOptions opts;
  opts.dataset = dir;
  opts.factors = {2, 3};
  opts.config = fast_config();
  const BenchmarkTable t = run_benchmark(opts);
  ASSERT_EQ(t.rows.size(), 12u);
  EXPECT_EQ(t.successes(), 12u);
  for (const BenchmarkRecord& r : t.rows) EXPECT_EQ(r.fingerprint, t.fingerprint);

  for (int f : opts.factors) {
    for (const std::string& m : opts.methods) {
      double sp = 0.0, ss = 0.0;
      int n = 0;
      for (const BenchmarkRecord& r : t.rows) {
        if (r.factor == f && r.method == m) {
          sp += r.psnr;
          ss += r.ssim;
          ++n;
        }
      }
      const BenchmarkAverage* a = t.average(f, m);
      ASSERT_NE(a, nullptr);
      EXPECT_NEAR(a->psnr, sp / n, 1e-9);
      EXPECT_NEAR(a->ssim, ss / n, 1e-9);
    }
  }

  std::ostringstream csv, text;
  write_csv(csv, t);
  write_text_table(text, t);
  std::istringstream csv_in(csv.str());
  const auto rows = parse_csv(csv_in);
  // Every CSV row appears in the text table with identical tokens.
  std::istringstream text_in(text.str());
  std::vector<std::vector<std::string>> text_rows;
  std::string line;
  while (std::getline(text_in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string s;
    while (ls >> s) tok.push_back(s);
    text_rows.push_back(tok);
  }
  ASSERT_EQ(text_rows.size(), rows.size() + 1);  // header
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& tr = text_rows[i + 1];
    ASSERT_EQ(tr.size(), 5u);
    EXPECT_EQ(tr[0], rows[i].image);
    EXPECT_EQ(tr[1], std::to_string(rows[i].factor));
    EXPECT_EQ(tr[2], rows[i].method);
    EXPECT_EQ(tr[3], rows[i].psnr);
    EXPECT_EQ(tr[4], rows[i].ssim);
    EXPECT_EQ(std::stod(rows[i].psnr), std::stod(tr[3]));
  }

  opts.workers = 3;
  const BenchmarkTable parallel = run_benchmark(opts);
  std::ostringstream csv2;
  write_csv(csv2, parallel);
  EXPECT_EQ(csv2.str(), csv.str());
}

TEST(Benchmark, FailedRowsAreRecorded) {
  const auto dir = make_dataset("wenlr_bm_fail", 1);
  std::ofstream(dir / "broken.pgm") << "P5\n4 4\n255\n";
  BenchmarkOptions opts;
  opts.dataset = dir;
  opts.methods = {kMethodBicubic};
  opts.config = fast_config();
  const BenchmarkTable t = run_benchmark(opts);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_TRUE(t.rows[0].failed);
  EXPECT_EQ(t.rows[0].image, "broken");
  EXPECT_FALSE(t.rows[1].failed);
  EXPECT_EQ(t.averages[0].count, 1u);
  std::ostringstream csv;
  write_csv(csv, t);
  EXPECT_NE(csv.str().find("broken,2,bicubic,FAILED,FAILED"), std::string::npos);
}

TEST(Benchmark, RejectsUnknownMethodAndMissingDir) {
  BenchmarkOptions opts;
  opts.dataset = make_dataset("wenlr_bm_bad", 1);
  opts.methods = {"nedi"};
  EXPECT_THROW(run_benchmark(opts), std::invalid_argument);
  opts.methods = {kMethodBicubic};
  opts.dataset = "/nonexistent/dir";
  EXPECT_THROW(run_benchmark(opts), IoError);
}
