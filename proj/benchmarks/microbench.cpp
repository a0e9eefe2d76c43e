#include <benchmark/benchmark.h>

#include <string>

#include "wenlr/bicubic.hpp"
#include "wenlr/dictionary.hpp"
#include "wenlr/image_io.hpp"
#include "wenlr/patch_search.hpp"
#include "wenlr/solver.hpp"

using namespace wenlr;

namespace {

Image crop(int size) {
  const Image full = read_image(std::string(WENLR_DATA_DIR) + "/lena.pgm");
  Image out(size, size);
  const int off = (full.height() - size) / 2;
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) out(r, c) = full(off + r, off + c);
  }
  return out;
}

void BM_FindSimilar(benchmark::State& st) {
  const Image img = crop(128);
  const PatchSystem sys(img.dims(), 5, 1);
  SearchConfig cfg;
  cfg.window = static_cast<int>(st.range(0));
  std::size_t q = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(find_similar(img, sys, q, cfg, 60));
    q = (q + 1013) % sys.count();
  }
}
BENCHMARK(BM_FindSimilar)->Arg(15)->Arg(31);

void BM_TrainSubdictionary(benchmark::State& st) {
  const Image img = crop(128);
  const PatchSystem sys(img.dims(), 5, 1);
  const SimilarPatchSet s = find_similar(img, sys, sys.count() / 2, SearchConfig{}, 60);
  Eigen::MatrixXd samples(25, static_cast<Eigen::Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) {
    extract_window(img, s.neighbors[j], 5, std::span<double>(samples.col(static_cast<Eigen::Index>(j)).data(), 25));
  }
  for (auto _ : st) benchmark::DoNotOptimize(train_subdictionary(samples));
}
BENCHMARK(BM_TrainSubdictionary);

void BM_ImageUpdateCg(benchmark::State& st) {
  const int size = static_cast<int>(st.range(0));
  SolverConfig cfg;
  const SolverState s = initialize(downsample(crop(size), 2), 2, cfg);
  const PatchSystem sys(s.x.dims(), cfg.patch_size, cfg.stride);
  const IterationModel model = build_iteration_model(s, sys, cfg);
  for (auto _ : st) benchmark::DoNotOptimize(update_image(s, model, sys, cfg));
}
BENCHMARK(BM_ImageUpdateCg)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_OneIteration(benchmark::State& st) {
  SolverConfig cfg;
  cfg.iterations = 1;
  const Image y = downsample(crop(static_cast<int>(st.range(0))), 2);
  for (auto _ : st) benchmark::DoNotOptimize(interpolate(y, 2, cfg));
}
BENCHMARK(BM_OneIteration)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
