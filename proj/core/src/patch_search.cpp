#include "wenlr/patch_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace wenlr {

void SearchConfig::validate(int patch_size) const {
  if (window < patch_size || window % 2 == 0) {
    throw std::invalid_argument("search window must be odd and at least the patch size (got " +
                                std::to_string(window) + ")");
  }
  if (max_candidates < 1) throw std::invalid_argument("max_candidates must be at least 1");
}

SimilarPatchSet find_similar(const Image& img, const PatchSystem& sys, std::size_t i,
                             const SearchConfig& cfg, std::size_t count) {
  if (count < 1) throw std::invalid_argument("find_similar: count must be at least 1");
  if (img.dims() != sys.dims()) throw DimensionError("image does not match patch system");
  const int p = sys.patch_size();
  cfg.validate(p);

  const Origin q = sys.origin(i);
  const int half = cfg.window / 2;
  const int max_row = img.height() - p;
  const int max_col = img.width() - p;
  const int r0 = std::max(0, q.row - half), r1 = std::min(max_row, q.row + half);
  const int c0 = std::max(0, q.col - half), c1 = std::min(max_col, q.col + half);

  struct Candidate {
    double dist;
    int row;
    int col;
  };
  std::vector<Candidate> cands;
  cands.reserve(static_cast<std::size_t>(r1 - r0 + 1) * static_cast<std::size_t>(c1 - c0 + 1));

  const int width = img.width();
  const double* base = img.data().data();
  const double* qp = base + static_cast<std::size_t>(q.row) * width + q.col;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (cfg.exclude_self && r == q.row && c == q.col) continue;
      const double* cp = base + static_cast<std::size_t>(r) * width + c;
      double d = 0.0;
      for (int dr = 0; dr < p; ++dr) {
        const double* a = qp + static_cast<std::ptrdiff_t>(dr) * width;
        const double* b = cp + static_cast<std::ptrdiff_t>(dr) * width;
        for (int dc = 0; dc < p; ++dc) {
          const double t = a[dc] - b[dc];
          d += t * t;
        }
      }
      if (cfg.max_distance && d > *cfg.max_distance) continue;
      cands.push_back({d, r, c});
    }
  }

  // Candidates were generated in raster order, so (dist, row, col) is the
  // full ordering.
  const auto less = [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
  };
  const std::size_t keep = std::min({count, cfg.max_candidates, cands.size()});
  std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                    less);

  SimilarPatchSet out;
  out.query_index = i;
  out.neighbors.reserve(keep);
  out.distances.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) {
    out.neighbors.push_back({cands[k].row, cands[k].col});
    out.distances.push_back(cands[k].dist);
  }
  return out;
}

std::vector<double> similarity_weights(std::span<const double> distances, double h1) {
  if (distances.empty()) throw std::invalid_argument("similarity_weights: no distances");
  if (!(h1 > 0.0)) throw std::invalid_argument("similarity_weights: h1 must be positive");
  // Shifting by the minimum leaves the normalized weights unchanged and keeps
  // the largest term at exp(0).
  const double d0 = *std::min_element(distances.begin(), distances.end());
  std::vector<double> w(distances.size());
  double total = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = std::exp(-(distances[k] - d0) / h1);
    total += w[k];
  }
  for (double& v : w) v /= total;
  return w;
}

}  // namespace wenlr
