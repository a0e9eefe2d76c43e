#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wenlr/image.hpp"
#include "wenlr/patch.hpp"

namespace wenlr {

struct SearchConfig {
  int window = 31;                    // L, side of the search window in pixels
  std::size_t max_candidates = 1024;  // hard cap on returned neighbours
  bool exclude_self = false;
  std::optional<double> max_distance;  // optional squared-distance threshold

  void validate(int patch_size) const;
};

/// Neighbours of one query patch, ascending by squared Euclidean distance.
/// Candidates live on the stride-1 origin grid of the image, independent of
/// the reconstruction stride, so they are reported by origin.
struct SimilarPatchSet {
  std::size_t query_index = 0;
  std::vector<Origin> neighbors;
  std::vector<double> distances;

  std::size_t size() const { return neighbors.size(); }
};

/// Returns up to `count` patches whose origins lie in the L x L window
/// centred on patch i. Ties are broken by raster order of origin.
SimilarPatchSet find_similar(const Image& img, const PatchSystem& sys, std::size_t i,
                             const SearchConfig& cfg, std::size_t count);

/// w_k = exp(-d_k / h1) / sum_j exp(-d_j / h1).
std::vector<double> similarity_weights(std::span<const double> distances, double h1);

}  // namespace wenlr
