#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wenlr/image.hpp"

namespace wenlr {

struct Origin {
  int row = 0;
  int col = 0;
  friend bool operator==(const Origin&, const Origin&) = default;
};

/// Geometry of the square patches that tile an image.
///
/// Origins are laid out on a `stride` grid along each axis; the last origin
/// on each axis is clamped to `extent - patch_size` so patches never leave
/// the image and every pixel is covered. Patch vectors are flattened
/// row-major: element `dr * patch_size + dc` is pixel (row + dr, col + dc).
class PatchSystem {
 public:
  PatchSystem(Dims dims, int patch_size = 5, int stride = 1);

  Dims dims() const { return dims_; }
  int patch_size() const { return patch_size_; }
  int stride() const { return stride_; }
  std::size_t patch_length() const {
    return static_cast<std::size_t>(patch_size_) * static_cast<std::size_t>(patch_size_);
  }
  std::size_t count() const { return origins_.size(); }
  const std::vector<Origin>& origins() const { return origins_; }
  Origin origin(std::size_t i) const;
  /// Linear index of the centre pixel of patch i.
  std::size_t center_index(std::size_t i) const;

  std::vector<double> extract(const Image& img, std::size_t i) const;
  void extract(const Image& img, std::size_t i, std::span<double> out) const;
  /// Adds `values` into `acc` over the window of patch i (R_i^T v).
  void place(std::span<const double> values, std::size_t i, Image& acc) const;

  /// Per-pixel number of patches covering it (diagonal of sum R_i^T R_i).
  Image counts() const;

 private:
  Dims dims_;
  int patch_size_;
  int stride_;
  std::vector<Origin> origins_;
};

/// Extracts a window at an arbitrary origin (not necessarily a system origin).
void extract_window(const Image& img, Origin at, int patch_size, std::span<double> out);

struct PatchAggregate {
  Image sum;
  Image counts;
};

/// Accumulates R_i^T p_i for all patches; `patches` holds K*p^2 values, patch
/// i occupying the i-th block of p^2.
PatchAggregate aggregate_patches(std::span<const double> patches, const PatchSystem& sys);
PatchAggregate aggregate_patches(const std::vector<std::vector<double>>& patches,
                                 const PatchSystem& sys);

/// sum ⊘ counts.
Image normalize(const PatchAggregate& agg);

}  // namespace wenlr
