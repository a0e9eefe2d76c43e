#include "wenlr/patch.hpp"

#include <string>

namespace wenlr {
namespace {

std::vector<int> axis_origins(int extent, int patch, int stride) {
  std::vector<int> out;
  const int last = extent - patch;
  for (int o = 0; o < last; o += stride) out.push_back(o);
  out.push_back(last);
  return out;
}

}  // namespace

PatchSystem::PatchSystem(Dims dims, int patch_size, int stride)
    : dims_(dims), patch_size_(patch_size), stride_(stride) {
  if (patch_size < 1) throw std::invalid_argument("patch size must be positive");
  if (stride < 1) throw std::invalid_argument("patch stride must be positive");
  if (dims.height < patch_size) {
    throw DimensionError("height " + std::to_string(dims.height) + " is smaller than patch size",
                         "height");
  }
  if (dims.width < patch_size) {
    throw DimensionError("width " + std::to_string(dims.width) + " is smaller than patch size",
                         "width");
  }
  const auto rows = axis_origins(dims.height, patch_size, stride);
  const auto cols = axis_origins(dims.width, patch_size, stride);
  origins_.reserve(rows.size() * cols.size());
  for (int r : rows) {
    for (int c : cols) origins_.push_back({r, c});
  }
}

Origin PatchSystem::origin(std::size_t i) const {
  if (i >= origins_.size()) {
    throw std::out_of_range("patch index " + std::to_string(i) + " out of range (K=" +
                            std::to_string(origins_.size()) + ")");
  }
  return origins_[i];
}

std::size_t PatchSystem::center_index(std::size_t i) const {
  const Origin o = origin(i);
  const int h = patch_size_ / 2;
  return static_cast<std::size_t>(o.row + h) * static_cast<std::size_t>(dims_.width) +
         static_cast<std::size_t>(o.col + h);
}

std::vector<double> PatchSystem::extract(const Image& img, std::size_t i) const {
  std::vector<double> out(patch_length());
  extract(img, i, out);
  return out;
}

void PatchSystem::extract(const Image& img, std::size_t i, std::span<double> out) const {
  if (img.dims() != dims_) throw DimensionError("image does not match patch system");
  if (out.size() != patch_length()) throw std::invalid_argument("patch buffer has wrong length");
  extract_window(img, origin(i), patch_size_, out);
}

void PatchSystem::place(std::span<const double> values, std::size_t i, Image& acc) const {
  if (acc.dims() != dims_) throw DimensionError("image does not match patch system");
  if (values.size() != patch_length()) throw std::invalid_argument("patch has wrong length");
  const Origin o = origin(i);
  for (int dr = 0; dr < patch_size_; ++dr) {
    double* row = &acc(o.row + dr, o.col);
    const double* src = values.data() + static_cast<std::size_t>(dr * patch_size_);
    for (int dc = 0; dc < patch_size_; ++dc) row[dc] += src[dc];
  }
}

Image PatchSystem::counts() const {
  Image c(dims_);
  for (const Origin& o : origins_) {
    for (int dr = 0; dr < patch_size_; ++dr) {
      for (int dc = 0; dc < patch_size_; ++dc) c(o.row + dr, o.col + dc) += 1.0;
    }
  }
  return c;
}

void extract_window(const Image& img, Origin at, int patch_size, std::span<double> out) {
  for (int dr = 0; dr < patch_size; ++dr) {
    const double* row = img.data().data() + img.index(at.row + dr, at.col);
    double* dst = out.data() + static_cast<std::size_t>(dr * patch_size);
    for (int dc = 0; dc < patch_size; ++dc) dst[dc] = row[dc];
  }
}

PatchAggregate aggregate_patches(std::span<const double> patches, const PatchSystem& sys) {
  const std::size_t len = sys.patch_length();
  if (patches.size() != sys.count() * len) {
    throw std::invalid_argument("expected " + std::to_string(sys.count()) + " patches of length " +
                                std::to_string(len));
  }
  PatchAggregate agg{Image(sys.dims()), sys.counts()};
  for (std::size_t i = 0; i < sys.count(); ++i) {
    sys.place(patches.subspan(i * len, len), i, agg.sum);
  }
  return agg;
}

PatchAggregate aggregate_patches(const std::vector<std::vector<double>>& patches,
                                 const PatchSystem& sys) {
  if (patches.size() != sys.count()) {
    throw std::invalid_argument("expected " + std::to_string(sys.count()) + " patches, got " +
                                std::to_string(patches.size()));
  }
  PatchAggregate agg{Image(sys.dims()), sys.counts()};
  for (std::size_t i = 0; i < patches.size(); ++i) sys.place(patches[i], i, agg.sum);
  return agg;
}

Image normalize(const PatchAggregate& agg) {
  Image out(agg.sum.dims());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = agg.sum[k] / agg.counts[k];
  return out;
}

}  // namespace wenlr
