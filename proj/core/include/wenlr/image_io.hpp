#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "wenlr/image.hpp"

namespace wenlr {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 8-bit quantization used on save: round-half-up of v * 255 after
/// clamping to [0,1].
std::uint8_t quantize(double v);
/// Re-samples an image through the 8-bit representation.
Image quantize(const Image& img);

/// Reads binary PGM (P5, maxval <= 255) or 8-bit PNG, chosen by the file's
/// magic bytes. Samples are scaled to [0,1].
Image read_image(const std::filesystem::path& path);
Image read_pgm(const std::filesystem::path& path);
Image read_png(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const Image& img);

/// P5 encoding of `img` as an in-memory byte string.
std::string encode_pgm(const Image& img);
Image decode_pgm(const std::string& bytes);

}  // namespace wenlr
