#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "evgap/types.hpp"

namespace evgap {

template <typename T>
struct Image {
  int width = 0;
  int height = 0;
  std::vector<T> data;  // row-major

  Image() = default;
  Image(int h, int w, T fill = T{})
      : width(w), height(h), data(static_cast<std::size_t>(h) * w, fill) {}

  T& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
  const T& at(int y, int x) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }

  std::size_t pixel_count() const { return data.size(); }

  bool operator==(const Image&) const = default;
};

using ImageU8 = Image<std::uint8_t>;
using ImageF = Image<double>;

// Binary PGM (P5), maxval 255.
std::vector<std::uint8_t> encode_pgm(const ImageU8& img);
ImageU8 decode_pgm(const std::uint8_t* data, std::size_t size);
void write_pgm(const std::filesystem::path& path, const ImageU8& img);
ImageU8 read_pgm(const std::filesystem::path& path);

// PFM (Pf), float32 little-endian, rows bottom-to-top. Used for frames that
// carry real values in [0, 1] after normalization.
void write_pfm(const std::filesystem::path& path, const ImageF& img);
ImageF read_pfm(const std::filesystem::path& path);

}  // namespace evgap
