#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace levelgen {

struct Rgba {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  std::uint8_t a = 255;

  bool operator==(const Rgba&) const = default;
};

/// Row-major RGBA raster.
class RgbaImage {
 public:
  RgbaImage() = default;
  RgbaImage(int width, int height, Rgba fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  const Rgba& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  Rgba& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  const std::vector<Rgba>& pixels() const { return pixels_; }

  bool operator==(const RgbaImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgba> pixels_;
};

class ImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ImageError for unreadable or corrupt files.
RgbaImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RgbaImage& image);

}  // namespace levelgen
