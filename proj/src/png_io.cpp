#include "levelgen/png_io.hpp"

#include <cstring>

#include <png.h>

namespace levelgen {

RgbaImage::RgbaImage(int width, int height, Rgba fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw std::invalid_argument("RgbaImage: negative extent");
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

RgbaImage read_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.string().c_str())) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw ImageError(path.string() + ": " + msg);
  }
  img.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw ImageError(path.string() + ": " + msg);
  }
  RgbaImage out(static_cast<int>(img.width), static_cast<int>(img.height));
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const std::size_t i = 4 * (static_cast<std::size_t>(y) * out.width() + x);
      out.at(x, y) = {buffer[i], buffer[i + 1], buffer[i + 2], buffer[i + 3]};
    }
  }
  return out;
}

void write_png(const std::filesystem::path& path, const RgbaImage& image) {
  if (image.width() == 0 || image.height() == 0) throw ImageError(path.string() + ": empty image");
  std::vector<std::uint8_t> buffer;
  buffer.reserve(image.pixels().size() * 4);
  for (const auto& p : image.pixels()) {
    buffer.insert(buffer.end(), {p.r, p.g, p.b, p.a});
  }
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_RGBA;
  if (!png_image_write_to_file(&img, path.string().c_str(), 0, buffer.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw ImageError(path.string() + ": " + msg);
  }
}

}  // namespace levelgen
