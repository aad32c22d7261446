#include "levelgen/render.hpp"

#include <cctype>
#include <cmath>
#include <set>

namespace levelgen {

std::vector<char> type_glyphs(const SpriteCatalog& catalog) {
  static const std::string alphabet = "#@%&*+=~^0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::set<char> used{'.'};
  std::vector<char> out;
  for (const auto& e : catalog.entries()) {
    char pick = 0;
    if (!e.name.empty()) {
      const auto first = static_cast<unsigned char>(e.name.front());
      for (char c : {static_cast<char>(std::tolower(first)), static_cast<char>(std::toupper(first))}) {
        if (std::isgraph(static_cast<unsigned char>(c)) && !used.count(c)) {
          pick = c;
          break;
        }
      }
    }
    for (std::size_t i = 0; !pick && i < alphabet.size(); ++i) {
      if (!used.count(alphabet[i])) pick = alphabet[i];
    }
    if (!pick) pick = '?';
    used.insert(pick);
    out.push_back(pick);
  }
  return out;
}

std::string ascii_grid(const Frame& frame, const SpriteCatalog& catalog) {
  const auto glyphs = type_glyphs(catalog);
  std::vector<std::string> rows(static_cast<std::size_t>(frame.height()), std::string(frame.width(), '.'));
  std::vector<TypeId> shown(static_cast<std::size_t>(frame.width()) * frame.height(), -1);
  for (const auto& s : frame.instances()) {
    auto& cell = shown[static_cast<std::size_t>(s.y) * frame.width() + s.x];
    if (cell >= 0 && cell < s.type) continue;
    cell = s.type;
    rows[static_cast<std::size_t>(s.y)][static_cast<std::size_t>(s.x)] = glyphs.at(static_cast<std::size_t>(s.type));
  }
  std::string out;
  for (const auto& r : rows) out += r + "\n";
  return out;
}

std::string glyph_legend(const SpriteCatalog& catalog) {
  const auto glyphs = type_glyphs(catalog);
  std::string out;
  for (const auto& e : catalog.entries()) {
    out += glyphs[static_cast<std::size_t>(e.id)];
    out += " " + e.name + "\n";
  }
  return out;
}

SpriteAtlas tinted_atlas(const SpriteCatalog& catalog) {
  SpriteAtlas atlas;
  atlas.tile_size_px = catalog.tile_size_px();
  atlas.background = {235, 240, 250, 255};
  for (const auto& e : catalog.entries()) {
    const double hue = std::fmod(e.id * 0.618033988749895, 1.0) * 6.0;
    const int sector = static_cast<int>(hue);
    const double f = hue - sector;
    const double v = 0.85;
    const double s = 0.7;
    const double p = v * (1 - s);
    const double q = v * (1 - s * f);
    const double t = v * (1 - s * (1 - f));
    double r = v, g = t, b = p;
    switch (sector % 6) {
      case 1: r = q; g = v; b = p; break;
      case 2: r = p; g = v; b = t; break;
      case 3: r = p; g = q; b = v; break;
      case 4: r = t; g = p; b = v; break;
      case 5: r = v; g = p; b = q; break;
      default: break;
    }
    const Rgba fill{static_cast<std::uint8_t>(r * 255), static_cast<std::uint8_t>(g * 255),
                    static_cast<std::uint8_t>(b * 255), 255};
    const Rgba edge{static_cast<std::uint8_t>(r * 120), static_cast<std::uint8_t>(g * 120),
                    static_cast<std::uint8_t>(b * 120), 255};
    const int w = e.tile_w * atlas.tile_size_px;
    const int h = e.tile_h * atlas.tile_size_px;
    RgbaImage img(w, h, fill);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (x == 0 || y == 0 || x == w - 1 || y == h - 1) img.at(x, y) = edge;
      }
    }
    atlas.templates.push_back(std::move(img));
  }
  return atlas;
}

}  // namespace levelgen
