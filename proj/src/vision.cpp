#include "levelgen/vision.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <tuple>

#include "levelgen/detail/json_util.hpp"
#include "levelgen/trace_io.hpp"

namespace levelgen {

namespace {

struct OpaquePixel {
  int u = 0;
  int v = 0;
  int r = 0;
  int g = 0;
  int b = 0;
};

struct PreparedTemplate {
  int w = 0;
  int h = 0;
  int tiles_w = 1;
  int tiles_h = 1;
  std::vector<OpaquePixel> opaque;
};

std::vector<PreparedTemplate> prepare(const SpriteAtlas& atlas) {
  std::vector<PreparedTemplate> out;
  for (const auto& t : atlas.templates) {
    PreparedTemplate p;
    p.w = t.width();
    p.h = t.height();
    p.tiles_w = std::max(1, p.w / atlas.tile_size_px);
    p.tiles_h = std::max(1, p.h / atlas.tile_size_px);
    for (int v = 0; v < p.h; ++v) {
      for (int u = 0; u < p.w; ++u) {
        const auto& px = t.at(u, v);
        if (px.a != 0) p.opaque.push_back({u, v, px.r, px.g, px.b});
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

int wrap(int v, int n) {
  const int m = v % n;
  return m < 0 ? m + n : m;
}

double error_at(const RgbaImage& frame, const PreparedTemplate& t, int px, int py, double tolerance) {
  if (t.opaque.empty()) return std::numeric_limits<double>::infinity();
  const double budget = tolerance * 3.0 * static_cast<double>(t.opaque.size());
  double sum = 0.0;
  const int fw = frame.width();
  const int fh = frame.height();
  for (const auto& o : t.opaque) {
    const auto& f = frame.at(wrap(px + o.u, fw), wrap(py + o.v, fh));
    const double dr = f.r - o.r;
    const double dg = f.g - o.g;
    const double db = f.b - o.b;
    sum += dr * dr + dg * dg + db * db;
    if (sum > budget) return std::numeric_limits<double>::infinity();
  }
  return sum / (3.0 * static_cast<double>(t.opaque.size()));
}

struct Grid {
  int cols = 0;
  int rows = 0;
};

Grid grid_of(const RgbaImage& frame, int tile) { return {frame.width() / tile, frame.height() / tile}; }

struct Best {
  double error = std::numeric_limits<double>::infinity();
  TypeId type = -1;
};

Best best_at(const RgbaImage& frame, const std::vector<PreparedTemplate>& templates, const Grid& grid, int tile,
             ScrollOffset off, int tx, int ty, double tolerance) {
  Best best;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    const auto& tp = templates[t];
    if (tx + tp.tiles_w > grid.cols || ty + tp.tiles_h > grid.rows) continue;
    const double e = error_at(frame, tp, tx * tile + off.dx, ty * tile + off.dy, tolerance);
    if (e <= tolerance && e < best.error) best = {e, static_cast<TypeId>(t)};
  }
  return best;
}

}  // namespace

void SpriteAtlas::validate(const SpriteCatalog& catalog) const {
  if (tile_size_px < 1) throw ValidationError("atlas: tile size must be positive");
  if (templates.size() != catalog.size()) {
    throw ValidationError("atlas: " + std::to_string(templates.size()) + " templates for " +
                          std::to_string(catalog.size()) + " catalog entries");
  }
  for (const auto& e : catalog.entries()) {
    const auto& t = templates[static_cast<std::size_t>(e.id)];
    if (t.width() != e.tile_w * tile_size_px || t.height() != e.tile_h * tile_size_px) {
      throw ValidationError("atlas: template for '" + e.name + "' has the wrong size");
    }
    const bool opaque = std::any_of(t.pixels().begin(), t.pixels().end(), [](const Rgba& p) { return p.a != 0; });
    if (!opaque) throw ValidationError("atlas: template for '" + e.name + "' is fully transparent");
  }
}

SpriteAtlas procedural_atlas(const SpriteCatalog& catalog) {
  SpriteAtlas atlas;
  atlas.tile_size_px = catalog.tile_size_px();
  atlas.background = {0, 0, 0, 255};
  for (const auto& e : catalog.entries()) {
    const int w = e.tile_w * atlas.tile_size_px;
    const int h = e.tile_h * atlas.tile_size_px;
    RgbaImage img(w, h, {0, 0, 0, 0});
    const auto red = static_cast<std::uint8_t>(40 + (e.id * 23) % 200);
    for (int v = 0; v < h; ++v) {
      for (int u = 0; u < w; ++u) {
        if (u + v < 2) continue;
        img.at(u, v) = {red, static_cast<std::uint8_t>(u * 256 / w), static_cast<std::uint8_t>(v * 256 / h), 255};
      }
    }
    atlas.templates.push_back(std::move(img));
  }
  return atlas;
}

RgbaImage render_frame(const Frame& frame, const SpriteAtlas& atlas, ScrollOffset scroll) {
  const int ts = atlas.tile_size_px;
  const int w = frame.width() * ts;
  const int h = frame.height() * ts;
  RgbaImage aligned(w, h, atlas.background);
  for (const auto& s : frame.instances()) {
    const auto& t = atlas.templates.at(static_cast<std::size_t>(s.type));
    for (int v = 0; v < t.height(); ++v) {
      for (int u = 0; u < t.width(); ++u) {
        const auto& p = t.at(u, v);
        const int x = s.x * ts + u;
        const int y = s.y * ts + v;
        if (p.a == 0 || x >= w || y >= h) continue;
        aligned.at(x, y) = p;
      }
    }
  }
  if (scroll.dx == 0 && scroll.dy == 0) return aligned;
  RgbaImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.at(wrap(x + scroll.dx, w), wrap(y + scroll.dy, h)) = aligned.at(x, y);
  }
  return out;
}

ScrollOffset detect_scroll_offset(const RgbaImage& frame, const SpriteAtlas& atlas, double tolerance) {
  const int ts = atlas.tile_size_px;
  const auto templates = prepare(atlas);
  const Grid grid = grid_of(frame, ts);
  ScrollOffset best;
  int best_count = -1;
  for (int dy = 0; dy < ts; ++dy) {
    for (int dx = 0; dx < ts; ++dx) {
      int count = 0;
      for (int ty = 0; ty < grid.rows; ++ty) {
        for (int tx = 0; tx < grid.cols; ++tx) {
          count += best_at(frame, templates, grid, ts, {dx, dy}, tx, ty, tolerance).type >= 0;
        }
      }
      if (count > best_count) {
        best_count = count;
        best = {dx, dy};
      }
    }
  }
  return best;
}

std::vector<SpriteInstance> match_frame(const RgbaImage& frame, const SpriteAtlas& atlas, double tolerance,
                                        std::optional<ScrollOffset> offset) {
  const int ts = atlas.tile_size_px;
  const ScrollOffset off = offset ? *offset : detect_scroll_offset(frame, atlas, tolerance);
  const auto templates = prepare(atlas);
  const Grid grid = grid_of(frame, ts);

  struct Claim {
    double error;
    TypeId type;
    int y;
    int x;
  };
  std::vector<Claim> claims;
  for (int ty = 0; ty < grid.rows; ++ty) {
    for (int tx = 0; tx < grid.cols; ++tx) {
      const Best b = best_at(frame, templates, grid, ts, off, tx, ty, tolerance);
      if (b.type >= 0) claims.push_back({b.error, b.type, ty, tx});
    }
  }
  std::sort(claims.begin(), claims.end(), [](const Claim& a, const Claim& b) {
    return std::tie(a.error, a.type, a.y, a.x) < std::tie(b.error, b.type, b.y, b.x);
  });
  std::vector<char> taken(static_cast<std::size_t>(grid.cols) * grid.rows, 0);
  std::vector<SpriteInstance> out;
  for (const auto& c : claims) {
    const auto& tp = templates[static_cast<std::size_t>(c.type)];
    bool free = true;
    for (int v = 0; v < tp.tiles_h && free; ++v) {
      for (int u = 0; u < tp.tiles_w && free; ++u) free = !taken[static_cast<std::size_t>(c.y + v) * grid.cols + c.x + u];
    }
    if (!free) continue;
    for (int v = 0; v < tp.tiles_h; ++v) {
      for (int u = 0; u < tp.tiles_w; ++u) taken[static_cast<std::size_t>(c.y + v) * grid.cols + c.x + u] = 1;
    }
    out.push_back({c.type, c.x, c.y});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<int> frame_index_from_path(const std::filesystem::path& path) {
  const std::string stem = path.stem().string();
  std::size_t start = stem.size();
  while (start > 0 && std::isdigit(static_cast<unsigned char>(stem[start - 1]))) --start;
  if (start == stem.size() || stem.size() - start > 9) return std::nullopt;
  return std::stoi(stem.substr(start));
}

std::string frame_file_name(int index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return "frame_" + digits + ".png";
}

IngestResult ingest_frames(const std::filesystem::path& directory, const SpriteAtlas& atlas,
                           const SpriteCatalog& catalog, const TraceMeta& meta, double tolerance) {
  atlas.validate(catalog);
  if (atlas.tile_size_px != meta.tile_size_px) throw ValidationError("ingest: atlas and trace tile sizes differ");
  if (!std::filesystem::is_directory(directory)) {
    throw ValidationError(directory.string() + ": frame directory not found");
  }
  std::map<int, std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    const auto index = frame_index_from_path(entry.path());
    if (!index) continue;
    auto [it, inserted] = files.emplace(*index, entry.path());
    if (!inserted) {
      throw ValidationError(directory.string() + ": frame index " + std::to_string(*index) + " appears twice (" +
                            it->second.filename().string() + ", " + entry.path().filename().string() + ")");
    }
  }
  if (files.empty()) throw ValidationError(directory.string() + ": no frames found");

  IngestResult out;
  out.trace.meta = meta;
  out.trace.catalog = catalog;
  auto& m = out.trace.meta;
  for (const auto& [index, path] : files) {
    RgbaImage image;
    try {
      image = read_png(path);
    } catch (const ImageError& e) {
      out.skipped.push_back({path, e.what()});
      continue;
    }
    if (m.width <= 0 || m.height <= 0) {
      m.width = image.width() / m.tile_size_px;
      m.height = image.height() / m.tile_size_px;
      if (m.width < 1 || m.height < 1) {
        out.skipped.push_back({path, path.string() + ": image smaller than one tile"});
        m.width = m.height = 0;
        continue;
      }
    }
    const int expected_w = m.width * m.tile_size_px;
    const int expected_h = m.height * m.tile_size_px;
    if (image.width() != expected_w || image.height() != expected_h) {
      out.skipped.push_back({path, path.string() + ": expected " + std::to_string(expected_w) + "x" +
                                       std::to_string(expected_h) + " pixels, got " + std::to_string(image.width()) +
                                       "x" + std::to_string(image.height())});
      continue;
    }
    out.trace.frames.emplace_back(index, m.width, m.height, match_frame(image, atlas, tolerance));
  }
  return out;
}

SpriteCatalog atlas_catalog(const std::filesystem::path& manifest) {
  const std::string source = manifest.string();
  const auto doc = detail::parse_json_text(read_text_file(manifest), source);
  detail::check_version(doc, kAtlasSchemaVersion, source);
  const int tile = detail::get_field<int>(doc, "tile_size_px", source);
  const auto& sprites = detail::field(doc, "sprites", source);
  if (!sprites.is_array()) throw ParseError(source + ".sprites: expected an array");
  std::vector<SpriteType> entries;
  for (std::size_t i = 0; i < sprites.size(); ++i) {
    const std::string at = source + ".sprites[" + std::to_string(i) + "]";
    SpriteType e;
    e.id = detail::get_field<int>(sprites[i], "id", at);
    e.name = detail::get_field<std::string>(sprites[i], "name", at);
    e.tile_w = detail::get_field_or<int>(sprites[i], "w", 1, at);
    e.tile_h = detail::get_field_or<int>(sprites[i], "h", 1, at);
    entries.push_back(std::move(e));
  }
  return SpriteCatalog(std::move(entries), tile);
}

void render_trace_frames(const Trace& trace, const SpriteAtlas& atlas, const std::filesystem::path& directory,
                         ScrollOffset scroll) {
  std::filesystem::create_directories(directory);
  for (const auto& f : trace.frames) write_png(directory / frame_file_name(f.index()), render_frame(f, atlas, scroll));
}

void save_atlas(const SpriteAtlas& atlas, const SpriteCatalog& catalog, const std::filesystem::path& directory) {
  atlas.validate(catalog);
  std::filesystem::create_directories(directory);
  detail::json doc;
  doc["version"] = kAtlasSchemaVersion;
  doc["tile_size_px"] = atlas.tile_size_px;
  doc["background"] = {atlas.background.r, atlas.background.g, atlas.background.b, atlas.background.a};
  doc["sprites"] = detail::json::array();
  for (const auto& e : catalog.entries()) {
    const std::string file = "sprite_" + std::to_string(e.id) + ".png";
    write_png(directory / file, atlas.templates[static_cast<std::size_t>(e.id)]);
    doc["sprites"].push_back({{"id", e.id}, {"name", e.name}, {"w", e.tile_w}, {"h", e.tile_h}, {"file", file}});
  }
  write_text_file(directory / "atlas.json", doc.dump(2) + "\n");
}

SpriteAtlas load_atlas(const std::filesystem::path& manifest, const SpriteCatalog& catalog) {
  const std::string source = manifest.string();
  const auto doc = detail::parse_json_text(read_text_file(manifest), source);
  detail::check_version(doc, kAtlasSchemaVersion, source);
  SpriteAtlas atlas;
  atlas.tile_size_px = detail::get_field<int>(doc, "tile_size_px", source);
  const auto bg = detail::get_field<std::vector<int>>(doc, "background", source);
  if (bg.size() != 4) throw ParseError(source + ".background: expected [r, g, b, a]");
  for (int c : bg) {
    if (c < 0 || c > 255) throw ValidationError(source + ".background: channel outside 0..255");
  }
  atlas.background = {static_cast<std::uint8_t>(bg[0]), static_cast<std::uint8_t>(bg[1]),
                      static_cast<std::uint8_t>(bg[2]), static_cast<std::uint8_t>(bg[3])};
  const auto& sprites = detail::field(doc, "sprites", source);
  if (!sprites.is_array()) throw ParseError(source + ".sprites: expected an array");
  if (sprites.size() != catalog.size()) {
    throw ValidationError(source + ": " + std::to_string(sprites.size()) + " sprites for " +
                          std::to_string(catalog.size()) + " catalog entries");
  }
  for (std::size_t i = 0; i < sprites.size(); ++i) {
    const std::string at = source + ".sprites[" + std::to_string(i) + "]";
    const int id = detail::get_field<int>(sprites[i], "id", at);
    const auto name = detail::get_field<std::string>(sprites[i], "name", at);
    if (id != static_cast<int>(i) || name != catalog.at(id).name) {
      throw ValidationError(at + ": sprite '" + name + "' does not match catalog entry " + std::to_string(i));
    }
    atlas.templates.push_back(read_png(manifest.parent_path() / detail::get_field<std::string>(sprites[i], "file", at)));
  }
  atlas.validate(catalog);
  return atlas;
}

}  // namespace levelgen
