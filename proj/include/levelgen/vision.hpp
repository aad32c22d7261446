#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "levelgen/png_io.hpp"
#include "levelgen/trace.hpp"

namespace levelgen {

inline constexpr int kAtlasSchemaVersion = 1;

/// One RGBA template per catalog entry, indexed by type id. Alpha 0 marks
/// transparent template pixels.
struct SpriteAtlas {
  int tile_size_px = 16;
  Rgba background{0, 0, 0, 255};
  std::vector<RgbaImage> templates;

  /// Throws ValidationError when the template count or extents disagree with
  /// the catalog or a template has no opaque pixel.
  void validate(const SpriteCatalog& catalog) const;
};

/// Deterministic art for a catalog: each type gets its own red level and
/// position-dependent green/blue gradients, so a template never matches a
/// window that is misaligned with the tile grid.
SpriteAtlas procedural_atlas(const SpriteCatalog& catalog);

struct ScrollOffset {
  int dx = 0;
  int dy = 0;

  bool operator==(const ScrollOffset&) const = default;
};

/// Draws every instance at its tile position over the background, then
/// rolls the image right by dx and down by dy pixels with wraparound.
RgbaImage render_frame(const Frame& frame, const SpriteAtlas& atlas, ScrollOffset scroll = {});

/// Offset in [0, tile)^2 maximizing the number of grid positions with a
/// matching template; ties go to the smallest (dy, dx).
ScrollOffset detect_scroll_offset(const RgbaImage& frame, const SpriteAtlas& atlas, double tolerance = 0.0);

/// Best template per grid position whose mean squared RGB error over its
/// opaque pixels is <= tolerance. Multi-tile
/// templates claim all their cells; overlapping claims go to the lower error,
/// then the lower type id. The offset is detected when not given.
std::vector<SpriteInstance> match_frame(const RgbaImage& frame, const SpriteAtlas& atlas, double tolerance = 0.0,
                                        std::optional<ScrollOffset> offset = std::nullopt);

struct IngestSkip {
  std::filesystem::path path;
  std::string message;
};

struct IngestResult {
  Trace trace;
  std::vector<IngestSkip> skipped;
};

/// Frame index parsed from a file name such as "frame_000012.png" or "12.png".
std::optional<int> frame_index_from_path(const std::filesystem::path& path);

/// Reads every indexed PNG in the directory. Unreadable or mis-sized images
/// are skipped and reported; a directory without frames throws ValidationError
/// ("no frames found"). A non-positive meta width or height is taken from the
/// first readable image.
IngestResult ingest_frames(const std::filesystem::path& directory, const SpriteAtlas& atlas,
                           const SpriteCatalog& catalog, const TraceMeta& meta, double tolerance = 0.0);

std::string frame_file_name(int index);

/// Writes frame_<index>.png for every frame of the trace.
void render_trace_frames(const Trace& trace, const SpriteAtlas& atlas, const std::filesystem::path& directory,
                         ScrollOffset scroll = {});

/// atlas.json plus one sprite_<id>.png per template.
void save_atlas(const SpriteAtlas& atlas, const SpriteCatalog& catalog, const std::filesystem::path& directory);
/// Catalog described by an atlas manifest (ids, names, tile extents).
SpriteCatalog atlas_catalog(const std::filesystem::path& manifest);
/// Loads and validates against the catalog (names must agree).
SpriteAtlas load_atlas(const std::filesystem::path& manifest, const SpriteCatalog& catalog);

}  // namespace levelgen
