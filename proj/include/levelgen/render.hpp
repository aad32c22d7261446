#pragma once

#include <string>
#include <vector>

#include "levelgen/trace.hpp"
#include "levelgen/vision.hpp"

namespace levelgen {

/// One printable character per type: the first letter of the name, its
/// upper-case form, then the first unused character of a fixed alphabet.
/// '.' is reserved for empty cells.
std::vector<char> type_glyphs(const SpriteCatalog& catalog);

/// Grid of glyphs, one line per tile row. Each instance marks its anchor
/// cell; when two instances share a cell the lower type id is shown.
std::string ascii_grid(const Frame& frame, const SpriteCatalog& catalog);

/// "glyph name" lines.
std::string glyph_legend(const SpriteCatalog& catalog);

/// Solid tiles with a one-pixel dark border, one deterministic colour per
/// type, for rendering when no sprite art is available.
SpriteAtlas tinted_atlas(const SpriteCatalog& catalog);

}  // namespace levelgen
