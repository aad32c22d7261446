#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace levelgen {

/// Malformed input text (bad JSON, missing field, wrong kind of value).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a data invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using TypeId = int;

/// A grid position in tile units. Ordered by (x, y).
struct Tile {
  int x = 0;
  int y = 0;

  auto operator<=>(const Tile&) const = default;
  Tile operator+(const Tile& o) const { return {x + o.x, y + o.y}; }
  Tile operator-(const Tile& o) const { return {x - o.x, y - o.y}; }
};

inline int chebyshev(const Tile& a, const Tile& b) {
  const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx > dy ? dx : dy;
}

struct SpriteType {
  TypeId id = 0;
  std::string name;
  int tile_w = 1;
  int tile_h = 1;

  bool operator==(const SpriteType&) const = default;
};

class SpriteCatalog {
 public:
  SpriteCatalog() = default;
  /// Throws ValidationError unless ids are dense 0..n-1 in order, names are
  /// unique and tile extents are at least one.
  explicit SpriteCatalog(std::vector<SpriteType> entries, int tile_size_px = 16);

  const std::vector<SpriteType>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  int tile_size_px() const { return tile_size_px_; }
  bool contains(TypeId id) const { return id >= 0 && static_cast<std::size_t>(id) < entries_.size(); }
  const SpriteType& at(TypeId id) const;
  std::optional<TypeId> find(std::string_view name) const;
  /// Like find() but throws ValidationError naming the missing sprite.
  TypeId require(std::string_view name) const;

  bool operator==(const SpriteCatalog&) const = default;

 private:
  std::vector<SpriteType> entries_;
  int tile_size_px_ = 16;
};

/// Convenience: a catalog of 1x1 sprites with the given names.
SpriteCatalog make_catalog(const std::vector<std::string>& names, int tile_size_px = 16);

/// One sprite placed at a tile position. Ordered row-major: (y, x, type).
struct SpriteInstance {
  TypeId type = 0;
  int x = 0;
  int y = 0;

  bool operator==(const SpriteInstance&) const = default;
  std::strong_ordering operator<=>(const SpriteInstance& o) const {
    if (auto c = y <=> o.y; c != 0) return c;
    if (auto c = x <=> o.x; c != 0) return c;
    return type <=> o.type;
  }
};

/// A parsed frame. Instances are kept sorted; equality is therefore
/// multiset equality.
class Frame {
 public:
  Frame() = default;
  Frame(int index, int width, int height, std::vector<SpriteInstance> instances);

  int index() const { return index_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<SpriteInstance>& instances() const { return instances_; }
  std::size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }

  Frame with_index(int index) const;

  bool operator==(const Frame&) const = default;

 private:
  int index_ = 0;
  int width_ = 0;
  int height_ = 0;
  std::vector<SpriteInstance> instances_;
};

struct TraceMeta {
  int tile_size_px = 16;
  int width = 16;
  int height = 14;
  double fps = 30.0;

  bool operator==(const TraceMeta&) const = default;
};

struct Trace {
  TraceMeta meta;
  SpriteCatalog catalog;
  std::vector<Frame> frames;

  bool operator==(const Trace&) const = default;
};

/// Throws ValidationError if frame indices do not strictly increase, an
/// instance names an unknown type, sits outside the frame, duplicates another
/// (type, x, y) triple, or frame extents differ from the meta block.
void validate_trace(const Trace& trace);

struct LevelSection {
  std::string trace_id;
  int start_frame = 0;
  int end_frame = 0;
  Frame representative;
  int interaction_value = 0;

  bool operator==(const LevelSection&) const = default;
};

/// Size of the multiset intersection over (type, x, y) triples.
std::size_t shared_instances(const Frame& a, const Frame& b);

/// |shared| / max(|a|, |b|); 1 for two empty frames.
double overlap_fraction(const Frame& a, const Frame& b);

/// 1 - overlap_fraction(a, b).
double frame_difference(const Frame& a, const Frame& b);

bool is_duplicate(const Frame& a, const Frame& b, double threshold = 0.9);

/// Per-type instance counts, length |catalog|.
Eigen::VectorXd count_vector(const Frame& frame, std::size_t type_count);

/// Copy of the frame with every instance of the listed types removed.
Frame without_types(const Frame& frame, const std::vector<TypeId>& types);

}  // namespace levelgen
