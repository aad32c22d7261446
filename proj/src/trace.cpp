#include "levelgen/trace.hpp"

#include <algorithm>
#include <set>

namespace levelgen {

SpriteCatalog::SpriteCatalog(std::vector<SpriteType> entries, int tile_size_px)
    : entries_(std::move(entries)), tile_size_px_(tile_size_px) {
  if (tile_size_px_ < 1) throw ValidationError("catalog: tile_size_px must be positive");
  std::set<std::string> names;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.id != static_cast<TypeId>(i)) {
      throw ValidationError("catalog[" + std::to_string(i) + "]: id " + std::to_string(e.id) +
                            " breaks dense numbering (expected " + std::to_string(i) + ")");
    }
    if (e.tile_w < 1 || e.tile_h < 1) {
      throw ValidationError("catalog[" + std::to_string(i) + "]: tile extents must be >= 1");
    }
    if (!names.insert(e.name).second) {
      throw ValidationError("catalog[" + std::to_string(i) + "]: duplicate name '" + e.name + "'");
    }
  }
}

const SpriteType& SpriteCatalog::at(TypeId id) const {
  if (!contains(id)) throw ValidationError("unknown sprite type id " + std::to_string(id));
  return entries_[static_cast<std::size_t>(id)];
}

std::optional<TypeId> SpriteCatalog::find(std::string_view name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e.id;
  }
  return std::nullopt;
}

TypeId SpriteCatalog::require(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw ValidationError("sprite '" + std::string(name) + "' is not in the catalog");
}

SpriteCatalog make_catalog(const std::vector<std::string>& names, int tile_size_px) {
  std::vector<SpriteType> entries;
  entries.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    entries.push_back({static_cast<TypeId>(i), names[i], 1, 1});
  }
  return SpriteCatalog(std::move(entries), tile_size_px);
}

Frame::Frame(int index, int width, int height, std::vector<SpriteInstance> instances)
    : index_(index), width_(width), height_(height), instances_(std::move(instances)) {
  std::sort(instances_.begin(), instances_.end());
}

Frame Frame::with_index(int index) const {
  Frame copy = *this;
  copy.index_ = index;
  return copy;
}

void validate_trace(const Trace& trace) {
  const auto& meta = trace.meta;
  if (meta.width < 1 || meta.height < 1) throw ValidationError("meta: frame extents must be positive");
  if (!(meta.fps > 0.0)) throw ValidationError("meta: fps must be positive");
  if (meta.tile_size_px != trace.catalog.tile_size_px()) {
    throw ValidationError("meta: tile_size_px disagrees with catalog");
  }
  for (std::size_t f = 0; f < trace.frames.size(); ++f) {
    const Frame& frame = trace.frames[f];
    const std::string where = "frames[" + std::to_string(f) + "]";
    if (f > 0 && frame.index() <= trace.frames[f - 1].index()) {
      throw ValidationError(where + ": frame index " + std::to_string(frame.index()) +
                            " does not increase (previous " +
                            std::to_string(trace.frames[f - 1].index()) + ")");
    }
    if (frame.width() != meta.width || frame.height() != meta.height) {
      throw ValidationError(where + ": extents differ from meta");
    }
    const auto& inst = frame.instances();
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const auto& s = inst[i];
      const std::string at = where + ".instances[" + std::to_string(i) + "]";
      if (!trace.catalog.contains(s.type)) {
        throw ValidationError(at + ": type_id " + std::to_string(s.type) + " outside catalog (0.." +
                              std::to_string(static_cast<int>(trace.catalog.size()) - 1) + ")");
      }
      if (s.x < 0 || s.y < 0 || s.x >= meta.width || s.y >= meta.height) {
        throw ValidationError(at + ": position (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                              ") outside the frame");
      }
      if (i > 0 && inst[i - 1] == s) throw ValidationError(at + ": duplicate instance");
    }
  }
}

std::size_t shared_instances(const Frame& a, const Frame& b) {
  const auto& xs = a.instances();
  const auto& ys = b.instances();
  std::size_t i = 0, j = 0, shared = 0;
  while (i < xs.size() && j < ys.size()) {
    if (xs[i] < ys[j]) {
      ++i;
    } else if (ys[j] < xs[i]) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
  }
  return shared;
}

double overlap_fraction(const Frame& a, const Frame& b) {
  const std::size_t denom = std::max(a.size(), b.size());
  if (denom == 0) return 1.0;
  return static_cast<double>(shared_instances(a, b)) / static_cast<double>(denom);
}

double frame_difference(const Frame& a, const Frame& b) { return 1.0 - overlap_fraction(a, b); }

bool is_duplicate(const Frame& a, const Frame& b, double threshold) {
  return overlap_fraction(a, b) >= threshold;
}

Eigen::VectorXd count_vector(const Frame& frame, std::size_t type_count) {
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(type_count));
  for (const auto& s : frame.instances()) {
    if (s.type >= 0 && static_cast<std::size_t>(s.type) < type_count) counts(s.type) += 1.0;
  }
  return counts;
}

Frame without_types(const Frame& frame, const std::vector<TypeId>& types) {
  std::vector<SpriteInstance> kept;
  for (const auto& s : frame.instances()) {
    if (std::find(types.begin(), types.end(), s.type) == types.end()) kept.push_back(s);
  }
  return Frame(frame.index(), frame.width(), frame.height(), std::move(kept));
}

}  // namespace levelgen
