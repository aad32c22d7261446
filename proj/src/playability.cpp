#include "levelgen/playability.hpp"

#include <algorithm>
#include <set>

namespace levelgen {

void JumpEnvelope::validate() const {
  if (max_rise < 0 || max_gap < 0 || (max_drop && *max_drop < 0)) {
    throw ValidationError("jump envelope values must be non-negative");
  }
}

std::string to_string(PlayabilityFailure f) {
  switch (f) {
    case PlayabilityFailure::none: return "none";
    case PlayabilityFailure::no_entry: return "no_entry";
    case PlayabilityFailure::no_exit: return "no_exit";
    case PlayabilityFailure::no_path: return "no_path";
  }
  return "unknown";
}

std::vector<SpriteInstance> stand_points(const Frame& frame, const std::vector<TypeId>& standable) {
  std::set<Tile> occupied;
  for (const auto& s : frame.instances()) occupied.insert({s.x, s.y});
  std::vector<SpriteInstance> out;
  for (const auto& s : frame.instances()) {
    if (std::find(standable.begin(), standable.end(), s.type) == standable.end()) continue;
    if (occupied.count({s.x, s.y - 1}) || occupied.count({s.x, s.y - 2})) continue;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const SpriteInstance& a, const SpriteInstance& b) {
    return std::tie(a.x, a.y, a.type) < std::tie(b.x, b.y, b.type);
  });
  return out;
}

bool can_hop(const SpriteInstance& from, const SpriteInstance& to, const JumpEnvelope& env) {
  const int dx = to.x - from.x;
  if (dx < 1 || dx - 1 > env.max_gap) return false;
  const int rise = from.y - to.y;
  if (rise > env.max_rise) return false;
  if (env.max_drop && -rise > *env.max_drop) return false;
  return true;
}

bool is_entry(const SpriteInstance& s, const JumpEnvelope& env) { return s.x < env.max_gap; }

bool is_exit(const SpriteInstance& s, int width, const JumpEnvelope& env) { return s.x >= width - env.max_gap; }

std::optional<std::vector<SpriteInstance>> greedy_path(const Frame& frame, const std::vector<TypeId>& standable,
                                                       const JumpEnvelope& env, const SpriteInstance& entry) {
  const auto points = stand_points(frame, standable);
  std::vector<SpriteInstance> path{entry};
  SpriteInstance at = entry;
  for (;;) {
    const SpriteInstance* best = nullptr;
    for (const auto& p : points) {
      if (!can_hop(at, p, env)) continue;
      if (!best || p.x > best->x || (p.x == best->x && p.y < best->y)) best = &p;
    }
    if (!best) break;
    at = *best;
    path.push_back(at);
  }
  if (!is_exit(at, frame.width(), env)) return std::nullopt;
  return path;
}

PlayabilityReport is_playable(const Frame& frame, const std::vector<TypeId>& standable, const JumpEnvelope& env) {
  PlayabilityReport report;
  const auto points = stand_points(frame, standable);
  std::vector<SpriteInstance> entries, exits;
  for (const auto& p : points) {
    if (is_entry(p, env)) entries.push_back(p);
    if (is_exit(p, frame.width(), env)) exits.push_back(p);
  }
  if (entries.empty()) {
    report.failure = PlayabilityFailure::no_entry;
    return report;
  }
  if (exits.empty()) {
    report.failure = PlayabilityFailure::no_exit;
    return report;
  }
  for (const auto& e : entries) {
    if (auto path = greedy_path(frame, standable, env, e)) {
      report.playable = true;
      report.entry = e;
      report.exit = path->back();
      report.path = std::move(*path);
      return report;
    }
  }
  report.failure = PlayabilityFailure::no_path;
  return report;
}

}  // namespace levelgen
