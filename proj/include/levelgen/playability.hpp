#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levelgen/trace.hpp"

namespace levelgen {

struct JumpEnvelope {
  int max_rise = 4;
  int max_gap = 4;
  /// Unbounded when empty.
  std::optional<int> max_drop;

  void validate() const;
  bool operator==(const JumpEnvelope&) const = default;
};

enum class PlayabilityFailure { none, no_entry, no_exit, no_path };

std::string to_string(PlayabilityFailure f);

struct PlayabilityReport {
  bool playable = false;
  std::optional<SpriteInstance> entry;
  std::optional<SpriteInstance> exit;
  std::vector<SpriteInstance> path;
  PlayabilityFailure failure = PlayabilityFailure::none;
};

/// Standable instances: a standable type with two empty tiles above it
/// (positions above the frame count as empty). Sorted by (x, y).
std::vector<SpriteInstance> stand_points(const Frame& frame, const std::vector<TypeId>& standable);

/// One hop from `from` to a stand point further right: gap dx - 1 <= max_gap,
/// rise <= max_rise, drop <= max_drop.
bool can_hop(const SpriteInstance& from, const SpriteInstance& to, const JumpEnvelope& env);

bool is_entry(const SpriteInstance& s, const JumpEnvelope& env);
bool is_exit(const SpriteInstance& s, int width, const JumpEnvelope& env);

/// Repeatedly hops to the reachable stand point with the greatest x (ties to
/// the smallest y). Returns the path when it ends at an exit.
std::optional<std::vector<SpriteInstance>> greedy_path(const Frame& frame, const std::vector<TypeId>& standable,
                                                       const JumpEnvelope& env, const SpriteInstance& entry);

PlayabilityReport is_playable(const Frame& frame, const std::vector<TypeId>& standable, const JumpEnvelope& env = {});

}  // namespace levelgen
