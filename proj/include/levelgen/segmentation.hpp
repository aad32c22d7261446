#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "levelgen/trace.hpp"

namespace levelgen {

struct SegmentationParams {
  /// A section closes once a frame differs from the section's first frame by
  /// more than this fraction.
  double boundary_threshold = 0.10;
  /// A boundary is a level endpoint when the frame differs from the
  /// immediately preceding frame by at least this fraction.
  double endpoint_threshold = 1.0;

  void validate() const;
};

struct SectionSet {
  std::vector<LevelSection> sections;
  /// Frame ordinals (section start frames) flagged as level endpoints.
  std::vector<int> endpoints;
  /// Sections whose representative frame was empty (blackouts); kept out of
  /// `sections` but reported so the two lists together tile the trace.
  std::vector<LevelSection> dropped;
};

/// Splits the trace at content-change boundaries. Sections cover the ordinal
/// range [first frame, last frame] without gaps: a section ends one ordinal
/// before the next one starts, so dropped frames count as time spent.
SectionSet segment_trace(const Trace& trace, const SegmentationParams& params = {},
                         const std::string& trace_id = "trace");

struct InteractionValue {
  std::size_t section = 0;
  int frames = 0;
  double seconds = 0.0;
};

std::vector<InteractionValue> interaction_values(const SectionSet& sections, double fps);

/// Sections whose interaction value is strictly above the mean of the set.
std::vector<LevelSection> select_high_interaction(const std::vector<LevelSection>& sections);

/// Per-section flags matching select_high_interaction.
std::vector<bool> high_interaction_flags(const std::vector<LevelSection>& sections);

struct CategoryParams {
  std::uint64_t seed = 0;
  int k_max = 10;
  double fk_threshold = 0.85;

  void validate() const;
  bool operator==(const CategoryParams&) const = default;
};

struct SectionCategories {
  int k = 0;
  /// Category of each input section.
  std::vector<int> assignment;
  /// Input indices per category; categories ordered by their first member.
  std::vector<std::vector<int>> members;
  double distortion = 0.0;

  bool operator==(const SectionCategories&) const = default;
};

/// k-means++ over the sections' count vectors with K from the distortion
/// ratio (k_max clamped to the section count). Throws ValidationError for an
/// empty list.
SectionCategories categorize_sections(const std::vector<LevelSection>& sections, const SpriteCatalog& catalog,
                                      const CategoryParams& params = {});

inline Eigen::VectorXd count_vector(const LevelSection& section, const SpriteCatalog& catalog) {
  return count_vector(section.representative, catalog.size());
}

}  // namespace levelgen
