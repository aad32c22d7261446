#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levelgen/trace.hpp"

namespace levelgen {

struct CorpusSpec {
  TraceMeta meta;
  SpriteCatalog catalog;
  /// One frame-sized layout per section, in play order.
  std::vector<Frame> blueprints;
  std::vector<int> dwell;
  /// Optional avatar sprite walking along `walker_row`; skipped on frames
  /// where its tile is occupied.
  std::optional<TypeId> walker;
  int walker_row = 0;
  double walker_speed = 0.25;
  std::uint64_t rng_seed = 0;
  /// Types treated as standable by the evaluator for this corpus.
  std::vector<TypeId> standable;

  /// Throws ValidationError on bad dwell counts or out-of-frame blueprints.
  void validate() const;
};

struct GroundTruth {
  std::vector<int> boundaries;
  std::vector<int> interaction_values;
  std::vector<bool> high_interaction;

  bool operator==(const GroundTruth&) const = default;
};

struct Corpus {
  Trace trace;
  GroundTruth truth;
};

Corpus build_corpus(const CorpusSpec& spec);

std::string dump_ground_truth(const GroundTruth& truth);
GroundTruth parse_ground_truth(const std::string& text, const std::string& source = "<truth>");

/// Random layouts with random dwell times; consecutive sections always
/// differ by more than the default boundary threshold.
CorpusSpec random_corpus_spec(std::uint64_t seed);

/// Random frame for property tests: up to `max_instances` distinct
/// instances of types [0, type_count).
Frame random_frame(std::uint64_t seed, int width, int height, int type_count, int max_instances);

/// Seventeen tree-canopy platform sections (long dwell) interleaved with
/// flat connector sections (short dwell), plus a walking avatar.
CorpusSpec treetop_fixture();

/// Names of the fixture's sprite vocabulary.
std::vector<std::string> treetop_sprite_names();

}  // namespace levelgen
