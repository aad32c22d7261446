#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "levelgen/model.hpp"

namespace levelgen {

struct GenerationParams {
  double p_E = 0.1;
  double p_C = 0.8;
  int max_depth = 64;
  int max_outputs = 10000;
  int match_tolerance = 1;
  std::uint64_t rng_seed = 0;
  /// Filter outputs against the originals and each other.
  bool dedup = true;
  /// Bound on recursion states visited across all seeds.
  long long max_expansions = 2'000'000;

  /// Throws ValidationError for out-of-range thresholds or caps.
  void validate() const;
  bool operator==(const GenerationParams&) const = default;
};

struct Placement {
  int s_node = 0;
  int member = 0;
  Tile anchor;

  auto operator<=>(const Placement&) const = default;
};

class PartialSection {
 public:
  PartialSection(const StyleModel& model, int l_node);

  int l_node() const { return l_node_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<Placement>& placements() const { return placements_; }
  const Eigen::VectorXd& counts() const { return counts_; }
  bool empty() const { return placements_.empty(); }

  /// True when every cell of the pair's shape at `anchor` is inside the
  /// section and unoccupied.
  bool fits(const GNode& g, const Tile& anchor) const;
  /// Adds the placement; throws std::invalid_argument if it does not fit.
  void add(const StyleModel& model, const Placement& p);

  std::vector<SpriteInstance> instances(const StyleModel& model) const;

 private:
  int l_node_ = 0;
  int width_ = 0;
  int height_ = 0;
  std::vector<Placement> placements_;
  Eigen::VectorXd counts_;
  std::vector<char> occupied_;
};

struct GeneratedSection {
  Frame layout;
  Placement seed;
  /// Placements in construction order.
  std::vector<Placement> placements;
  int l_node = 0;
  double p_E = 0.0;
  double p_C = 0.0;
  std::uint64_t trace_hash = 0;
};

struct GenerationResult {
  std::vector<GeneratedSection> sections;
  /// Distinct terminal layouts before deduplication.
  std::size_t raw_count = 0;
  std::vector<Frame> raw;
  long long expansions = 0;
  bool truncated = false;
  bool depth_limited = false;
};

struct NearestN {
  Eigen::Index row = 0;
  /// Type with the largest positive deficit, or -1 when none is deficient.
  TypeId type = -1;
  double deficit = 0.0;
};

/// Nearest row by Euclidean distance (ties to the first row) and its most
/// deficient type (ties to the lowest id). Throws std::invalid_argument on an
/// empty row set.
NearestN nearest_n(const Eigen::VectorXd& counts, const Eigen::MatrixXd& rows);

/// Highest-probability relation of a placed pair with probability >= p_E
/// that no placed shape satisfies within the tolerance; its target type.
std::optional<TypeId> required_edge_type(const PartialSection& section, const StyleModel& model, double p_E,
                                         int tolerance = 1);

/// Number of the pair's relations that can be matched one-to-one to placed
/// shapes of the target type lying within `tolerance` of anchor + corner.
int matched_relations(const PartialSection& section, const ShapePair& pair, const Tile& anchor,
                      const StyleModel& model, int tolerance = 1);

/// matched / placed shapes; 1.0 for an empty section or a
/// pair with no relations.
double coexist_probability(const PartialSection& section, const ShapePair& pair, const Tile& anchor,
                           const StyleModel& model, int tolerance = 1);

/// Anchor for placing member `member` of S-node `s_node`: the original
/// anchor for a seed, otherwise the relation-implied anchor matching the most
/// placed shapes (then highest relation probability, then smallest anchor),
/// shifted by at most `tolerance` to clear collisions. nullopt when no
/// collision-free anchor exists.
std::optional<Tile> choose_anchor(const PartialSection& section, int s_node, int member, const StyleModel& model,
                                  int tolerance = 1);

bool is_terminal(const PartialSection& section, const StyleModel& model, double p_E, int tolerance = 1);

/// Exhaustive enumeration from every S-node member of every L-node as seed.
GenerationResult generate_all(const StyleModel& model, const GenerationParams& params);

}  // namespace levelgen
