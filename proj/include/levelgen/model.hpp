#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "levelgen/segmentation.hpp"
#include "levelgen/shapes.hpp"
#include "levelgen/trace.hpp"

namespace levelgen {

/// (originating type, target type, distance bucket).
struct EdgeKey {
  TypeId from = 0;
  TypeId to = 0;
  int bucket = 0;

  auto operator<=>(const EdgeKey&) const = default;
};

/// floor(bucket_count * magnitude / max_distance), clamped to the last
/// bucket. Throws std::invalid_argument for a non-zero magnitude when
/// max_distance is zero.
int distance_bucket(double magnitude, double max_distance, int bucket_count);

/// Relative frequency of (from -> to, bucket) relations among all relations
/// of an S-node's members.
struct EdgeProbabilityTable {
  double max_distance = 0.0;
  int bucket_count = 100;
  std::map<EdgeKey, int> counts;
  int total = 0;

  double probability(const EdgeKey& key) const;
  int bucket_of(const Tile& corner) const { return distance_bucket(magnitude(corner), max_distance, bucket_count); }
  /// Probability the table assigns to one concrete relation of a shape of type `from`.
  double probability(TypeId from, const Relation& r) const { return probability({from, r.target_type, bucket_of(r.corner)}); }
  double min_probability() const;

  bool operator==(const EdgeProbabilityTable&) const = default;
};

EdgeProbabilityTable build_edge_probability_table(const std::vector<ShapePair>& members, double max_distance,
                                                  int bucket_count = 100);

/// Largest relation corner magnitude across the pairs.
double max_relation_distance(const std::vector<ShapePair>& pairs);

struct SNode {
  int id = 0;
  TypeId type = 0;
  std::vector<ShapePair> members;
  EdgeProbabilityTable table;

  bool operator==(const SNode&) const = default;
};

struct LNode {
  int id = 0;
  std::vector<int> s_nodes;
  /// Source sections (model section indices) feeding the S-nodes.
  std::vector<int> sections;
  /// N-node rows of those sections, in the same order.
  Eigen::MatrixXd n_rows;

  bool operator==(const LNode&) const = default;
};

struct ModelParams {
  std::uint64_t seed = 0;
  int k_max = 10;
  double fk_threshold = 0.85;
  double shape_weight = 0.5;
  int bucket_count = 100;
  /// Effective dimensionality for K estimation over (G, D) pairs.
  double pair_dims = 2.0;
  /// Sprite types removed from sections before modelling (e.g. the avatar).
  std::vector<TypeId> ignored_types;

  bool operator==(const ModelParams&) const = default;
};

struct StyleModel {
  SpriteCatalog catalog;
  int width = 0;
  int height = 0;
  /// Source section layouts (after removing ignored types); S-node members
  /// refer to them through GNode::source_section.
  std::vector<Frame> sections;
  std::vector<std::string> section_ids;
  /// N node: one count row per section.
  Eigen::MatrixXd n_node;
  double max_distance = 0.0;
  std::vector<SNode> s_nodes;
  std::vector<LNode> l_nodes;
  ModelParams params;

  const SNode& s_node(int id) const { return s_nodes.at(static_cast<std::size_t>(id)); }
  int l_node_of(int s_node_id) const;

  bool operator==(const StyleModel&) const = default;
};

/// Per type: k-medoids over gd_distance with K from the distortion ratio;
/// one S-node per cluster with its edge-probability table. Ids are assigned
/// in (type, first member) order.
std::vector<SNode> derive_s_nodes(const std::map<TypeId, std::vector<ShapePair>>& pairs_by_type,
                                  const ModelParams& params, double max_distance);

/// Binary signature of an S-node over the given key universe.
std::vector<char> edge_signature(const SNode& s, const std::vector<EdgeKey>& universe);

/// All keys with non-zero probability in any table, sorted.
std::vector<EdgeKey> signature_universe(const std::vector<SNode>& s_nodes);

/// Groups S-nodes into level-design templates. S-nodes that share a source
/// section form one group; groups are clustered with k-medoids under the
/// Hamming distance of their combined edge signatures, K estimated with the
/// signature length as effective dimensionality.
std::vector<LNode> derive_l_nodes(const std::vector<SNode>& s_nodes, const Eigen::MatrixXd& n_node,
                                  const ModelParams& params);

/// Full model from one cluster of level sections. Throws ValidationError for
/// an empty list.
StyleModel build_style_model(const std::vector<LevelSection>& sections, const SpriteCatalog& catalog,
                             const ModelParams& params = {});

/// Same, from bare layouts (ids are "section<i>").
StyleModel build_style_model(const std::vector<Frame>& layouts, const SpriteCatalog& catalog,
                             const ModelParams& params = {});

}  // namespace levelgen
