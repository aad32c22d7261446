#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "levelgen/trace.hpp"

namespace levelgen {

/// A 4-connected component of same-type sprites. Cells are offsets from the
/// component's top-left bounding corner (`anchor`), sorted.
struct GNode {
  TypeId type = 0;
  std::vector<Tile> cells;
  Tile anchor;
  int source_section = -1;

  /// Mean cell offset.
  Eigen::Vector2d centroid() const;
  Eigen::Vector2d center() const { return Eigen::Vector2d(anchor.x, anchor.y) + centroid(); }

  bool operator==(const GNode&) const = default;
};

/// Relation from one shape to another shape in the same section.
struct Relation {
  TypeId target_type = 0;
  /// Target anchor minus source anchor.
  Tile corner;
  /// Target center minus source anchor.
  Eigen::Vector2d center = Eigen::Vector2d::Zero();

  bool operator==(const Relation& o) const {
    return target_type == o.target_type && corner == o.corner && center == o.center;
  }
};

inline double magnitude(const Tile& v) { return std::hypot(static_cast<double>(v.x), static_cast<double>(v.y)); }

struct DNode {
  std::vector<Relation> relations;

  bool operator==(const DNode&) const = default;
};

struct ShapePair {
  GNode g;
  DNode d;

  bool operator==(const ShapePair&) const = default;
};

/// Per sprite type, the 4-connected components of occupied tiles, ordered
/// by type and then by the row-major position of each component's first cell.
std::vector<GNode> extract_g_nodes(const Frame& frame, int source_section = -1);

/// One relation from `g` to every other shape in `all_shapes` (g itself is
/// skipped by position in the list, so identical shapes are still related).
DNode build_d_node(std::size_t self, const std::vector<GNode>& all_shapes);
DNode build_d_node(const GNode& g, const std::vector<GNode>& all_shapes);

/// extract_g_nodes followed by build_d_node for each shape.
std::vector<ShapePair> build_shape_pairs(const Frame& frame, int source_section = -1);

/// Size of the symmetric difference of the normalized cell sets. Throws
/// std::invalid_argument when the sprite types differ.
int shape_edit_distance(const GNode& a, const GNode& b);

/// Relation lists sorted by corner vector are paired front to back; paired
/// corner differences and unpaired leftovers contribute their magnitudes.
double d_distance(const DNode& a, const DNode& b);

/// Population maxima used to normalize gd_distance.
struct PairNorms {
  double max_shape = 0.0;
  double max_d = 0.0;
};

PairNorms pair_norms(const std::vector<ShapePair>& pairs);

/// w * edit/max_edit + (1 - w) * d/max_d; a zero maximum zeroes its term.
double gd_distance(const ShapePair& a, const ShapePair& b, const PairNorms& norms, double shape_weight = 0.5);

}  // namespace levelgen
