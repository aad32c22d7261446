#include "levelgen/shapes.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace levelgen {

Eigen::Vector2d GNode::centroid() const {
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (const auto& c : cells) sum += Eigen::Vector2d(c.x, c.y);
  return cells.empty() ? sum : Eigen::Vector2d(sum / static_cast<double>(cells.size()));
}

std::vector<GNode> extract_g_nodes(const Frame& frame, int source_section) {
  std::map<TypeId, std::vector<Tile>> by_type;
  for (const auto& s : frame.instances()) by_type[s.type].push_back({s.x, s.y});

  std::vector<GNode> out;
  for (auto& [type, tiles] : by_type) {
    // Row-major scan order so components come out top-left first.
    std::sort(tiles.begin(), tiles.end(), [](const Tile& a, const Tile& b) {
      return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    std::vector<char> seen(tiles.size(), 0);
    auto index_of = [&](Tile t) -> std::ptrdiff_t {
      auto it = std::lower_bound(tiles.begin(), tiles.end(), t, [](const Tile& a, const Tile& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
      });
      return (it != tiles.end() && *it == t) ? it - tiles.begin() : -1;
    };
    for (std::size_t start = 0; start < tiles.size(); ++start) {
      if (seen[start]) continue;
      std::vector<Tile> component;
      std::vector<std::size_t> stack{start};
      seen[start] = 1;
      while (!stack.empty()) {
        const Tile t = tiles[stack.back()];
        stack.pop_back();
        component.push_back(t);
        for (const Tile step : {Tile{1, 0}, Tile{-1, 0}, Tile{0, 1}, Tile{0, -1}}) {
          const auto j = index_of(t + step);
          if (j >= 0 && !seen[static_cast<std::size_t>(j)]) {
            seen[static_cast<std::size_t>(j)] = 1;
            stack.push_back(static_cast<std::size_t>(j));
          }
        }
      }
      GNode g;
      g.type = type;
      g.source_section = source_section;
      g.anchor = component.front();
      for (const auto& t : component) {
        g.anchor.x = std::min(g.anchor.x, t.x);
        g.anchor.y = std::min(g.anchor.y, t.y);
      }
      for (const auto& t : component) g.cells.push_back(t - g.anchor);
      std::sort(g.cells.begin(), g.cells.end());
      out.push_back(std::move(g));
    }
  }
  return out;
}

DNode build_d_node(std::size_t self, const std::vector<GNode>& all_shapes) {
  if (self >= all_shapes.size()) throw std::out_of_range("build_d_node: shape index out of range");
  const GNode& g = all_shapes[self];
  DNode d;
  d.relations.reserve(all_shapes.size() - 1);
  for (std::size_t j = 0; j < all_shapes.size(); ++j) {
    if (j == self) continue;
    const GNode& t = all_shapes[j];
    Relation r;
    r.target_type = t.type;
    r.corner = t.anchor - g.anchor;
    r.center = t.center() - Eigen::Vector2d(g.anchor.x, g.anchor.y);
    d.relations.push_back(r);
  }
  return d;
}

DNode build_d_node(const GNode& g, const std::vector<GNode>& all_shapes) {
  auto it = std::find(all_shapes.begin(), all_shapes.end(), g);
  if (it == all_shapes.end()) throw std::invalid_argument("build_d_node: shape is not part of the section");
  return build_d_node(static_cast<std::size_t>(it - all_shapes.begin()), all_shapes);
}

std::vector<ShapePair> build_shape_pairs(const Frame& frame, int source_section) {
  const auto shapes = extract_g_nodes(frame, source_section);
  std::vector<ShapePair> pairs;
  pairs.reserve(shapes.size());
  for (std::size_t i = 0; i < shapes.size(); ++i) pairs.push_back({shapes[i], build_d_node(i, shapes)});
  return pairs;
}

int shape_edit_distance(const GNode& a, const GNode& b) {
  if (a.type != b.type) throw std::invalid_argument("shape_edit_distance: sprite types differ");
  std::vector<Tile> diff;
  std::set_symmetric_difference(a.cells.begin(), a.cells.end(), b.cells.begin(), b.cells.end(),
                                std::back_inserter(diff));
  return static_cast<int>(diff.size());
}

namespace {

std::vector<Tile> sorted_corners(const DNode& d) {
  std::vector<std::pair<Tile, TypeId>> keyed;
  keyed.reserve(d.relations.size());
  for (const auto& r : d.relations) keyed.emplace_back(r.corner, r.target_type);
  std::sort(keyed.begin(), keyed.end());
  std::vector<Tile> out;
  out.reserve(keyed.size());
  for (const auto& [corner, type] : keyed) out.push_back(corner);
  return out;
}

}  // namespace

double d_distance(const DNode& a, const DNode& b) {
  const auto xs = sorted_corners(a);
  const auto ys = sorted_corners(b);
  const std::size_t common = std::min(xs.size(), ys.size());
  double total = 0.0;
  for (std::size_t i = 0; i < common; ++i) total += magnitude(xs[i] - ys[i]);
  for (std::size_t i = common; i < xs.size(); ++i) total += magnitude(xs[i]);
  for (std::size_t i = common; i < ys.size(); ++i) total += magnitude(ys[i]);
  return total;
}

PairNorms pair_norms(const std::vector<ShapePair>& pairs) {
  PairNorms norms;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      if (pairs[i].g.type != pairs[j].g.type) continue;
      norms.max_shape = std::max(norms.max_shape, static_cast<double>(shape_edit_distance(pairs[i].g, pairs[j].g)));
      norms.max_d = std::max(norms.max_d, d_distance(pairs[i].d, pairs[j].d));
    }
  }
  return norms;
}

double gd_distance(const ShapePair& a, const ShapePair& b, const PairNorms& norms, double shape_weight) {
  const double shape = norms.max_shape > 0.0 ? shape_edit_distance(a.g, b.g) / norms.max_shape : 0.0;
  const double rel = norms.max_d > 0.0 ? d_distance(a.d, b.d) / norms.max_d : 0.0;
  return shape_weight * shape + (1.0 - shape_weight) * rel;
}

}  // namespace levelgen
