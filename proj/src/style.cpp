#include "levelgen/style.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace levelgen {

// Shortest augmenting path Hungarian method with row/column potentials.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n > m) throw std::invalid_argument("solve_assignment: more rows than columns");
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n + 1), v = Eigen::VectorXd::Zero(m + 1);
  std::vector<int> p(static_cast<std::size_t>(m + 1), 0), way(static_cast<std::size_t>(m + 1), 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(m + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u(i0) - v(j);
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u(p[static_cast<std::size_t>(j)]) += delta;
          v(j) -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> out(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    if (p[static_cast<std::size_t>(j)] > 0) out[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return out;
}

namespace {

double matched_cost(const std::vector<Tile>& a, const std::vector<Tile>& b, std::size_t exact_limit) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  if (small.empty()) return 0.0;
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(small.size()), static_cast<Eigen::Index>(large.size()));
  for (std::size_t i = 0; i < small.size(); ++i) {
    for (std::size_t j = 0; j < large.size(); ++j) {
      cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::hypot(static_cast<double>(small[i].x - large[j].x), static_cast<double>(small[i].y - large[j].y));
    }
  }
  double total = 0.0;
  if (large.size() <= exact_limit) {
    const auto cols = solve_assignment(cost);
    for (std::size_t i = 0; i < cols.size(); ++i) total += cost(static_cast<Eigen::Index>(i), cols[i]);
    return total;
  }
  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < small.size(); ++i) {
    for (std::size_t j = 0; j < large.size(); ++j) {
      edges.emplace_back(cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), i, j);
    }
  }
  std::sort(edges.begin(), edges.end());
  std::vector<char> row_used(small.size(), 0), col_used(large.size(), 0);
  for (const auto& [c, i, j] : edges) {
    if (row_used[i] || col_used[j]) continue;
    row_used[i] = col_used[j] = 1;
    total += c;
  }
  return total;
}

}  // namespace

double style_score(const Frame& generated, const Frame& original, std::size_t exact_limit) {
  if (generated.empty()) return 0.0;
  std::map<TypeId, std::pair<std::vector<Tile>, std::vector<Tile>>> by_type;
  for (const auto& s : generated.instances()) by_type[s.type].first.push_back({s.x, s.y});
  for (const auto& s : original.instances()) by_type[s.type].second.push_back({s.x, s.y});
  const double diagonal = std::hypot(static_cast<double>(generated.width()), static_cast<double>(generated.height()));
  double total = 0.0;
  for (const auto& [type, sides] : by_type) {
    const auto& [gen, orig] = sides;
    total += matched_cost(gen, orig, exact_limit);
    const std::size_t extra = gen.size() > orig.size() ? gen.size() - orig.size() : orig.size() - gen.size();
    total += diagonal * static_cast<double>(extra);
  }
  return total / static_cast<double>(generated.size());
}

StyleScore style_distance(const Frame& generated, const std::vector<Frame>& originals, std::size_t exact_limit) {
  if (originals.empty()) throw std::invalid_argument("style_distance: no originals");
  StyleScore best;
  if (generated.empty()) {
    best.degenerate = true;
    return best;
  }
  best.score = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < originals.size(); ++i) {
    const double s = style_score(generated, originals[i], exact_limit);
    if (s < best.score) {
      best.score = s;
      best.closest = i;
    }
  }
  return best;
}

}  // namespace levelgen
