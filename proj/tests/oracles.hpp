#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <vector>

#include <Eigen/Core>

#include "levelgen/trace.hpp"

namespace oracle {

// Minimum k-means distortion over every partition of the rows into k
// non-empty groups.
inline double best_kmeans_distortion(const Eigen::MatrixXd& points, int k) {
  const int n = static_cast<int>(points.rows());
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (n - i < k - used) return;
    if (i == n) {
      if (used != k) return;
      double total = 0;
      for (int c = 0; c < k; ++c) {
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(points.cols());
        int count = 0;
        for (int p = 0; p < n; ++p) {
          if (label[static_cast<std::size_t>(p)] == c) {
            mean += points.row(p);
            ++count;
          }
        }
        mean /= count;
        for (int p = 0; p < n; ++p) {
          if (label[static_cast<std::size_t>(p)] == c) total += (points.row(p) - mean).squaredNorm();
        }
      }
      best = std::min(best, total);
      return;
    }
    // Canonical labelling: a point may open at most one new group.
    for (int c = 0; c <= std::min(used, k - 1); ++c) {
      label[static_cast<std::size_t>(i)] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  rec(0, 0);
  return best;
}

inline double medoid_cost(const Eigen::MatrixXd& d, const std::vector<int>& medoids) {
  double total = 0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int m : medoids) best = std::min(best, d(i, m));
    total += best * best;
  }
  return total;
}

// Best medoid set of size k by enumeration; ties resolved lexicographically.
inline std::vector<int> best_medoids(const Eigen::MatrixXd& d, int k) {
  const int n = static_cast<int>(d.rows());
  std::vector<int> current, best;
  double best_cost = std::numeric_limits<double>::infinity();
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(current.size()) == k) {
      const double c = medoid_cost(d, current);
      if (c < best_cost - 1e-12) {
        best_cost = c;
        best = current;
      }
      return;
    }
    for (int i = start; i < n; ++i) {
      current.push_back(i);
      rec(i + 1);
      current.pop_back();
    }
  };
  rec(0);
  return best;
}

// 4-connected same-type components by breadth-first search; each component
// is returned as its type plus absolute cells.
struct Component {
  levelgen::TypeId type;
  std::set<std::pair<int, int>> cells;
  auto operator<=>(const Component&) const = default;
};

inline std::set<Component> flood_fill(const levelgen::Frame& frame) {
  std::set<std::tuple<int, int, int>> todo;
  for (const auto& s : frame.instances()) todo.insert({s.type, s.x, s.y});
  std::set<Component> out;
  while (!todo.empty()) {
    auto [t, x0, y0] = *todo.begin();
    todo.erase(todo.begin());
    Component c{t, {}};
    std::queue<std::pair<int, int>> q;
    q.push({x0, y0});
    while (!q.empty()) {
      auto [x, y] = q.front();
      q.pop();
      c.cells.insert({x, y});
      const int dx[] = {1, -1, 0, 0};
      const int dy[] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        auto it = todo.find({t, x + dx[k], y + dy[k]});
        if (it != todo.end()) {
          todo.erase(it);
          q.push({x + dx[k], y + dy[k]});
        }
      }
    }
    out.insert(std::move(c));
  }
  return out;
}

}  // namespace oracle
