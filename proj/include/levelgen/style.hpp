#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "levelgen/trace.hpp"

namespace levelgen {

/// Minimum-cost assignment of rows to columns of a rectangular cost matrix
/// (rows <= cols). Returns the column for each row.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

struct StyleScore {
  std::size_t closest = 0;
  double score = 0.0;
  /// Set when the generated section is empty.
  bool degenerate = false;
};

/// Per type, instances are matched by minimum total Euclidean displacement;
/// each unmatched instance on the larger side costs the section diagonal.
/// Total divided by the generated instance count. Types with more than
/// `exact_limit` instances on either side fall back to greedy matching.
double style_score(const Frame& generated, const Frame& original, std::size_t exact_limit = 128);

/// The original minimizing style_score. Throws std::invalid_argument on an
/// empty original list.
StyleScore style_distance(const Frame& generated, const std::vector<Frame>& originals,
                          std::size_t exact_limit = 128);

}  // namespace levelgen
