#pragma once

// k-means++ seeding, Lloyd k-means with a Hartigan polish, PAM-style
// k-medoids over a distance matrix, and distortion-ratio estimation of K.
//
// Vector point sets are matrices with one point per row. Metric point sets
// are symmetric distance matrices. Every routine is deterministic in its
// seed; the generator below is specified bit-for-bit (mt19937_64 plus a
// fixed 53-bit float conversion), so results do not depend on the standard
// library's distribution implementations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace levelgen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

namespace clustering {

template <typename Scalar>
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct ClusterResult {
  int k = 0;
  std::vector<int> assignment;
  /// k-means: one center per row. Empty for k-medoids.
  PointMatrix<Scalar> centers;
  /// k-medoids: point index of each cluster's medoid. Empty for k-means.
  std::vector<Eigen::Index> medoids;
  /// Sum over points of the squared distance to the assigned center.
  Scalar distortion = 0;
  int iterations = 0;
};

namespace detail {

// D^2 sampling. `dist2(i, j)` returns the squared distance between points.
template <typename Scalar, typename Dist2>
std::vector<Eigen::Index> d2_seed(Eigen::Index n, int k, std::uint64_t seed, Dist2&& dist2) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (k > n) throw std::invalid_argument("k (" + std::to_string(k) + ") exceeds the point count (" +
                                         std::to_string(n) + ")");
  Rng rng(seed);
  std::vector<Eigen::Index> chosen;
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  std::vector<Scalar> nearest(static_cast<std::size_t>(n), std::numeric_limits<Scalar>::infinity());

  auto take = [&](Eigen::Index c) {
    chosen.push_back(c);
    taken[static_cast<std::size_t>(c)] = 1;
    for (Eigen::Index i = 0; i < n; ++i) {
      nearest[static_cast<std::size_t>(i)] = std::min(nearest[static_cast<std::size_t>(i)], dist2(i, c));
    }
  };

  take(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n))));
  while (static_cast<int>(chosen.size()) < k) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!taken[static_cast<std::size_t>(i)]) total += static_cast<double>(nearest[static_cast<std::size_t>(i)]);
    }
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (taken[static_cast<std::size_t>(i)]) continue;
        const double w = static_cast<double>(nearest[static_cast<std::size_t>(i)]);
        if (w <= 0.0) continue;
        acc += w;
        pick = i;
        if (acc > target) break;
      }
    } else {
      // Every remaining point coincides with a chosen one: pick uniformly
      // among the untaken indices so centers stay distinct points.
      std::vector<Eigen::Index> free;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!taken[static_cast<std::size_t>(i)]) free.push_back(i);
      }
      pick = free[rng.index(free.size())];
    }
    take(pick);
  }
  return chosen;
}

template <typename Scalar>
Scalar squared_row_distance(const PointMatrix<Scalar>& a, Eigen::Index i, const PointMatrix<Scalar>& b,
                            Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

}  // namespace detail

/// k-means++ seeding over vector points: indices of the k chosen rows.
template <typename Scalar>
std::vector<Eigen::Index> kmeanspp_seed(const PointMatrix<Scalar>& points, int k, std::uint64_t seed) {
  return detail::d2_seed<Scalar>(points.rows(), k, seed, [&](Eigen::Index i, Eigen::Index j) {
    return detail::squared_row_distance(points, i, points, j);
  });
}

/// k-means++-style seeding over a distance matrix (weights are squared distances).
template <typename Scalar>
std::vector<Eigen::Index> kmeanspp_seed_metric(const PointMatrix<Scalar>& distances, int k, std::uint64_t seed) {
  return detail::d2_seed<Scalar>(distances.rows(), k, seed, [&](Eigen::Index i, Eigen::Index j) {
    return distances(i, j) * distances(i, j);
  });
}

/// Recomputes the k-means distortion of an assignment from cluster means.
template <typename Scalar>
Scalar kmeans_distortion(const PointMatrix<Scalar>& points, const std::vector<int>& assignment, int k) {
  PointMatrix<Scalar> sums = PointMatrix<Scalar>::Zero(k, points.cols());
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    sums.row(assignment[static_cast<std::size_t>(i)]) += points.row(i);
    ++sizes[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])];
  }
  Scalar total = 0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int c = assignment[static_cast<std::size_t>(i)];
    total += (points.row(i) - sums.row(c) / static_cast<Scalar>(sizes[static_cast<std::size_t>(c)])).squaredNorm();
  }
  return total;
}

/// Lloyd iterations from k-means++ seeds until the assignment is a fixpoint
/// (at most 100 rounds), then single-point Hartigan moves until no move
/// lowers the distortion. Empty clusters take the point farthest from its
/// own center.
template <typename Scalar>
ClusterResult<Scalar> kmeans(const PointMatrix<Scalar>& points, int k, std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  const auto seeds = kmeanspp_seed(points, k, seed);

  ClusterResult<Scalar> result;
  result.k = k;
  result.centers.resize(k, points.cols());
  for (int c = 0; c < k; ++c) result.centers.row(c) = points.row(seeds[static_cast<std::size_t>(c)]);
  auto& assign = result.assignment;
  assign.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);

  auto recompute_centers = [&] {
    result.centers.setZero();
    std::fill(sizes.begin(), sizes.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      result.centers.row(assign[static_cast<std::size_t>(i)]) += points.row(i);
      ++sizes[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) result.centers.row(c) /= static_cast<Scalar>(sizes[static_cast<std::size_t>(c)]);
  };

  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int current = assign[static_cast<std::size_t>(i)];
      int best = current;
      Scalar best_d = current >= 0 ? detail::squared_row_distance(points, i, result.centers, current)
                                   : std::numeric_limits<Scalar>::infinity();
      for (int c = 0; c < k; ++c) {
        const Scalar d = detail::squared_row_distance(points, i, result.centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (best != current) {
        assign[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    std::fill(sizes.begin(), sizes.end(), 0);
    for (int a : assign) ++sizes[static_cast<std::size_t>(a)];
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) continue;
      // Re-seed with the point farthest from its own (current) center.
      Eigen::Index far = -1;
      Scalar far_d = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int a = assign[static_cast<std::size_t>(i)];
        if (sizes[static_cast<std::size_t>(a)] < 2) continue;
        const Scalar d = detail::squared_row_distance(points, i, result.centers, a);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --sizes[static_cast<std::size_t>(assign[static_cast<std::size_t>(far)])];
      assign[static_cast<std::size_t>(far)] = c;
      sizes[static_cast<std::size_t>(c)] = 1;
      changed = true;
    }
    recompute_centers();
    result.iterations = iter + 1;
    if (!changed) break;
  }

  // Hartigan polish: moving x from a to b changes the distortion by
  // n_b/(n_b+1)|x-c_b|^2 - n_a/(n_a-1)|x-c_a|^2.
  for (int pass = 0; pass < 1000; ++pass) {
    bool moved = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int a = assign[static_cast<std::size_t>(i)];
      const Scalar na = static_cast<Scalar>(sizes[static_cast<std::size_t>(a)]);
      if (na < 2) continue;
      const Scalar remove_gain = na / (na - 1) * detail::squared_row_distance(points, i, result.centers, a);
      int best = a;
      Scalar best_cost = remove_gain;
      for (int b = 0; b < k; ++b) {
        if (b == a) continue;
        const Scalar nb = static_cast<Scalar>(sizes[static_cast<std::size_t>(b)]);
        const Scalar add_cost = nb / (nb + 1) * detail::squared_row_distance(points, i, result.centers, b);
        if (add_cost < best_cost) {
          best_cost = add_cost;
          best = b;
        }
      }
      const Scalar eps = std::numeric_limits<Scalar>::epsilon() * 64 * (Scalar(1) + remove_gain);
      if (best != a && best_cost < remove_gain - eps) {
        const Scalar nb = static_cast<Scalar>(sizes[static_cast<std::size_t>(best)]);
        result.centers.row(a) = (result.centers.row(a) * na - points.row(i)) / (na - 1);
        result.centers.row(best) = (result.centers.row(best) * nb + points.row(i)) / (nb + 1);
        --sizes[static_cast<std::size_t>(a)];
        ++sizes[static_cast<std::size_t>(best)];
        assign[static_cast<std::size_t>(i)] = best;
        moved = true;
      }
    }
    if (!moved) break;
    recompute_centers();
  }

  result.distortion = kmeans_distortion(points, assign, k);
  return result;
}

/// Sum over points of the squared distance to the nearest listed medoid.
template <typename Scalar>
Scalar medoid_distortion(const PointMatrix<Scalar>& distances, const std::vector<Eigen::Index>& medoids) {
  Scalar total = 0;
  for (Eigen::Index i = 0; i < distances.rows(); ++i) {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (auto m : medoids) best = std::min(best, distances(i, m));
    total += best * best;
  }
  return total;
}

/// PAM-style k-medoids: D^2 seeding, then the best improving single
/// (medoid, non-medoid) swap is applied until none lowers the distortion.
/// The objective is the same squared-distance distortion reported in the
/// result. Medoids are returned in ascending index order.
template <typename Scalar>
ClusterResult<Scalar> kmedoids(const PointMatrix<Scalar>& distances, int k, std::uint64_t seed) {
  const Eigen::Index n = distances.rows();
  if (distances.cols() != n) throw std::invalid_argument("distance matrix must be square");
  std::vector<Eigen::Index> medoids = kmeanspp_seed_metric(distances, k, seed);
  Scalar cost = medoid_distortion(distances, medoids);

  ClusterResult<Scalar> result;
  result.k = k;
  std::vector<char> is_medoid(static_cast<std::size_t>(n), 0);
  for (auto m : medoids) is_medoid[static_cast<std::size_t>(m)] = 1;

  // Swap deltas use each point's nearest and second-nearest medoid cost.
  std::vector<int> near_slot(static_cast<std::size_t>(n));
  std::vector<Scalar> near_cost(static_cast<std::size_t>(n)), second_cost(static_cast<std::size_t>(n));
  for (int iter = 0; iter < 10000; ++iter) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar best = std::numeric_limits<Scalar>::infinity(), second = best;
      int slot = 0;
      for (int s = 0; s < k; ++s) {
        const Scalar d = distances(i, medoids[static_cast<std::size_t>(s)]);
        const Scalar c = d * d;
        if (c < best) {
          second = best;
          best = c;
          slot = s;
        } else if (c < second) {
          second = c;
        }
      }
      near_slot[static_cast<std::size_t>(i)] = slot;
      near_cost[static_cast<std::size_t>(i)] = best;
      second_cost[static_cast<std::size_t>(i)] = second;
    }
    Scalar best_cost = cost;
    int best_slot = -1;
    Eigen::Index best_h = -1;
    for (int slot = 0; slot < k; ++slot) {
      for (Eigen::Index h = 0; h < n; ++h) {
        if (is_medoid[static_cast<std::size_t>(h)]) continue;
        Scalar c = 0;
        for (Eigen::Index o = 0; o < n; ++o) {
          const Scalar dh = distances(o, h) * distances(o, h);
          const Scalar keep = near_slot[static_cast<std::size_t>(o)] == slot ? second_cost[static_cast<std::size_t>(o)]
                                                                              : near_cost[static_cast<std::size_t>(o)];
          c += std::min(keep, dh);
        }
        if (c < best_cost) {
          best_cost = c;
          best_slot = slot;
          best_h = h;
        }
      }
    }
    const Scalar eps = std::numeric_limits<Scalar>::epsilon() * 64 * (Scalar(1) + cost);
    if (best_slot < 0 || best_cost >= cost - eps) break;
    is_medoid[static_cast<std::size_t>(medoids[static_cast<std::size_t>(best_slot)])] = 0;
    is_medoid[static_cast<std::size_t>(best_h)] = 1;
    medoids[static_cast<std::size_t>(best_slot)] = best_h;
    cost = medoid_distortion(distances, medoids);
    result.iterations = iter + 1;
  }

  std::sort(medoids.begin(), medoids.end());
  result.medoids = medoids;
  result.assignment.assign(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    Scalar best_d = std::numeric_limits<Scalar>::infinity();
    for (int c = 0; c < k; ++c) {
      if (medoids[static_cast<std::size_t>(c)] == i) {
        best = c;
        break;
      }
      const Scalar d = distances(i, medoids[static_cast<std::size_t>(c)]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    result.assignment[static_cast<std::size_t>(i)] = best;
  }
  result.distortion = medoid_distortion(distances, medoids);
  return result;
}

/// Builds the full distance matrix for items under a symmetric metric.
template <typename Scalar, typename Item, typename Metric>
PointMatrix<Scalar> distance_matrix(const std::vector<Item>& items, Metric&& metric) {
  const auto n = static_cast<Eigen::Index>(items.size());
  PointMatrix<Scalar> d = PointMatrix<Scalar>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = static_cast<Scalar>(metric(items[static_cast<std::size_t>(i)], items[static_cast<std::size_t>(j)]));
    }
  }
  return d;
}

/// Outcome of distortion-ratio model selection: distortions S_K and
/// evaluations f(K) for K = 1..k_max (index 0 is K = 1).
struct KEstimate {
  int k = 1;
  std::vector<double> distortions;
  std::vector<double> f;
};

/// Weight alpha_K of the distortion-ratio method for dimensionality d.
inline double fk_alpha(int k, double dims) {
  double alpha = 1.0 - 3.0 / (4.0 * dims);
  for (int K = 3; K <= k; ++K) alpha += (1.0 - alpha) / 6.0;
  return alpha;
}

/// f(1) = 1, f(K) = S_K / (alpha_K S_{K-1}); the answer is the smallest K with
/// f(K) < threshold, K-1 as soon as S_{K-1} = 0, else 1.
template <typename DistortionAt>
KEstimate estimate_k_from(int k_max, double dims, double threshold, DistortionAt&& distortion_at) {
  KEstimate est;
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  est.distortions.push_back(static_cast<double>(distortion_at(1)));
  est.f.push_back(1.0);
  for (int K = 2; K <= k_max; ++K) {
    const double prev = est.distortions.back();
    if (prev <= 0.0) {
      est.k = K - 1;
      return est;
    }
    const double s = static_cast<double>(distortion_at(K));
    est.distortions.push_back(s);
    const double f = s / (fk_alpha(K, dims) * prev);
    est.f.push_back(f);
    if (f < threshold) {
      est.k = K;
      return est;
    }
  }
  est.k = 1;
  return est;
}

/// K estimation over vector points with k-means (d = column count).
template <typename Scalar>
KEstimate estimate_k(const PointMatrix<Scalar>& points, int k_max, std::uint64_t seed, double threshold = 0.85) {
  if (k_max > points.rows()) throw std::invalid_argument("k_max exceeds the point count");
  const double dims = static_cast<double>(std::max<Eigen::Index>(points.cols(), 1));
  return estimate_k_from(k_max, dims, threshold, [&](int K) { return kmeans(points, K, seed).distortion; });
}

/// K estimation over a distance matrix with k-medoids and a configured
/// effective dimensionality.
template <typename Scalar>
KEstimate estimate_k_metric(const PointMatrix<Scalar>& distances, int k_max, std::uint64_t seed,
                            double effective_dims = 2.0, double threshold = 0.85) {
  if (k_max > distances.rows()) throw std::invalid_argument("k_max exceeds the point count");
  return estimate_k_from(k_max, effective_dims, threshold,
                         [&](int K) { return kmedoids(distances, K, seed).distortion; });
}

}  // namespace clustering
}  // namespace levelgen
