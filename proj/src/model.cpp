#include "levelgen/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "levelgen/clustering.hpp"

namespace levelgen {

int distance_bucket(double magnitude, double max_distance, int bucket_count) {
  if (max_distance <= 0.0) {
    if (magnitude > 0.0) throw std::invalid_argument("distance_bucket: max_distance is zero but the vector is not");
    return 0;
  }
  const int b = static_cast<int>(std::floor(bucket_count * magnitude / max_distance));
  return std::clamp(b, 0, bucket_count - 1);
}

double EdgeProbabilityTable::probability(const EdgeKey& key) const {
  auto it = counts.find(key);
  if (it == counts.end() || total == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total);
}

double EdgeProbabilityTable::min_probability() const {
  double best = 1.0;
  for (const auto& [key, count] : counts) best = std::min(best, static_cast<double>(count) / total);
  return best;
}

EdgeProbabilityTable build_edge_probability_table(const std::vector<ShapePair>& members, double max_distance,
                                                  int bucket_count) {
  if (members.empty()) throw std::invalid_argument("edge table needs at least one member");
  EdgeProbabilityTable table;
  table.max_distance = max_distance;
  table.bucket_count = bucket_count;
  for (const auto& m : members) {
    for (const auto& r : m.d.relations) {
      ++table.counts[{m.g.type, r.target_type, table.bucket_of(r.corner)}];
      ++table.total;
    }
  }
  return table;
}

double max_relation_distance(const std::vector<ShapePair>& pairs) {
  double best = 0.0;
  for (const auto& p : pairs) {
    for (const auto& r : p.d.relations) best = std::max(best, magnitude(r.corner));
  }
  return best;
}

int StyleModel::l_node_of(int s_node_id) const {
  for (const auto& l : l_nodes) {
    if (std::find(l.s_nodes.begin(), l.s_nodes.end(), s_node_id) != l.s_nodes.end()) return l.id;
  }
  return -1;
}

std::vector<SNode> derive_s_nodes(const std::map<TypeId, std::vector<ShapePair>>& pairs_by_type,
                                  const ModelParams& params, double max_distance) {
  std::vector<SNode> out;
  for (const auto& [type, pairs] : pairs_by_type) {
    if (pairs.empty()) continue;
    const PairNorms norms = pair_norms(pairs);
    const auto distances = clustering::distance_matrix<double>(
        pairs, [&](const ShapePair& a, const ShapePair& b) { return gd_distance(a, b, norms, params.shape_weight); });
    const int k_max = std::min<int>(params.k_max, static_cast<int>(pairs.size()));
    const int k = clustering::estimate_k_metric(distances, k_max, params.seed, params.pair_dims, params.fk_threshold).k;
    const auto clusters = clustering::kmedoids(distances, k, params.seed);

    std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < pairs.size(); ++i) groups[static_cast<std::size_t>(clusters.assignment[i])].push_back(i);
    std::sort(groups.begin(), groups.end());
    for (const auto& group : groups) {
      SNode s;
      s.id = static_cast<int>(out.size());
      s.type = type;
      for (auto i : group) s.members.push_back(pairs[i]);
      s.table = build_edge_probability_table(s.members, max_distance, params.bucket_count);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<EdgeKey> signature_universe(const std::vector<SNode>& s_nodes) {
  std::set<EdgeKey> keys;
  for (const auto& s : s_nodes) {
    for (const auto& [key, count] : s.table.counts) {
      if (count > 0) keys.insert(key);
    }
  }
  return {keys.begin(), keys.end()};
}

std::vector<char> edge_signature(const SNode& s, const std::vector<EdgeKey>& universe) {
  std::vector<char> sig(universe.size(), 0);
  for (std::size_t i = 0; i < universe.size(); ++i) sig[i] = s.table.probability(universe[i]) > 0.0;
  return sig;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<LNode> derive_l_nodes(const std::vector<SNode>& s_nodes, const Eigen::MatrixXd& n_node,
                                  const ModelParams& params) {
  if (s_nodes.empty()) throw std::invalid_argument("derive_l_nodes: no S-nodes");

  // S-nodes drawing members from a common section stay together.
  DisjointSets sets(s_nodes.size());
  std::map<int, std::size_t> first_owner;
  for (std::size_t i = 0; i < s_nodes.size(); ++i) {
    for (const auto& m : s_nodes[i].members) {
      auto [it, inserted] = first_owner.emplace(m.g.source_section, i);
      if (!inserted) sets.unite(it->second, i);
    }
  }
  std::map<std::size_t, std::vector<int>> by_root;
  for (std::size_t i = 0; i < s_nodes.size(); ++i) by_root[sets.find(i)].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> groups;
  for (auto& [root, members] : by_root) groups.push_back(std::move(members));

  const auto universe = signature_universe(s_nodes);
  std::vector<std::vector<char>> group_sig;
  for (const auto& g : groups) {
    std::vector<char> sig(universe.size(), 0);
    for (int s : g) {
      const auto one = edge_signature(s_nodes[static_cast<std::size_t>(s)], universe);
      for (std::size_t b = 0; b < sig.size(); ++b) sig[b] = sig[b] || one[b];
    }
    group_sig.push_back(std::move(sig));
  }
  const auto hamming = clustering::distance_matrix<double>(group_sig, [](const auto& a, const auto& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return static_cast<double>(d);
  });
  const int k_max = std::min<int>(params.k_max, static_cast<int>(groups.size()));
  const double dims = std::max<double>(1.0, static_cast<double>(universe.size()));
  const int k = clustering::estimate_k_metric(hamming, k_max, params.seed, dims, params.fk_threshold).k;
  const auto clusters = clustering::kmedoids(hamming, k, params.seed);

  std::vector<std::vector<int>> l_members(static_cast<std::size_t>(k));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto& dst = l_members[static_cast<std::size_t>(clusters.assignment[g])];
    dst.insert(dst.end(), groups[g].begin(), groups[g].end());
  }
  for (auto& m : l_members) std::sort(m.begin(), m.end());
  std::sort(l_members.begin(), l_members.end());

  std::vector<LNode> out;
  for (auto& members : l_members) {
    LNode l;
    l.id = static_cast<int>(out.size());
    l.s_nodes = members;
    std::set<int> sections;
    for (int s : members) {
      for (const auto& m : s_nodes[static_cast<std::size_t>(s)].members) {
        if (m.g.source_section >= 0) sections.insert(m.g.source_section);
      }
    }
    l.sections.assign(sections.begin(), sections.end());
    l.n_rows.resize(static_cast<Eigen::Index>(l.sections.size()), n_node.cols());
    for (std::size_t r = 0; r < l.sections.size(); ++r) {
      const auto row = static_cast<Eigen::Index>(l.sections[r]);
      if (row < n_node.rows()) {
        l.n_rows.row(static_cast<Eigen::Index>(r)) = n_node.row(row);
      } else {
        l.n_rows.row(static_cast<Eigen::Index>(r)).setZero();
      }
    }
    out.push_back(std::move(l));
  }
  return out;
}

StyleModel build_style_model(const std::vector<Frame>& layouts, const SpriteCatalog& catalog,
                             const ModelParams& params) {
  std::vector<LevelSection> sections;
  for (std::size_t i = 0; i < layouts.size(); ++i) {
    LevelSection s;
    s.trace_id = "section" + std::to_string(i);
    s.start_frame = s.end_frame = layouts[i].index();
    s.representative = layouts[i];
    s.interaction_value = 1;
    sections.push_back(std::move(s));
  }
  return build_style_model(sections, catalog, params);
}

StyleModel build_style_model(const std::vector<LevelSection>& sections, const SpriteCatalog& catalog,
                             const ModelParams& params) {
  if (sections.empty()) throw ValidationError("build_style_model: no level sections");

  StyleModel model;
  model.catalog = catalog;
  model.params = params;
  model.width = sections.front().representative.width();
  model.height = sections.front().representative.height();
  model.n_node = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sections.size()),
                                       static_cast<Eigen::Index>(catalog.size()));

  std::map<TypeId, std::vector<ShapePair>> pairs_by_type;
  std::vector<ShapePair> all_pairs;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const Frame layout = without_types(sections[i].representative, params.ignored_types);
    model.sections.push_back(layout);
    model.section_ids.push_back(sections[i].trace_id + ":" + std::to_string(sections[i].start_frame));
    model.n_node.row(static_cast<Eigen::Index>(i)) = count_vector(layout, catalog.size()).transpose();
    for (auto& pair : build_shape_pairs(layout, static_cast<int>(i))) {
      all_pairs.push_back(pair);
      pairs_by_type[pair.g.type].push_back(std::move(pair));
    }
  }
  if (all_pairs.empty()) throw ValidationError("build_style_model: sections contain no sprites");

  model.max_distance = max_relation_distance(all_pairs);
  model.s_nodes = derive_s_nodes(pairs_by_type, params, model.max_distance);
  model.l_nodes = derive_l_nodes(model.s_nodes, model.n_node, params);
  return model;
}

}  // namespace levelgen
