#include "levelgen/generator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace levelgen {

void GenerationParams::validate() const {
  if (!(p_E > 0.0 && p_E <= 1.0)) throw ValidationError("generation: p_E must lie in (0, 1]");
  if (!(p_C >= 0.0 && p_C <= 1.0)) throw ValidationError("generation: p_C must lie in [0, 1]");
  if (max_depth < 1 || max_outputs < 1 || max_expansions < 1) throw ValidationError("generation: caps must be positive");
  if (match_tolerance < 0) throw ValidationError("generation: match_tolerance must be non-negative");
}

PartialSection::PartialSection(const StyleModel& model, int l_node)
    : l_node_(l_node),
      width_(model.width),
      height_(model.height),
      counts_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.catalog.size()))),
      occupied_(static_cast<std::size_t>(model.width * model.height), 0) {}

bool PartialSection::fits(const GNode& g, const Tile& anchor) const {
  for (const auto& c : g.cells) {
    const Tile t = anchor + c;
    if (t.x < 0 || t.y < 0 || t.x >= width_ || t.y >= height_) return false;
    if (occupied_[static_cast<std::size_t>(t.y * width_ + t.x)]) return false;
  }
  return true;
}

void PartialSection::add(const StyleModel& model, const Placement& p) {
  const GNode& g = model.s_node(p.s_node).members.at(static_cast<std::size_t>(p.member)).g;
  if (!fits(g, p.anchor)) throw std::invalid_argument("placement collides or leaves the section");
  for (const auto& c : g.cells) {
    const Tile t = p.anchor + c;
    occupied_[static_cast<std::size_t>(t.y * width_ + t.x)] = 1;
  }
  counts_(g.type) += static_cast<double>(g.cells.size());
  placements_.push_back(p);
}

std::vector<SpriteInstance> PartialSection::instances(const StyleModel& model) const {
  std::vector<SpriteInstance> out;
  for (const auto& p : placements_) {
    const GNode& g = model.s_node(p.s_node).members.at(static_cast<std::size_t>(p.member)).g;
    for (const auto& c : g.cells) out.push_back({g.type, p.anchor.x + c.x, p.anchor.y + c.y});
  }
  std::sort(out.begin(), out.end());
  return out;
}

NearestN nearest_n(const Eigen::VectorXd& counts, const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0) throw std::invalid_argument("nearest_n: no N rows");
  NearestN out;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const double d = (rows.row(r).transpose() - counts).squaredNorm();
    if (d < best) {
      best = d;
      out.row = r;
    }
  }
  const Eigen::VectorXd deficit = rows.row(out.row).transpose() - counts;
  out.deficit = deficit.size() > 0 ? deficit.maxCoeff() : 0.0;
  for (Eigen::Index t = 0; t < deficit.size(); ++t) {
    if (deficit(t) > 0.0 && deficit(t) == out.deficit) {
      out.type = static_cast<TypeId>(t);
      break;
    }
  }
  return out;
}

namespace {

const ShapePair& member_of(const StyleModel& model, const Placement& p) {
  return model.s_node(p.s_node).members.at(static_cast<std::size_t>(p.member));
}

// Placed shape anchors grouped by type, each tagged with its placement index.
using PlacedByType = std::vector<std::vector<std::pair<Tile, int>>>;

PlacedByType index_placed(const PartialSection& section, const StyleModel& model) {
  PlacedByType out(model.catalog.size());
  const auto& placed = section.placements();
  for (std::size_t q = 0; q < placed.size(); ++q) {
    out[static_cast<std::size_t>(member_of(model, placed[q]).g.type)].emplace_back(placed[q].anchor, static_cast<int>(q));
  }
  return out;
}

// Kuhn's augmenting paths over relation -> placed shape edges.
class Matcher {
 public:
  int run(const std::vector<std::vector<int>>& edges, std::size_t right_size) {
    owner_.assign(right_size, -1);
    int matched = 0;
    for (std::size_t l = 0; l < edges.size(); ++l) {
      if (edges[l].empty()) continue;
      visited_.assign(right_size, 0);
      if (augment(edges, static_cast<int>(l))) ++matched;
    }
    return matched;
  }

 private:
  bool augment(const std::vector<std::vector<int>>& edges, int left) {
    for (int r : edges[static_cast<std::size_t>(left)]) {
      if (visited_[static_cast<std::size_t>(r)]) continue;
      visited_[static_cast<std::size_t>(r)] = 1;
      if (owner_[static_cast<std::size_t>(r)] < 0 || augment(edges, owner_[static_cast<std::size_t>(r)])) {
        owner_[static_cast<std::size_t>(r)] = left;
        return true;
      }
    }
    return false;
  }

  std::vector<int> owner_;
  std::vector<char> visited_;
};

int count_matches(const PlacedByType& placed, std::size_t placed_count, const std::vector<Relation>& relations,
                  const Tile& anchor, int tolerance) {
  thread_local std::vector<std::vector<int>> edges;
  thread_local Matcher matcher;
  edges.resize(relations.size());
  bool contested = false;
  thread_local std::vector<char> used;
  used.assign(placed_count, 0);
  int direct = 0;
  for (std::size_t r = 0; r < relations.size(); ++r) {
    edges[r].clear();
    const Tile target = anchor + relations[r].corner;
    for (const auto& [at, q] : placed[static_cast<std::size_t>(relations[r].target_type)]) {
      if (chebyshev(at, target) <= tolerance) edges[r].push_back(q);
    }
    if (edges[r].size() > 1) contested = true;
    if (edges[r].size() == 1) {
      if (used[static_cast<std::size_t>(edges[r][0])]) contested = true;
      used[static_cast<std::size_t>(edges[r][0])] = 1;
      ++direct;
    }
  }
  if (!contested) return direct;
  return matcher.run(edges, placed_count);
}

struct AnchorChoice {
  Tile anchor;
  int matches = 0;
};

// Relation probabilities are looked up once per (S-node, member).
const std::vector<double>& relation_probabilities(const SNode& s, const ShapePair& pair,
                                                  std::vector<double>& storage) {
  storage.clear();
  for (const auto& r : pair.d.relations) storage.push_back(s.table.probability(pair.g.type, r));
  return storage;
}

std::optional<AnchorChoice> best_anchor(const PartialSection& section, const PlacedByType& placed,
                                        const ShapePair& pair, const std::vector<double>& probs, int tolerance) {
  Tile anchor = pair.g.anchor;
  const std::size_t placed_count = section.placements().size();
  if (placed_count > 0) {
    thread_local std::vector<std::pair<Tile, double>> implied;
    implied.clear();
    for (std::size_t r = 0; r < pair.d.relations.size(); ++r) {
      const Relation& rel = pair.d.relations[r];
      for (const auto& [at, q] : placed[static_cast<std::size_t>(rel.target_type)]) {
        implied.emplace_back(at - rel.corner, probs[r]);
      }
    }
    // Highest probability first within each anchor, anchors ascending.
    std::sort(implied.begin(), implied.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first < b.first : a.second > b.second;
    });
    int best_matches = -1;
    double best_p = -1.0;
    for (std::size_t i = 0; i < implied.size(); ++i) {
      if (i > 0 && implied[i].first == implied[i - 1].first) continue;
      const auto& [candidate, p] = implied[i];
      const int m = count_matches(placed, placed_count, pair.d.relations, candidate, tolerance);
      if (m > best_matches || (m == best_matches && p > best_p)) {
        best_matches = m;
        best_p = p;
        anchor = candidate;
      }
    }
  }
  auto result = [&](const Tile& a) -> AnchorChoice {
    return {a, placed_count > 0 ? count_matches(placed, placed_count, pair.d.relations, a, tolerance) : 0};
  };
  if (section.fits(pair.g, anchor)) return result(anchor);
  for (int ring = 1; ring <= tolerance; ++ring) {
    for (int dx = -ring; dx <= ring; ++dx) {
      for (int dy = -ring; dy <= ring; ++dy) {
        if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
        const Tile shifted = anchor + Tile{dx, dy};
        if (section.fits(pair.g, shifted)) return result(shifted);
      }
    }
  }
  return std::nullopt;
}

double coexist_from(const PartialSection& section, const ShapePair& pair, int matches) {
  if (section.empty() || pair.d.relations.empty()) return 1.0;
  return static_cast<double>(matches) / static_cast<double>(section.placements().size());
}

}  // namespace

std::optional<TypeId> required_edge_type(const PartialSection& section, const StyleModel& model, double p_E,
                                         int tolerance) {
  std::optional<TypeId> best;
  double best_p = -1.0;
  const auto& placed = section.placements();
  const PlacedByType by_type = index_placed(section, model);
  for (std::size_t i = 0; i < placed.size(); ++i) {
    const SNode& s = model.s_node(placed[i].s_node);
    const ShapePair& pair = member_of(model, placed[i]);
    for (const auto& r : pair.d.relations) {
      const double p = s.table.probability(pair.g.type, r);
      if (p < p_E) continue;
      if (p < best_p || (p == best_p && best && *best <= r.target_type)) continue;
      const Tile target = placed[i].anchor + r.corner;
      bool satisfied = false;
      for (const auto& [at, q] : by_type[static_cast<std::size_t>(r.target_type)]) {
        if (q != static_cast<int>(i) && chebyshev(at, target) <= tolerance) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      best_p = p;
      best = r.target_type;
    }
  }
  return best;
}

int matched_relations(const PartialSection& section, const ShapePair& pair, const Tile& anchor,
                      const StyleModel& model, int tolerance) {
  return count_matches(index_placed(section, model), section.placements().size(), pair.d.relations, anchor,
                       tolerance);
}

double coexist_probability(const PartialSection& section, const ShapePair& pair, const Tile& anchor,
                           const StyleModel& model, int tolerance) {
  if (section.empty() || pair.d.relations.empty()) return 1.0;
  return coexist_from(section, pair, matched_relations(section, pair, anchor, model, tolerance));
}

std::optional<Tile> choose_anchor(const PartialSection& section, int s_node, int member, const StyleModel& model,
                                  int tolerance) {
  const SNode& s = model.s_node(s_node);
  const ShapePair& pair = s.members.at(static_cast<std::size_t>(member));
  std::vector<double> probs;
  const auto choice = best_anchor(section, index_placed(section, model), pair, relation_probabilities(s, pair, probs),
                                  tolerance);
  if (!choice) return std::nullopt;
  return choice->anchor;
}

bool is_terminal(const PartialSection& section, const StyleModel& model, double p_E, int tolerance) {
  const LNode& l = model.l_nodes.at(static_cast<std::size_t>(section.l_node()));
  if (nearest_n(section.counts(), l.n_rows).deficit > 0.0) return false;
  return !required_edge_type(section, model, p_E, tolerance).has_value();
}

namespace {

std::uint64_t fnv1a(const std::vector<Placement>& path) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::int64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= static_cast<std::uint64_t>(v >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& p : path) {
    mix(p.s_node);
    mix(p.member);
    mix(p.anchor.x);
    mix(p.anchor.y);
  }
  return h;
}

class Enumerator {
 public:
  Enumerator(const StyleModel& model, const GenerationParams& params) : model_(model), params_(params) {
    for (const auto& s : model.s_nodes) {
      auto& per_member = probs_.emplace_back();
      for (const auto& m : s.members) {
        std::vector<double> p;
        relation_probabilities(s, m, p);
        per_member.push_back(std::move(p));
      }
    }
  }

  void run_seed(int l_node, const Placement& seed) {
    PartialSection section(model_, l_node);
    section.add(model_, seed);
    path_ = {seed};
    seed_ = seed;
    visit(section);
  }

  GenerationResult& result() { return result_; }
  std::vector<GeneratedSection>& found() { return found_; }

 private:
  void visit(const PartialSection& section) {
    if (stop_) return;
    std::vector<Placement> key = section.placements();
    std::sort(key.begin(), key.end());
    key.push_back({section.l_node(), -1, {}});
    if (!seen_.insert(std::move(key)).second) return;
    if (++result_.expansions > params_.max_expansions) {
      result_.truncated = stop_ = true;
      return;
    }

    const LNode& l = model_.l_nodes[static_cast<std::size_t>(section.l_node())];
    const NearestN n = nearest_n(section.counts(), l.n_rows);
    const auto t_e = required_edge_type(section, model_, params_.p_E, params_.match_tolerance);
    if (n.deficit <= 0.0 && !t_e) {
      record(section);
      return;
    }
    const TypeId next = n.deficit <= 0.0 ? *t_e : n.type;
    if (static_cast<int>(section.placements().size()) >= params_.max_depth) {
      result_.depth_limited = true;
      return;
    }
    const PlacedByType placed = index_placed(section, model_);
    for (int s_id : l.s_nodes) {
      const SNode& s = model_.s_node(s_id);
      if (s.type != next) continue;
      for (std::size_t m = 0; m < s.members.size() && !stop_; ++m) {
        const auto choice = best_anchor(section, placed, s.members[m], probs_[static_cast<std::size_t>(s_id)][m],
                                        params_.match_tolerance);
        if (!choice) continue;
        if (!(coexist_from(section, s.members[m], choice->matches) > params_.p_C)) continue;
        PartialSection next_section = section;
        const Placement placement{s_id, static_cast<int>(m), choice->anchor};
        next_section.add(model_, placement);
        path_.push_back(placement);
        visit(next_section);
        path_.pop_back();
      }
    }
  }

  void record(const PartialSection& section) {
    auto instances = section.instances(model_);
    if (!layouts_.insert(instances).second) return;
    if (static_cast<int>(layouts_.size()) > params_.max_outputs) {
      result_.truncated = stop_ = true;
      return;
    }
    GeneratedSection g;
    g.layout = Frame(0, model_.width, model_.height, std::move(instances));
    g.seed = seed_;
    g.placements = path_;
    g.l_node = section.l_node();
    g.p_E = params_.p_E;
    g.p_C = params_.p_C;
    g.trace_hash = fnv1a(path_);
    found_.push_back(std::move(g));
  }

  const StyleModel& model_;
  const GenerationParams& params_;
  GenerationResult result_;
  std::vector<GeneratedSection> found_;
  std::set<std::vector<Placement>> seen_;
  std::set<std::vector<SpriteInstance>> layouts_;
  std::vector<Placement> path_;
  std::vector<std::vector<std::vector<double>>> probs_;
  Placement seed_;
  bool stop_ = false;
};

}  // namespace

GenerationResult generate_all(const StyleModel& model, const GenerationParams& params) {
  params.validate();
  if (model.s_nodes.empty()) throw ValidationError("generate_all: model has no S-nodes");

  Enumerator e(model, params);
  for (const auto& l : model.l_nodes) {
    for (int s_id : l.s_nodes) {
      const SNode& s = model.s_node(s_id);
      for (std::size_t m = 0; m < s.members.size(); ++m) {
        const Placement seed{s_id, static_cast<int>(m), s.members[m].g.anchor};
        PartialSection probe(model, l.id);
        if (!probe.fits(s.members[m].g, seed.anchor)) continue;
        e.run_seed(l.id, seed);
      }
    }
  }

  GenerationResult result = std::move(e.result());
  auto found = std::move(e.found());
  std::sort(found.begin(), found.end(), [](const GeneratedSection& a, const GeneratedSection& b) {
    return a.layout.instances() < b.layout.instances();
  });
  result.raw_count = found.size();
  for (const auto& g : found) result.raw.push_back(g.layout);

  for (auto& g : found) {
    if (params.dedup) {
      auto dup = [&](const Frame& other) { return is_duplicate(g.layout, other, 0.9); };
      if (std::any_of(model.sections.begin(), model.sections.end(), dup)) continue;
      if (std::any_of(result.sections.begin(), result.sections.end(),
                      [&](const GeneratedSection& o) { return dup(o.layout); })) {
        continue;
      }
    }
    g.layout = g.layout.with_index(static_cast<int>(result.sections.size()));
    result.sections.push_back(std::move(g));
  }
  return result;
}

}  // namespace levelgen
