#include <doctest.h>

#include <queue>
#include <set>

#include "helpers.hpp"
#include "levelgen/clustering.hpp"
#include "levelgen/playability.hpp"

using namespace levelgen;
using testing::frame_from_rows;
using testing::make_frame;

namespace {

const std::vector<TypeId> kStandable{0};

// Breadth-first search over every rightward hop inside the envelope,
// written from the envelope definition rather than the library helpers.
bool bfs_reaches_exit(const Frame& f, const SpriteInstance& from, const JumpEnvelope& env) {
  std::set<std::pair<int, int>> occupied;
  for (const auto& s : f.instances()) occupied.insert({s.x, s.y});
  std::vector<SpriteInstance> points;
  for (const auto& s : f.instances()) {
    if (s.type == 0 && !occupied.count({s.x, s.y - 1}) && !occupied.count({s.x, s.y - 2})) points.push_back(s);
  }
  std::set<std::pair<int, int>> seen{{from.x, from.y}};
  std::queue<SpriteInstance> q;
  q.push(from);
  while (!q.empty()) {
    const auto at = q.front();
    q.pop();
    if (at.x >= f.width() - env.max_gap) return true;
    for (const auto& p : points) {
      const int dx = p.x - at.x;
      const int up = at.y - p.y;
      const bool ok = dx >= 1 && dx <= env.max_gap + 1 && up <= env.max_rise && (!env.max_drop || -up <= *env.max_drop);
      if (ok && seen.insert({p.x, p.y}).second) q.push(p);
    }
  }
  return false;
}

Frame random_platforms(Rng& rng) {
  std::vector<SpriteInstance> v;
  std::set<std::pair<int, int>> used;
  for (int x = 0; x < 16; ++x) {
    if (rng.uniform() < 0.35) continue;
    const int y = 6 + static_cast<int>(rng.index(8));
    if (used.insert({x, y}).second) v.push_back({0, x, y});
  }
  for (int k = 0; k < 6; ++k) {
    const int x = static_cast<int>(rng.index(16));
    const int y = static_cast<int>(rng.index(14));
    if (used.insert({x, y}).second) v.push_back({static_cast<TypeId>(rng.index(2)), x, y});
  }
  return make_frame(16, 14, v);
}

}  // namespace

TEST_SUITE("playability") {
  TEST_CASE("flat ground is playable") {
    std::vector<SpriteInstance> v;
    for (int x = 0; x < 16; ++x) v.push_back({0, x, 13});
    const auto r = is_playable(make_frame(16, 14, v), kStandable);
    CHECK(r.playable);
    CHECK(r.failure == PlayabilityFailure::none);
    REQUIRE(r.entry.has_value());
    CHECK(r.entry->x == 0);
    CHECK(r.exit->x >= 12);
  }

  TEST_CASE("a gap one wider than the envelope blocks the path") {
    std::vector<SpriteInstance> v;
    for (int x = 0; x <= 5; ++x) v.push_back({0, x, 13});
    for (int x = 11; x < 16; ++x) v.push_back({0, x, 13});
    const Frame f = make_frame(16, 14, v);
    const JumpEnvelope env;
    const auto r = is_playable(f, kStandable, env);
    CHECK_FALSE(r.playable);
    CHECK(r.failure == PlayabilityFailure::no_path);
    for (int x = 0; x < env.max_gap; ++x) CHECK_FALSE(bfs_reaches_exit(f, {0, x, 13}, env));

    v.push_back({0, 6, 13});
    CHECK(is_playable(make_frame(16, 14, v), kStandable, env).playable);
  }

  TEST_CASE("missing entry or exit") {
    std::vector<SpriteInstance> v;
    for (int x = 4; x < 16; ++x) v.push_back({0, x, 13});
    auto r = is_playable(make_frame(16, 14, v), kStandable);
    CHECK(r.failure == PlayabilityFailure::no_entry);
    v.clear();
    for (int x = 0; x < 12; ++x) v.push_back({0, x, 13});
    r = is_playable(make_frame(16, 14, v), kStandable);
    CHECK(r.failure == PlayabilityFailure::no_exit);
    CHECK(to_string(PlayabilityFailure::no_exit) == "no_exit");
  }

  TEST_CASE("covered tiles are not standable") {
    const Frame f = frame_from_rows({"..", "c.", "gg"}, {{'g', 0}, {'c', 1}});
    const auto points = stand_points(f, kStandable);
    REQUIRE(points.size() == 1);
    CHECK(points[0].x == 1);
    const Frame top = frame_from_rows({"g"}, {{'g', 0}});
    CHECK(stand_points(top, kStandable).size() == 1);
  }

  TEST_CASE("staircase") {
    std::vector<SpriteInstance> v;
    for (int i = 0; i < 8; ++i) v.push_back({0, 2 * i, 13 - i});
    const Frame f = make_frame(16, 14, v);
    const auto r = is_playable(f, kStandable);
    REQUIRE(r.playable);
    for (std::size_t i = 1; i < r.path.size(); ++i) {
      CHECK(r.path[i].x > r.path[i - 1].x);
      CHECK(can_hop(r.path[i - 1], r.path[i], {}));
    }
    JumpEnvelope tight;
    tight.max_gap = 1;
    tight.max_rise = 1;
    const auto path = greedy_path(make_frame(15, 14, v), kStandable, tight, v[0]);
    REQUIRE(path.has_value());
    CHECK(path->size() == 8);
  }

  TEST_CASE("greedy trap") {
    std::vector<SpriteInstance> v{{0, 0, 13}, {0, 1, 13}, {0, 3, 9}, {0, 5, 13}};
    for (int x = 8; x < 16; ++x) v.push_back({0, x, 5});
    const Frame f = make_frame(16, 14, v);
    const JumpEnvelope env;
    CHECK_FALSE(greedy_path(f, kStandable, env, {0, 0, 13}).has_value());
    CHECK(bfs_reaches_exit(f, {0, 0, 13}, env));
  }

  TEST_CASE("single platform is a one node path") {
    const Frame f = make_frame(6, 4, {{0, 3, 3}});
    const auto r = is_playable(f, kStandable);
    REQUIRE(r.playable);
    CHECK(r.path.size() == 1);
  }

  TEST_CASE("drop limit") {
    const Frame f = make_frame(16, 14, {{0, 0, 2}, {0, 1, 2}, {0, 5, 13}, {0, 9, 13}, {0, 13, 13}});
    CHECK(is_playable(f, kStandable).playable);
    JumpEnvelope env;
    env.max_drop = 3;
    CHECK_FALSE(is_playable(f, kStandable, env).playable);
    env.max_drop = -1;
    CHECK_THROWS_AS(env.validate(), ValidationError);
  }

  TEST_CASE("greedy success implies a breadth-first path") {
    Rng rng(8);
    int greedy_ok = 0, bfs_only = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const Frame f = random_platforms(rng);
      const JumpEnvelope env;
      for (const auto& e : stand_points(f, kStandable)) {
        if (!is_entry(e, env)) continue;
        const auto path = greedy_path(f, kStandable, env, e);
        const bool bfs = bfs_reaches_exit(f, e, env);
        if (path) {
          ++greedy_ok;
          CHECK(bfs);
          for (std::size_t i = 1; i < path->size(); ++i) CHECK((*path)[i].x > (*path)[i - 1].x);
        } else if (bfs) {
          ++bfs_only;
        }
      }
    }
    CHECK(greedy_ok > 50);
    MESSAGE("greedy successes: " << greedy_ok << ", paths only breadth-first search finds: " << bfs_only);
  }
}
