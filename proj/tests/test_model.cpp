#include <doctest.h>

#include "helpers.hpp"
#include "levelgen/clustering.hpp"
#include "levelgen/corpus.hpp"
#include "levelgen/model.hpp"
#include "levelgen/model_io.hpp"
#include "oracles.hpp"

using namespace levelgen;
using testing::frame_from_rows;
using testing::make_frame;

namespace {

ShapePair pair_of(TypeId type, std::vector<Tile> cells, std::vector<std::pair<TypeId, Tile>> rel, int section = 0) {
  ShapePair p;
  p.g.type = type;
  p.g.cells = std::move(cells);
  p.g.source_section = section;
  for (auto [t, c] : rel) p.d.relations.push_back({t, c, Eigen::Vector2d(c.x, c.y)});
  return p;
}

StyleModel fixture_model() {
  const auto spec = treetop_fixture();
  std::vector<Frame> layouts;
  for (std::size_t i = 1; i < spec.blueprints.size(); i += 2) layouts.push_back(spec.blueprints[i]);
  ModelParams params;
  params.seed = 7;
  params.ignored_types = {*spec.walker};
  return build_style_model(layouts, spec.catalog, params);
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("distance buckets") {
    CHECK(distance_bucket(0.0, 10.0, 100) == 0);
    CHECK(distance_bucket(5.0, 10.0, 100) == 50);
    CHECK(distance_bucket(10.0, 10.0, 100) == 99);
    CHECK(distance_bucket(0.0, 0.0, 100) == 0);
    CHECK_THROWS_AS(distance_bucket(1.0, 0.0, 100), std::invalid_argument);
  }

  TEST_CASE("edge probability tables") {
    const auto none = build_edge_probability_table({pair_of(0, {{0, 0}}, {})}, 10.0);
    CHECK(none.counts.empty());
    CHECK(none.total == 0);

    const auto single = build_edge_probability_table({pair_of(0, {{0, 0}}, {{1, {3, 0}}})}, 10.0);
    CHECK(single.probability({0, 1, 30}) == 1.0);

    const auto mixed = build_edge_probability_table(
        {pair_of(0, {{0, 0}}, {{1, {3, 0}}, {1, {0, 3}}, {2, {6, 8}}}), pair_of(0, {{0, 0}}, {{1, {3, 0}}})}, 10.0);
    CHECK(mixed.probability({0, 1, 30}) == doctest::Approx(0.75));
    CHECK(mixed.probability({0, 2, 99}) == doctest::Approx(0.25));
    CHECK(mixed.min_probability() == doctest::Approx(0.25));
    double sum = 0;
    for (const auto& [key, count] : mixed.counts) sum += mixed.probability(key);
    CHECK(sum <= 1.0 + 1e-12);

    CHECK_THROWS_AS(build_edge_probability_table({pair_of(0, {{0, 0}}, {{1, {1, 0}}})}, 0.0), std::invalid_argument);
  }

  TEST_CASE("one pair gives one S-node") {
    std::map<TypeId, std::vector<ShapePair>> by_type{{0, {pair_of(0, {{0, 0}}, {})}}};
    const auto s = derive_s_nodes(by_type, {}, 0.0);
    REQUIRE(s.size() == 1);
    CHECK(s[0].members.size() == 1);
  }

  TEST_CASE("small and large shapes split into two S-nodes of four") {
    std::vector<ShapePair> pairs;
    for (int i = 0; i < 4; ++i) {
      pairs.push_back(pair_of(0, {{0, 0}}, {{1, {1, 0}}}, i));
      pairs.push_back(pair_of(0, {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}}, {{1, {8, 8}}}, i));
    }
    const auto norms = pair_norms(pairs);
    const auto d = clustering::distance_matrix<double>(pairs, [&](const auto& a, const auto& b) {
      return gd_distance(a, b, norms);
    });
    const auto best = oracle::best_medoids(d, 2);
    CHECK(pairs[static_cast<std::size_t>(best[0])].g.cells.size() != pairs[static_cast<std::size_t>(best[1])].g.cells.size());

    ModelParams params;
    params.seed = 3;
    const auto s = derive_s_nodes({{0, pairs}}, params, max_relation_distance(pairs));
    REQUIRE(s.size() == 2);
    for (const auto& node : s) {
      REQUIRE(node.members.size() == 4);
      for (const auto& m : node.members) CHECK(m.g.cells.size() == node.members.front().g.cells.size());
    }
  }

  TEST_CASE("L-node grouping") {
    ModelParams params;
    const auto one = derive_s_nodes({{0, {pair_of(0, {{0, 0}}, {{1, {2, 0}}}, 0)}}}, params, 5.0);
    CHECK(derive_l_nodes(one, Eigen::MatrixXd::Ones(1, 2), params).size() == 1);

    // Identical signatures from separate sections.
    std::vector<SNode> same;
    for (int i = 0; i < 3; ++i) {
      SNode s;
      s.id = i;
      s.members = {pair_of(0, {{0, 0}}, {{1, {2, 0}}}, i)};
      s.table = build_edge_probability_table(s.members, 5.0);
      same.push_back(s);
    }
    const auto l_same = derive_l_nodes(same, Eigen::MatrixXd::Ones(3, 2), params);
    REQUIRE(l_same.size() == 1);
    CHECK(l_same[0].s_nodes == std::vector<int>{0, 1, 2});
    CHECK(l_same[0].sections == std::vector<int>{0, 1, 2});
  }

  TEST_CASE("disjoint vocabularies give separate L-nodes") {
    const auto cat = make_catalog({"lava", "rock", "water", "fish"});
    std::vector<Frame> layouts{
        frame_from_rows({"l...r", "lll.r"}, {{'l', 0}, {'r', 1}}),
        frame_from_rows({".l..r", "ll..r"}, {{'l', 0}, {'r', 1}}),
        frame_from_rows({"w..f.", "www.f"}, {{'w', 2}, {'f', 3}}),
        frame_from_rows({"ww.f.", ".w..f"}, {{'w', 2}, {'f', 3}}),
    };
    const auto model = build_style_model(layouts, cat, {});
    REQUIRE(model.l_nodes.size() >= 2);
    for (const auto& l : model.l_nodes) {
      std::set<bool> themes;
      for (int s : l.s_nodes) themes.insert(model.s_node(s).type >= 2);
      CHECK(themes.size() == 1);
    }
    std::set<int> seen;
    for (const auto& l : model.l_nodes) {
      for (int s : l.s_nodes) CHECK(seen.insert(s).second);
    }
    CHECK(seen.size() == model.s_nodes.size());
  }

  TEST_CASE("single shape section") {
    const auto model = build_style_model({make_frame(16, 14, {{0, 4, 4}})}, make_catalog({"a", "b"}), {});
    CHECK(model.s_nodes.size() == 1);
    CHECK(model.l_nodes.size() == 1);
    CHECK(model.n_node.rows() == 1);
    CHECK(model.n_node(0, 0) == 1);
    CHECK(model.l_node_of(0) == 0);
    CHECK_THROWS_AS(build_style_model(std::vector<Frame>{}, make_catalog({"a"}), {}), ValidationError);
  }

  TEST_CASE("N rows equal section counts and ignored types are removed") {
    const auto cat = make_catalog({"a", "b", "walker"});
    const std::vector<Frame> layouts{frame_from_rows({"aab", "..w"}, {{'a', 0}, {'b', 1}, {'w', 2}}),
                                     frame_from_rows({"b.b", "w.a"}, {{'a', 0}, {'b', 1}, {'w', 2}})};
    ModelParams params;
    params.ignored_types = {2};
    const auto model = build_style_model(layouts, cat, params);
    for (std::size_t i = 0; i < layouts.size(); ++i) {
      auto expected = count_vector(layouts[i], cat.size());
      expected(2) = 0;
      CHECK(model.n_node.row(static_cast<Eigen::Index>(i)).transpose() == expected);
    }
    for (const auto& s : model.s_nodes) CHECK(s.type != 2);
  }

  TEST_CASE("model round trip") {
    const auto model = fixture_model();
    const auto text = dump_model(model);
    const auto back = parse_model(text);
    CHECK(back == model);
    CHECK(dump_model(back) == text);
    testing::TempDir dir("model");
    save_model(model, dir.path / "m.json");
    CHECK(load_model(dir.path / "m.json") == model);
    CHECK_THROWS_AS(parse_model(R"({"version":99})"), ValidationError);
  }

  TEST_CASE("fixture model structure") {
    const auto model = fixture_model();
    CHECK(model.sections.size() == 17);
    const TypeId bark = model.catalog.require("bark");
    int bark_nodes = 0;
    for (const auto& s : model.s_nodes) {
      bark_nodes += s.type == bark;
      for (const auto& m : s.members) CHECK(m.g.type == s.type);
      CHECK(s.id == &s - model.s_nodes.data());
    }
    CHECK(bark_nodes >= 2);
    CHECK(fixture_model() == model);
  }
}
