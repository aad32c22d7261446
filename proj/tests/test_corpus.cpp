#include <doctest.h>

#include "helpers.hpp"
#include "levelgen/corpus.hpp"
#include "levelgen/model.hpp"
#include "levelgen/playability.hpp"
#include "levelgen/segmentation.hpp"

using namespace levelgen;
using testing::make_frame;

namespace {

CorpusSpec three_sections(std::vector<int> dwell) {
  CorpusSpec spec;
  spec.catalog = make_catalog({"ground", "block", "coin"});
  for (std::size_t s = 0; s < dwell.size(); ++s) {
    std::vector<SpriteInstance> v;
    for (int x = 0; x < 16; ++x) v.push_back({static_cast<TypeId>(s % 3), x, 13 - static_cast<int>(s)});
    spec.blueprints.push_back(make_frame(16, 14, v));
  }
  spec.dwell = std::move(dwell);
  return spec;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("dwells 10 50 10") {
    const auto c = build_corpus(three_sections({10, 50, 10}));
    CHECK(c.trace.frames.size() == 70);
    CHECK(c.truth.boundaries == std::vector<int>{0, 10, 60});
    CHECK(c.truth.interaction_values == std::vector<int>{10, 50, 10});
    CHECK(c.truth.high_interaction == std::vector<bool>{false, true, false});
    CHECK_NOTHROW(validate_trace(c.trace));
  }

  TEST_CASE("equal dwells flag nothing") {
    const auto c = build_corpus(three_sections({1, 1, 1}));
    CHECK(c.trace.frames.size() == 3);
    CHECK(c.truth.high_interaction == std::vector<bool>{false, false, false});
  }

  TEST_CASE("single section is not above its own mean") {
    const auto c = build_corpus(three_sections({12}));
    CHECK(c.truth.high_interaction == std::vector<bool>{false});
    CHECK(segment_trace(c.trace).sections.size() == 1);
  }

  TEST_CASE("invalid specs are rejected") {
    auto spec = three_sections({3, 3, 3});
    spec.dwell[1] = 0;
    CHECK_THROWS_AS(build_corpus(spec), ValidationError);
    spec = three_sections({3, 3, 3});
    spec.blueprints[0] = make_frame(16, 20, {{0, 1, 18}});
    CHECK_THROWS_AS(build_corpus(spec), ValidationError);
    spec = three_sections({3, 3});
    spec.dwell.push_back(1);
    CHECK_THROWS_AS(build_corpus(spec), ValidationError);
  }

  TEST_CASE("ground truth round trip") {
    const auto c = build_corpus(random_corpus_spec(3));
    CHECK(parse_ground_truth(dump_ground_truth(c.truth)) == c.truth);
  }

  TEST_CASE("random corpora segment back to their ground truth") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto c = build_corpus(random_corpus_spec(seed));
      const auto set = segment_trace(c.trace);
      std::vector<int> starts, values;
      for (const auto& s : set.sections) {
        starts.push_back(s.start_frame);
        values.push_back(s.interaction_value);
      }
      CHECK(starts == c.truth.boundaries);
      CHECK(values == c.truth.interaction_values);
      CHECK(high_interaction_flags(set.sections) == c.truth.high_interaction);
    }
  }

  TEST_CASE("treetop fixture properties") {
    const auto spec = treetop_fixture();
    REQUIRE(spec.blueprints.size() == 34);
    const auto c = build_corpus(spec);
    std::vector<Frame> treetops;
    for (std::size_t i = 0; i < spec.blueprints.size(); ++i) {
      CHECK(c.truth.high_interaction[i] == (i % 2 == 1));
      if (i % 2 == 1) treetops.push_back(spec.blueprints[i]);
    }
    REQUIRE(treetops.size() == 17);
    int playable = 0;
    for (const auto& f : treetops) playable += is_playable(f, spec.standable).playable;
    CHECK(playable == 17);
    for (std::size_t i = 0; i < treetops.size(); ++i) {
      for (std::size_t j = i + 1; j < treetops.size(); ++j) CHECK_FALSE(is_duplicate(treetops[i], treetops[j]));
    }
    CHECK(build_corpus(treetop_fixture()).trace == c.trace);
  }

  TEST_CASE("treetop fixture model has several bark shape families") {
    const auto spec = treetop_fixture();
    std::vector<Frame> treetops;
    for (std::size_t i = 1; i < spec.blueprints.size(); i += 2) treetops.push_back(spec.blueprints[i]);
    ModelParams params;
    params.seed = 7;
    params.ignored_types = {*spec.walker};
    const auto model = build_style_model(treetops, spec.catalog, params);
    const TypeId bark = spec.catalog.require("bark");
    int bark_nodes = 0;
    for (const auto& s : model.s_nodes) bark_nodes += s.type == bark;
    CHECK(bark_nodes >= 2);
  }
}
