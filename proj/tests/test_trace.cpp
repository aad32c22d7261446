#include <doctest.h>

#include "helpers.hpp"
#include "levelgen/corpus.hpp"
#include "levelgen/trace_io.hpp"

using namespace levelgen;
using testing::make_frame;

namespace {

Frame ten_in_a_row(int shift_last = 0) {
  std::vector<SpriteInstance> v;
  for (int x = 0; x < 10; ++x) v.push_back({0, x, 5 + (x == 9 ? shift_last : 0)});
  return make_frame(16, 14, v);
}

Trace small_trace() {
  Trace t;
  t.catalog = make_catalog({"bark", "treetop", "coin"});
  t.frames.push_back(make_frame(16, 14, {{0, 3, 10}, {0, 4, 10}, {1, 3, 9}}, 0));
  t.frames.push_back(make_frame(16, 14, {{2, 7, 2}}, 1));
  t.frames.push_back(make_frame(16, 14, {}, 4));
  return t;
}

}  // namespace

TEST_SUITE("trace") {
  TEST_CASE("frame difference examples") {
    const Frame a = ten_in_a_row();
    CHECK(frame_difference(a, a) == 0.0);
    const Frame disjoint = make_frame(16, 14, {{1, 0, 0}, {1, 1, 0}});
    CHECK(frame_difference(a, disjoint) == 1.0);
    CHECK(frame_difference(a, ten_in_a_row(1)) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(frame_difference(Frame{}, Frame{}) == 0.0);
  }

  TEST_CASE("is_duplicate examples") {
    const Frame a = ten_in_a_row();
    CHECK(is_duplicate(a, a));
    CHECK_FALSE(is_duplicate(a, make_frame(16, 14, {{1, 0, 0}})));
    CHECK(is_duplicate(a, ten_in_a_row(1), 0.9));
    CHECK_FALSE(is_duplicate(a, ten_in_a_row(1), 0.95));
  }

  TEST_CASE("frame difference properties over random frames") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Frame a = random_frame(seed, 8, 6, 3, 20);
      const Frame b = random_frame(seed + 1000, 8, 6, 3, 20);
      const double d = frame_difference(a, b);
      CHECK(d >= 0.0);
      CHECK(d <= 1.0);
      CHECK(d == frame_difference(b, a));
      CHECK(frame_difference(a, a) == 0.0);
      if (!a.empty()) CHECK(frame_difference(a, Frame(0, 8, 6, {})) == 1.0);
      for (double threshold : {0.1, 0.5, 0.9, 1.0}) {
        CHECK(is_duplicate(a, a, threshold));
        CHECK(is_duplicate(a, b, threshold) == is_duplicate(b, a, threshold));
      }
    }
  }

  TEST_CASE("frames keep instances sorted row-major") {
    const Frame f = make_frame(5, 5, {{0, 3, 2}, {1, 0, 4}, {0, 1, 2}});
    REQUIRE(f.size() == 3);
    CHECK(f.instances()[0] == SpriteInstance{0, 1, 2});
    CHECK(f.instances()[1] == SpriteInstance{0, 3, 2});
    CHECK(f.instances()[2] == SpriteInstance{1, 0, 4});
  }

  TEST_CASE("count vector and type removal") {
    const Frame f = make_frame(5, 5, {{0, 0, 0}, {0, 1, 0}, {1, 2, 2}});
    const auto v = count_vector(f, 3);
    CHECK(v(0) == 2);
    CHECK(v(1) == 1);
    CHECK(v(2) == 0);
    CHECK(without_types(f, {0}).size() == 1);
  }

  TEST_CASE("catalog invariants") {
    CHECK_THROWS_AS(SpriteCatalog({{0, "a"}, {2, "b"}}), ValidationError);
    CHECK_THROWS_AS(SpriteCatalog({{0, "a"}, {1, "a"}}), ValidationError);
    CHECK_THROWS_AS(SpriteCatalog({{0, "a", 0, 1}}), ValidationError);
    const auto c = make_catalog({"bark", "coin"});
    CHECK(c.require("coin") == 1);
    CHECK_THROWS_AS(c.require("lava"), ValidationError);
  }

  TEST_CASE("trace round trip") {
    const Trace t = small_trace();
    CHECK(parse_trace(dump_trace(t)) == t);
    testing::TempDir dir("trace_rt");
    save_trace(t, dir.path / "t.json");
    CHECK(load_trace(dir.path / "t.json") == t);
  }

  TEST_CASE("trace round trip over random traces") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Trace t;
      t.catalog = make_catalog({"a", "b", "c", "d"});
      t.meta.fps = 24.0 + static_cast<double>(seed) / 7.0;
      int index = 0;
      for (int f = 0; f < 4; ++f) {
        index += 1 + static_cast<int>(seed % 3);
        t.frames.push_back(random_frame(seed * 10 + f, 16, 14, 4, 30).with_index(index));
      }
      const std::string text = dump_trace(t);
      CHECK(parse_trace(text) == t);
      CHECK(dump_trace(parse_trace(text)) == text);
    }
  }

  TEST_CASE("unknown type id is a validation error") {
    Trace t;
    std::vector<std::string> names;
    for (int i = 0; i < 102; ++i) names.push_back("s" + std::to_string(i));
    t.catalog = make_catalog(names);
    t.frames.push_back(make_frame(16, 14, {{102, 1, 1}}));
    CHECK_THROWS_AS(parse_trace(dump_trace(t)), ValidationError);
    t.frames = {make_frame(16, 14, {{101, 1, 1}})};
    CHECK_NOTHROW(parse_trace(dump_trace(t)));
  }

  TEST_CASE("decreasing frame indices are a validation error") {
    const std::string text =
        R"({"version":1,"meta":{"width":4,"height":4,"fps":30},"catalog":[{"id":0,"name":"a"}],)"
        R"("frames":[{"i":3,"instances":[]},{"i":1,"instances":[]}]})";
    CHECK_THROWS_AS(parse_trace(text), ValidationError);
  }

  TEST_CASE("other invalid traces") {
    Trace t = small_trace();
    t.frames[0] = make_frame(16, 14, {{0, 16, 0}});
    CHECK_THROWS_AS(validate_trace(t), ValidationError);
    t.frames[0] = make_frame(16, 14, {{0, 1, 1}, {0, 1, 1}});
    CHECK_THROWS_AS(validate_trace(t), ValidationError);
    t.frames[0] = make_frame(15, 14, {});
    CHECK_THROWS_AS(validate_trace(t), ValidationError);
  }

  TEST_CASE("malformed text reports position or field") {
    try {
      parse_trace("{\"version\": 1,\n \"meta\": {", "bad.json");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("bad.json:2:") == 0);
    }
    try {
      parse_trace(R"({"version":1,"meta":{"width":4,"height":4,"fps":30},"catalog":[],"frames":[{"instances":[]}]})",
                  "t.json");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("t.json.frames[0]") != std::string::npos);
      CHECK(std::string(e.what()).find("'i'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_trace(R"({"version":2,"meta":{},"catalog":[],"frames":[]})"), ValidationError);
  }
}
