#include "levelgen/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "levelgen/clustering.hpp"
#include "levelgen/detail/json_util.hpp"
#include "levelgen/playability.hpp"
#include "levelgen/segmentation.hpp"

namespace levelgen {

void CorpusSpec::validate() const {
  if (blueprints.size() != dwell.size()) throw ValidationError("corpus: one dwell count per blueprint required");
  for (std::size_t i = 0; i < blueprints.size(); ++i) {
    if (dwell[i] < 1) throw ValidationError("corpus: dwell[" + std::to_string(i) + "] must be at least 1");
    for (const auto& s : blueprints[i].instances()) {
      if (s.x < 0 || s.y < 0 || s.x >= meta.width || s.y >= meta.height) {
        throw ValidationError("corpus: blueprint " + std::to_string(i) + " exceeds the frame bounds");
      }
      if (!catalog.contains(s.type)) throw ValidationError("corpus: blueprint " + std::to_string(i) + " uses an unknown type");
    }
  }
  if (walker && !catalog.contains(*walker)) throw ValidationError("corpus: walker type not in catalog");
  if (walker_row < 0 || walker_row >= meta.height) throw ValidationError("corpus: walker row outside the frame");
}

Corpus build_corpus(const CorpusSpec& spec) {
  spec.validate();
  Corpus out;
  out.trace.meta = spec.meta;
  out.trace.catalog = spec.catalog;
  int index = 0;
  for (std::size_t s = 0; s < spec.blueprints.size(); ++s) {
    const auto& base = spec.blueprints[s].instances();
    std::set<Tile> occupied;
    for (const auto& i : base) occupied.insert({i.x, i.y});
    out.truth.boundaries.push_back(index);
    out.truth.interaction_values.push_back(spec.dwell[s]);
    for (int k = 0; k < spec.dwell[s]; ++k) {
      std::vector<SpriteInstance> instances = base;
      if (spec.walker) {
        const int x = static_cast<int>(std::floor(k * spec.walker_speed)) % spec.meta.width;
        if (!occupied.count({x, spec.walker_row})) instances.push_back({*spec.walker, x, spec.walker_row});
      }
      out.trace.frames.emplace_back(index++, spec.meta.width, spec.meta.height, std::move(instances));
    }
  }
  std::vector<LevelSection> sections;
  for (int v : out.truth.interaction_values) {
    LevelSection l;
    l.interaction_value = v;
    sections.push_back(l);
  }
  out.truth.high_interaction = high_interaction_flags(sections);
  return out;
}

std::string dump_ground_truth(const GroundTruth& truth) {
  detail::json doc;
  doc["version"] = 1;
  doc["boundaries"] = truth.boundaries;
  doc["interaction_values"] = truth.interaction_values;
  doc["high_interaction"] = truth.high_interaction;
  return doc.dump() + "\n";
}

GroundTruth parse_ground_truth(const std::string& text, const std::string& source) {
  const auto doc = detail::parse_json_text(text, source);
  detail::check_version(doc, 1, source);
  GroundTruth truth;
  truth.boundaries = detail::get_field<std::vector<int>>(doc, "boundaries", source);
  truth.interaction_values = detail::get_field<std::vector<int>>(doc, "interaction_values", source);
  truth.high_interaction = detail::get_field<std::vector<bool>>(doc, "high_interaction", source);
  return truth;
}

Frame random_frame(std::uint64_t seed, int width, int height, int type_count, int max_instances) {
  Rng rng(seed);
  const auto n = rng.index(static_cast<std::size_t>(max_instances) + 1);
  std::set<std::pair<int, int>> used;
  std::vector<SpriteInstance> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int x = static_cast<int>(rng.index(static_cast<std::size_t>(width)));
    const int y = static_cast<int>(rng.index(static_cast<std::size_t>(height)));
    if (!used.insert({x, y}).second) continue;
    out.push_back({static_cast<TypeId>(rng.index(static_cast<std::size_t>(type_count))), x, y});
  }
  return Frame(0, width, height, std::move(out));
}

CorpusSpec random_corpus_spec(std::uint64_t seed) {
  Rng rng(seed);
  CorpusSpec spec;
  spec.rng_seed = seed;
  spec.catalog = make_catalog({"ground", "block", "coin", "enemy", "pipe", "cloud", "walker"});
  spec.walker = 6;
  spec.walker_row = 0;
  spec.walker_speed = 0.5;
  spec.standable = {0, 1, 4};
  const std::size_t sections = 3 + rng.index(6);
  while (spec.blueprints.size() < sections) {
    std::vector<SpriteInstance> instances;
    std::set<std::pair<int, int>> used;
    const std::size_t n = 9 + rng.index(32);
    while (instances.size() < n) {
      const int x = static_cast<int>(rng.index(16));
      const int y = static_cast<int>(rng.index(14));
      if (!used.insert({x, y}).second) continue;
      instances.push_back({static_cast<TypeId>(rng.index(6)), x, y});
    }
    Frame candidate(0, spec.meta.width, spec.meta.height, std::move(instances));
    if (!spec.blueprints.empty() && frame_difference(spec.blueprints.back(), candidate) <= 0.25) continue;
    spec.blueprints.push_back(std::move(candidate));
    spec.dwell.push_back(1 + static_cast<int>(rng.index(60)));
  }
  return spec;
}

std::vector<std::string> treetop_sprite_names() {
  return {"ground", "treetop", "bark", "coin", "goomba", "koopa", "cloud", "block", "walker"};
}

namespace {

enum TreetopType { kGround, kTreetop, kBark, kCoin, kGoomba, kKoopa, kCloud, kBlock, kWalker };

Frame treetop_attempt(Rng& rng, int i, const TraceMeta& meta) {
  std::vector<SpriteInstance> out;
  std::set<std::pair<int, int>> used;
  auto put = [&](TypeId t, int x, int y) {
    if (x < 0 || y < 0 || x >= meta.width || y >= meta.height) return;
    if (used.insert({x, y}).second) out.push_back({t, x, y});
  };
  const bool wide_trunks = i % 2 == 1;
  int x = 0;
  int y = 6 + static_cast<int>(rng.index(3));
  bool first = true;
  while (x < meta.width) {
    const int w = 6 + static_cast<int>(rng.index(3));
    if (!first) y = std::clamp(y + static_cast<int>(rng.index(9)) - 4, 4, 11);
    first = false;
    for (int dx = 0; dx < w; ++dx) put(kTreetop, x + dx, y);
    const int trunk = x + (w - 1) / 2;
    for (int ty = y + 1; ty < meta.height; ++ty) {
      put(kBark, trunk, ty);
      if (wide_trunks) put(kBark, trunk + 1, ty);
    }
    switch (rng.index(4)) {
      case 0:
        for (int dx = 0; dx < 2; ++dx) put(kCoin, x + dx + 1, y - 3);
        break;
      case 1:
        put(rng.index(2) == 0 ? kGoomba : kKoopa, x + w - 1, y - 1);
        break;
      default:
        break;
    }
    x += w + 3 + static_cast<int>(rng.index(2));
  }
  return Frame(0, meta.width, meta.height, std::move(out));
}

// Platforms are redrawn until the section can be crossed.
Frame treetop_section(int i, const TraceMeta& meta) {
  Rng rng(0x7ee7097ULL + static_cast<std::uint64_t>(i) + 8000);
  for (;;) {
    Frame f = treetop_attempt(rng, i, meta);
    if (is_playable(f, {kGround, kTreetop, kBark, kBlock}).playable) return f;
  }
}

Frame connector_section(int i, const TraceMeta& meta) {
  Rng rng(0xc0ecULL + static_cast<std::uint64_t>(i));
  std::vector<SpriteInstance> out;
  for (int x = 0; x < meta.width; ++x) {
    out.push_back({kGround, x, meta.height - 1});
    out.push_back({kGround, x, meta.height - 2});
  }
  const int bx = 2 + static_cast<int>(rng.index(10));
  for (int dx = 0; dx < 3; ++dx) out.push_back({kBlock, bx + dx, meta.height - 6});
  out.push_back({kCoin, bx + 1, meta.height - 8});
  return Frame(0, meta.width, meta.height, std::move(out));
}

}  // namespace

CorpusSpec treetop_fixture() {
  CorpusSpec spec;
  spec.catalog = make_catalog(treetop_sprite_names());
  spec.walker = kWalker;
  spec.walker_row = 0;
  spec.walker_speed = 0.25;
  spec.rng_seed = 17;
  spec.standable = {kGround, kTreetop, kBark, kBlock};
  Rng rng(spec.rng_seed);
  for (int i = 0; i < 17; ++i) {
    spec.blueprints.push_back(connector_section(i, spec.meta));
    spec.dwell.push_back(8 + static_cast<int>(rng.index(5)));
    spec.blueprints.push_back(treetop_section(i, spec.meta));
    spec.dwell.push_back(40 + static_cast<int>(rng.index(51)));
  }
  return spec;
}

}  // namespace levelgen
