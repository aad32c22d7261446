#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "../tools/cli.hpp"
#include "levelgen/clustering.hpp"
#include "levelgen/corpus.hpp"
#include "levelgen/generator.hpp"
#include "levelgen/segmentation.hpp"
#include "levelgen/shapes.hpp"
#include "levelgen/style.hpp"
#include "levelgen/sweep.hpp"
#include "levelgen/vision.hpp"
#include "oracles.hpp"

using namespace levelgen;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("levelgen_acceptance_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void segmentation_ground_truth() {
  const auto start = Clock::now();
  int boundaries_ok = 0, flags_ok = 0, planted = 0, recovered = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto corpus = build_corpus(random_corpus_spec(seed));
    const auto set = segment_trace(corpus.trace);
    std::vector<int> starts;
    for (const auto& s : set.sections) starts.push_back(s.start_frame);
    planted += static_cast<int>(corpus.truth.boundaries.size());
    for (int b : corpus.truth.boundaries) recovered += std::count(starts.begin(), starts.end(), b) == 1;
    boundaries_ok += starts == corpus.truth.boundaries;
    flags_ok += high_interaction_flags(set.sections) == corpus.truth.high_interaction;
  }
  const double t = seconds_since(start);
  report(1, boundaries_ok == 50 && flags_ok == 50 && recovered == planted && t < 5.0,
         fmt("boundaries %d/%d recovered, exact corpora %d/50, flags exact %d/50, %.2f s (limit 5 s)", recovered,
             planted, boundaries_ok, flags_ok, t));
}

void vision_round_trip() {
  const auto start = Clock::now();
  const auto catalog = make_catalog({"ground", "treetop", "bark", "coin", "goomba", "koopa", "cloud", "block"});
  const auto atlas = procedural_atlas(catalog);
  TempDir dir("vision");
  int exact_aligned = 0, exact_scrolled = 0;
  Rng rng(2024);
  for (int i = 0; i < 100; ++i) {
    Trace t;
    t.catalog = catalog;
    const int frames = 1 + static_cast<int>(rng.index(3));
    int index = 0;
    for (int f = 0; f < frames; ++f) {
      index += 1 + static_cast<int>(rng.index(3));
      t.frames.push_back(random_frame(rng.next(), t.meta.width, t.meta.height, 8, 60).with_index(index));
    }
    const ScrollOffset scroll{static_cast<int>(rng.index(16)), static_cast<int>(rng.index(16))};
    for (const ScrollOffset s : {ScrollOffset{}, scroll}) {
      const fs::path frames_dir = dir.path / (std::to_string(i) + "_" + std::to_string(s.dx) + "_" + std::to_string(s.dy));
      render_trace_frames(t, atlas, frames_dir, s);
      const auto result = ingest_frames(frames_dir, atlas, catalog, t.meta, 0.0);
      const bool exact = result.skipped.empty() && result.trace == t;
      (s == ScrollOffset{} ? exact_aligned : exact_scrolled) += exact;
      fs::remove_all(frames_dir);
    }
  }
  const double t = seconds_since(start);
  report(2, exact_aligned == 100 && exact_scrolled == 100 && t < 30.0,
         fmt("aligned %d/100 exact, scrolled %d/100 exact, %.2f s (limit 30 s)", exact_aligned, exact_scrolled, t));
}

void shape_extraction_oracle() {
  int equal = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Frame f = random_frame(seed * 7919 + 1, 16, 14, 4, 120);
    std::set<oracle::Component> mine;
    for (const auto& g : extract_g_nodes(f)) {
      oracle::Component c{g.type, {}};
      for (const auto& cell : g.cells) c.cells.insert({g.anchor.x + cell.x, g.anchor.y + cell.y});
      mine.insert(c);
    }
    equal += mine == oracle::flood_fill(f);
  }
  report(3, equal == 100, fmt("%d/100 frames match flood-fill labelling", equal));
}

void clustering_quality() {
  Rng rng(77);
  int km_close = 0, km_stable = 0, kd_close = 0, kd_stable = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + static_cast<int>(rng.index(3));
    const int n = std::max(k, 2 + static_cast<int>(rng.index(9)));
    Eigen::MatrixXd p(n, 2);
    for (int i = 0; i < n; ++i) {
      p(i, 0) = rng.uniform() * 10.0;
      p(i, 1) = rng.uniform() * 10.0;
    }
    const auto km = clustering::kmeans(p, k, static_cast<std::uint64_t>(trial));
    const double km_best = oracle::best_kmeans_distortion(p, k);
    km_close += km.distortion <= 1.2 * km_best + 1e-9;
    bool stable = true;
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int a : km.assignment) ++sizes[static_cast<std::size_t>(a)];
    for (int i = 0; i < n && stable; ++i) {
      const int a = km.assignment[static_cast<std::size_t>(i)];
      if (sizes[static_cast<std::size_t>(a)] < 2) continue;
      for (int b = 0; b < k; ++b) {
        if (b == a) continue;
        auto moved = km.assignment;
        moved[static_cast<std::size_t>(i)] = b;
        if (clustering::kmeans_distortion(p, moved, k) < km.distortion - 1e-9) stable = false;
      }
    }
    km_stable += stable;

    std::vector<Eigen::RowVectorXd> rows;
    for (int i = 0; i < n; ++i) rows.push_back(p.row(i));
    const auto d = clustering::distance_matrix<double>(rows, [](const auto& a, const auto& b) { return (a - b).norm(); });
    const auto kd = clustering::kmedoids(d, k, static_cast<std::uint64_t>(trial));
    const double kd_best = oracle::medoid_cost(d, oracle::best_medoids(d, k));
    kd_close += kd.distortion <= 1.2 * kd_best + 1e-9;
    const std::vector<int> medoids(kd.medoids.begin(), kd.medoids.end());
    const double cost = oracle::medoid_cost(d, medoids);
    bool swap_ok = true;
    for (std::size_t s = 0; s < medoids.size() && swap_ok; ++s) {
      for (int h = 0; h < n; ++h) {
        if (std::find(medoids.begin(), medoids.end(), h) != medoids.end()) continue;
        auto swapped = medoids;
        swapped[s] = h;
        if (oracle::medoid_cost(d, swapped) < cost - 1e-9) swap_ok = false;
      }
    }
    kd_stable += swap_ok;
  }
  report(4, km_close >= 95 && kd_close >= 95 && km_stable == 100 && kd_stable == 100,
         fmt("k-means within 1.2x optimum %d/100, 1-stable %d/100; k-medoids within 1.2x %d/100, swap-stable %d/100",
             km_close, km_stable, kd_close, kd_stable));
}

struct Fixture {
  CorpusSpec spec;
  StyleModel model;
  GenerationParams base;
  EvaluationParams evaluation;
};

Fixture load_fixture() {
  Fixture f;
  f.spec = treetop_fixture();
  std::vector<Frame> layouts;
  for (std::size_t i = 1; i < f.spec.blueprints.size(); i += 2) layouts.push_back(f.spec.blueprints[i]);
  ModelParams params;
  params.seed = 7;
  params.ignored_types = {*f.spec.walker};
  f.model = build_style_model(layouts, f.spec.catalog, params);
  f.base.match_tolerance = 0;
  f.base.max_expansions = 3'000'000;
  f.evaluation.standable = f.spec.standable;
  f.evaluation.sample_size = 20;
  f.evaluation.rng_seed = 0;
  return f;
}

// Smallest coexistence fraction met while rebuilding each original shape by
// shape, in extraction order, at its own anchors.
double realized_coexistence_minimum(const StyleModel& model, int tolerance) {
  double lowest = 1.0;
  for (std::size_t sec = 0; sec < model.sections.size(); ++sec) {
    std::vector<Placement> order;
    for (const auto& s : model.s_nodes) {
      for (std::size_t m = 0; m < s.members.size(); ++m) {
        if (s.members[m].g.source_section == static_cast<int>(sec)) {
          order.push_back({s.id, static_cast<int>(m), s.members[m].g.anchor});
        }
      }
    }
    std::sort(order.begin(), order.end(), [&](const Placement& a, const Placement& b) {
      const auto& ga = model.s_node(a.s_node).members[static_cast<std::size_t>(a.member)].g;
      const auto& gb = model.s_node(b.s_node).members[static_cast<std::size_t>(b.member)].g;
      return std::tie(ga.type, ga.anchor.y, ga.anchor.x) < std::tie(gb.type, gb.anchor.y, gb.anchor.x);
    });
    if (order.empty()) continue;
    PartialSection section(model, model.l_node_of(order.front().s_node));
    for (const auto& p : order) {
      const auto& pair = model.s_node(p.s_node).members[static_cast<std::size_t>(p.member)];
      lowest = std::min(lowest, coexist_probability(section, pair, p.anchor, model, tolerance));
      section.add(model, p);
    }
  }
  return lowest;
}

void generator_closure(const Fixture& f) {
  double p_E = 1.0;
  for (const auto& s : f.model.s_nodes) {
    if (s.table.total > 0) p_E = std::min(p_E, s.table.min_probability());
  }
  const double realized = realized_coexistence_minimum(f.model, f.base.match_tolerance);
  GenerationParams params = f.base;
  params.dedup = false;
  params.p_E = p_E;
  params.p_C = realized - 0.01;
  const auto start = Clock::now();
  const auto result = generate_all(f.model, params);
  std::set<std::vector<SpriteInstance>> raw;
  for (const auto& r : result.raw) raw.insert(r.instances());
  int found = 0;
  for (const auto& o : f.model.sections) found += raw.count(o.instances()) == 1;
  report(5, found == static_cast<int>(f.model.sections.size()) && !result.truncated,
         fmt("%d/%zu originals among %zu raw outputs (p_E %.4f = min table probability, p_C %.2f below realized "
             "minimum %.2f, truncated %s, %.1f s)",
             found, f.model.sections.size(), result.raw_count, p_E, params.p_C, realized,
             result.truncated ? "yes" : "no", seconds_since(start)));
}

struct Setting {
  double p_C;
  double p_E;
  GenerationResult result;
  EvaluationSummary summary;
};

Setting run_setting(const Fixture& f, double p_C, double p_E) {
  GenerationParams params = f.base;
  params.p_C = p_C;
  params.p_E = p_E;
  Setting s{p_C, p_E, generate_all(f.model, params), {}};
  std::vector<Frame> layouts;
  for (const auto& g : s.result.sections) layouts.push_back(g.layout);
  s.summary = evaluate_sample(layouts, f.model.sections, f.evaluation);
  return s;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : " ") + fmt("%.2f", x);
  return out;
}

void playability_vs_p_C(const std::vector<Setting>& sweep_rows, double elapsed) {
  std::vector<double> p_C, playable;
  for (const auto& s : sweep_rows) {
    p_C.push_back(s.p_C);
    playable.push_back(s.summary.percent_playable);
  }
  int inversions = 0;
  for (std::size_t i = 0; i < playable.size(); ++i) {
    for (std::size_t j = i + 1; j < playable.size(); ++j) inversions += playable[i] > playable[j];
  }
  const auto rho = spearman(p_C, playable);
  const auto r = pearson(p_C, playable);
  report(6, inversions <= 1 && rho && *rho >= 0.8 && elapsed < 120.0,
         fmt("playable [%s] over p_C [%s], inversions %d, Spearman %s, Pearson %s, %.1f s (limit 120 s)",
             join(playable).c_str(), join(p_C).c_str(), inversions,
             rho ? fmt("%.3f", *rho).c_str() : "undefined", r ? fmt("%.3f", *r).c_str() : "undefined", elapsed));
}

void low_p_E_playability(const Fixture& f, const std::vector<Setting>& rows) {
  int originals = 0;
  for (const auto& o : f.model.sections) originals += is_playable(o, f.spec.standable).playable;
  bool all = originals == static_cast<int>(f.model.sections.size());
  std::string detail = fmt("originals playable %d/%zu", originals, f.model.sections.size());
  for (const auto& s : rows) {
    all = all && !s.summary.sections.empty() && s.summary.percent_playable == 1.0;
    detail += fmt(", p_E %.2f: %.2f of %zu sampled", s.p_E, s.summary.percent_playable, s.summary.sections.size());
  }
  report(7, all, detail);
}

std::set<std::vector<SpriteInstance>> raw_set(const Setting& s) {
  std::set<std::vector<SpriteInstance>> out;
  for (const auto& r : s.result.raw) out.insert(r.instances());
  return out;
}

void output_count_direction(const std::vector<Setting>& sweep_rows) {
  const Setting* low = nullptr;
  const Setting* high = nullptr;
  for (const auto& s : sweep_rows) {
    if (std::abs(s.p_C - 0.5) < 1e-12) low = &s;
    if (std::abs(s.p_C - 0.8) < 1e-12) high = &s;
  }
  const double ratio = static_cast<double>(low->result.raw_count) / static_cast<double>(high->result.raw_count);
  bool subset = true;
  for (std::size_t i = 0; i + 1 < sweep_rows.size(); ++i) {
    const auto looser = raw_set(sweep_rows[i]);
    for (const auto& l : raw_set(sweep_rows[i + 1])) subset = subset && looser.count(l) == 1;
  }
  std::vector<double> counts;
  for (const auto& s : sweep_rows) counts.push_back(static_cast<double>(s.result.raw_count));
  std::string list;
  for (double c : counts) list += (list.empty() ? "" : " ") + fmt("%.0f", c);
  report(8, ratio >= 1.5 && subset && !low->result.truncated && !high->result.truncated,
         fmt("raw counts over p_C [%s]; %zu at 0.5 vs %zu at 0.8, ratio %.2f (need 1.5); nested subsets %s",
             list.c_str(), low->result.raw_count, high->result.raw_count, ratio, subset ? "yes" : "no"));
}

void style_properties(const Fixture& f, const Setting& sample) {
  int self_zero = 0;
  for (const auto& o : f.model.sections) self_zero += style_distance(o, {o}).score == 0.0;

  Rng rng(9);
  int perturbed_ok = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SpriteInstance> v;
    std::set<std::pair<int, int>> used;
    while (v.size() < 10) {
      const int x = static_cast<int>(rng.index(16)), y = static_cast<int>(rng.index(14));
      if (used.insert({x, y}).second) v.push_back({static_cast<TypeId>(rng.index(3)), x, y});
    }
    const Frame original(0, 16, 14, v);
    auto moved = v;
    for (;;) {
      auto& s = moved[rng.index(10)];
      const int dir = static_cast<int>(rng.index(4));
      const int nx = s.x + (dir == 0 ? 2 : dir == 1 ? -2 : 0);
      const int ny = s.y + (dir == 2 ? 2 : dir == 3 ? -2 : 0);
      if (nx < 0 || ny < 0 || nx >= 16 || ny >= 14 || used.count({nx, ny})) continue;
      s.x = nx;
      s.y = ny;
      break;
    }
    const double score = style_distance(Frame(0, 16, 14, moved), {original}).score;
    worst = std::max(worst, std::abs(score - 0.2));
    perturbed_ok += std::abs(score - 0.2) <= 1e-9;
  }

  std::vector<double> scores;
  for (const auto& s : sample.summary.sections) scores.push_back(style_distance(sample.result.sections[s.index].layout, f.model.sections).score);
  std::sort(scores.begin(), scores.end());
  const bool twenty = sample.summary.sections.size() == 20 && sample.result.sections.size() >= 20;
  const double expected = twenty ? (scores[9] + scores[10]) / 2.0 : -1.0;
  const bool median_ok = twenty && std::abs(sample.summary.median_style - expected) <= 1e-12;
  report(9, self_zero == static_cast<int>(f.model.sections.size()) && perturbed_ok == 100 && median_ok,
         fmt("self distance zero %d/%zu; 2-tile perturbation scores 0.2 within 1e-9 in %d/100 (worst error %.1e); "
             "median %.4f over %zu samples",
             self_zero, f.model.sections.size(), perturbed_ok, worst, sample.summary.median_style,
             sample.summary.sections.size()));
}

void dedup_contract(const Fixture& f, const std::vector<const Setting*>& runs) {
  std::size_t checked = 0, violations = 0;
  for (const auto* s : runs) {
    const auto& out = s->result.sections;
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (const auto& o : f.model.sections) {
        ++checked;
        violations += overlap_fraction(out[i].layout, o) >= 0.9;
      }
      for (std::size_t j = 0; j < i; ++j) {
        ++checked;
        violations += overlap_fraction(out[i].layout, out[j].layout) >= 0.9;
      }
    }
  }
  report(10, violations == 0 && checked > 0,
         fmt("%zu violations over %zu section comparisons in %zu runs", violations, checked, runs.size()));
}

std::map<std::string, std::string> collect_outputs(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    const auto name = e.path().filename().string();
    if (e.path().extension() != ".csv" && name != "manifest.json") continue;
    std::ifstream in(e.path(), std::ios::binary);
    out[fs::relative(e.path(), root).string()] = std::string(std::istreambuf_iterator<char>(in), {});
  }
  return out;
}

void pipeline_determinism() {
  const auto start = Clock::now();
  TempDir a("run_a"), b("run_b");
  const std::string config = std::string(LEVELGEN_SOURCE_DIR) + "/configs/treetop.json";
  std::ostringstream out, err;
  const int code_a = cli::run({"pipeline", "--config", config, "--out", a.path.string()}, out, err);
  const int code_b = cli::run({"pipeline", "--config", config, "--out", b.path.string()}, out, err);
  const auto fa = collect_outputs(a.path), fb = collect_outputs(b.path);
  std::size_t csv = 0, manifests = 0;
  for (const auto& [k, v] : fa) (k.ends_with(".csv") ? csv : manifests) += 1;
  const bool same = fa == fb;
  if (code_a != 0 || code_b != 0) std::cerr << err.str();
  report(11, code_a == 0 && code_b == 0 && same && csv > 0 && manifests > 0,
         fmt("exit codes %d/%d; %zu CSV files and %zu manifests byte-identical: %s; %.1f s", code_a, code_b, csv,
             manifests, same ? "yes" : "no", seconds_since(start)));
}

}  // namespace

int main() {
  segmentation_ground_truth();
  vision_round_trip();
  shape_extraction_oracle();
  clustering_quality();

  const Fixture f = load_fixture();
  generator_closure(f);

  const auto sweep_start = Clock::now();
  std::vector<Setting> p_C_rows;
  for (double p_C : {0.5, 0.6, 0.7, 0.8, 0.9}) p_C_rows.push_back(run_setting(f, p_C, 0.1));
  const double sweep_seconds = seconds_since(sweep_start);
  playability_vs_p_C(p_C_rows, sweep_seconds);

  std::vector<Setting> p_E_rows;
  p_E_rows.push_back(run_setting(f, 0.8, 0.05));
  p_E_rows.push_back(p_C_rows[3]);
  low_p_E_playability(f, p_E_rows);

  output_count_direction(p_C_rows);
  style_properties(f, p_C_rows[3]);

  std::vector<const Setting*> runs;
  for (const auto& s : p_C_rows) runs.push_back(&s);
  runs.push_back(&p_E_rows[0]);
  dedup_contract(f, runs);

  pipeline_determinism();

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
