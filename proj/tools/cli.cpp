#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <sstream>

#include "levelgen/corpus.hpp"
#include "levelgen/detail/json_util.hpp"
#include "levelgen/generation_io.hpp"
#include "levelgen/model_io.hpp"
#include "levelgen/render.hpp"
#include "levelgen/section_io.hpp"
#include "levelgen/sweep.hpp"
#include "levelgen/trace_io.hpp"
#include "levelgen/vision.hpp"

namespace levelgen::cli {

namespace {

namespace fs = std::filesystem;
using detail::json;

void require_file(const fs::path& path, const std::string& what) {
  if (path.empty()) throw ValidationError("missing input: no " + what + " path given");
  if (!fs::exists(path)) throw ValidationError("missing input: " + what + " not found at " + path.string());
}

const std::map<std::string, std::vector<std::string>>& config_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"corpus", {"fixture", "random_seed"}},
      {"ingest", {"fps", "tolerance", "ignore_region"}},
      {"segmentation", {"boundary_threshold", "endpoint_threshold"}},
      {"cluster", {"seed", "k_max", "fk_threshold"}},
      {"model",
       {"seed", "k_max", "fk_threshold", "shape_weight", "bucket_count", "pair_dims", "ignored_types", "category"}},
      {"generation",
       {"p_E", "p_C", "max_depth", "max_outputs", "match_tolerance", "max_expansions", "dedup", "rng_seed"}},
      {"evaluation", {"seed", "sample_size", "standable", "max_rise", "max_gap", "max_drop"}},
      {"sweep", {"p_C_values", "p_E_values", "p_E_hold", "p_C_hold"}},
      {"render", {"limit"}},
  };
  return keys;
}

class Config {
 public:
  Config() = default;

  explicit Config(const fs::path& path) : source_(path.string()) {
    require_file(path, "config file");
    doc_ = detail::parse_json_text(read_text_file(path), source_);
    detail::check_version(doc_, kConfigSchemaVersion, source_);
    for (const auto& [key, value] : doc_.items()) {
      if (key == "version" || key == "output_dir") continue;
      auto it = config_keys().find(key);
      if (it == config_keys().end()) throw ValidationError(source_ + ": unknown section '" + key + "'");
      if (!value.is_object()) throw ParseError(source_ + "." + key + ": expected an object");
      for (const auto& [inner, v] : value.items()) {
        if (std::find(it->second.begin(), it->second.end(), inner) == it->second.end()) {
          throw ValidationError(source_ + ": unknown key '" + key + "." + inner + "'");
        }
      }
    }
  }

  template <typename T>
  std::optional<T> get(const char* section, const char* key) const {
    if (!doc_.is_object()) return std::nullopt;
    auto s = doc_.find(section);
    if (s == doc_.end() || !s->is_object()) return std::nullopt;
    auto k = s->find(key);
    if (k == s->end() || k->is_null()) return std::nullopt;
    return detail::get_as<T>(*k, source_ + "." + section + "." + key);
  }

  bool has(const char* section, const char* key) const {
    if (!doc_.is_object()) return false;
    auto s = doc_.find(section);
    return s != doc_.end() && s->is_object() && s->contains(key);
  }

  std::optional<std::string> output_dir() const {
    if (!doc_.is_object() || !doc_.contains("output_dir")) return std::nullopt;
    return detail::get_as<std::string>(doc_["output_dir"], source_ + ".output_dir");
  }

 private:
  std::string source_ = "<flags>";
  json doc_;
};

template <typename T>
T pick(const std::optional<T>& flag, const Config& cfg, const char* section, const char* key, T fallback) {
  if (flag) return *flag;
  if (auto v = cfg.get<T>(section, key)) return *v;
  return fallback;
}

template <typename T>
std::vector<T> pick_vector(const std::vector<T>& flag, const CLI::Option* opt, const Config& cfg,
                           const char* section, const char* key, std::vector<T> fallback) {
  if (opt && opt->count() > 0) return flag;
  if (auto v = cfg.get<std::vector<T>>(section, key)) return *v;
  return fallback;
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& flag, const Config& cfg, const char* section) {
  if (flag) return *flag;
  if (auto v = cfg.get<std::uint64_t>(section, "seed")) return *v;
  throw ValidationError(std::string("a seed is required: pass --seed or set ") + section + ".seed in the config");
}

std::vector<TypeId> resolve_types(const std::vector<std::string>& names, const SpriteCatalog& catalog) {
  std::vector<TypeId> out;
  for (const auto& n : names) out.push_back(catalog.require(n));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Option groups shared between the stage commands and the pipeline.

struct SegmentFlags {
  std::optional<double> boundary;
  std::optional<double> endpoint;

  void add(CLI::App* app) {
    app->add_option("--boundary-threshold", boundary, "Fraction of changed sprites that opens a new section");
    app->add_option("--endpoint-threshold", endpoint, "Difference from the previous frame that marks an endpoint");
  }
  SegmentationParams resolve(const Config& cfg) const {
    SegmentationParams p;
    p.boundary_threshold = pick(boundary, cfg, "segmentation", "boundary_threshold", p.boundary_threshold);
    p.endpoint_threshold = pick(endpoint, cfg, "segmentation", "endpoint_threshold", p.endpoint_threshold);
    p.validate();
    return p;
  }
};

struct ClusterFlags {
  std::optional<std::uint64_t> seed;
  std::optional<int> k_max;
  std::optional<double> fk;

  void add(CLI::App* app) {
    app->add_option("--seed", seed, "Clustering seed (required here or in the config)");
    app->add_option("--kmax", k_max, "Largest K tried by the distortion-ratio estimate");
    app->add_option("--fk-threshold", fk, "f(K) threshold for choosing K");
  }
  CategoryParams resolve(const Config& cfg) const {
    CategoryParams p;
    p.seed = require_seed(seed, cfg, "cluster");
    p.k_max = pick(k_max, cfg, "cluster", "k_max", p.k_max);
    p.fk_threshold = pick(fk, cfg, "cluster", "fk_threshold", p.fk_threshold);
    p.validate();
    return p;
  }
};

struct ModelFlags {
  std::optional<std::uint64_t> seed;
  std::optional<int> k_max;
  std::optional<double> fk;
  std::optional<double> shape_weight;
  std::optional<int> bucket_count;
  std::optional<double> pair_dims;
  std::vector<std::string> ignored;
  CLI::Option* ignored_opt = nullptr;

  void add(CLI::App* app) {
    app->add_option("--seed", seed, "Model-building seed (required here or in the config)");
    app->add_option("--kmax", k_max, "Largest K tried for S-node and L-node clustering");
    app->add_option("--fk-threshold", fk, "f(K) threshold for choosing K");
    app->add_option("--shape-weight", shape_weight, "Weight of the shape term in the pair distance");
    app->add_option("--bucket-count", bucket_count, "Distance buckets in edge-probability tables");
    app->add_option("--pair-dims", pair_dims, "Effective dimensionality for K estimation over pairs");
    ignored_opt = app->add_option("--ignore-types", ignored, "Sprite names left out of the model (e.g. the avatar)");
  }
  ModelParams resolve(const Config& cfg, const SpriteCatalog& catalog,
                      const std::vector<std::string>& default_ignored = {}) const {
    ModelParams p;
    p.seed = require_seed(seed, cfg, "model");
    p.k_max = pick(k_max, cfg, "model", "k_max", p.k_max);
    p.fk_threshold = pick(fk, cfg, "model", "fk_threshold", p.fk_threshold);
    p.shape_weight = pick(shape_weight, cfg, "model", "shape_weight", p.shape_weight);
    p.bucket_count = pick(bucket_count, cfg, "model", "bucket_count", p.bucket_count);
    p.pair_dims = pick(pair_dims, cfg, "model", "pair_dims", p.pair_dims);
    p.ignored_types = resolve_types(pick_vector(ignored, ignored_opt, cfg, "model", "ignored_types", default_ignored),
                                    catalog);
    if (p.k_max < 1 || p.bucket_count < 1 || !(p.fk_threshold > 0.0) || !(p.pair_dims > 0.0) ||
        p.shape_weight < 0.0 || p.shape_weight > 1.0) {
      throw ValidationError("model parameters out of range");
    }
    return p;
  }
};

struct GenerateFlags {
  std::optional<double> p_E;
  std::optional<double> p_C;
  std::optional<int> max_depth;
  std::optional<int> max_outputs;
  std::optional<int> tolerance;
  std::optional<long long> max_expansions;
  std::optional<std::uint64_t> rng_seed;
  bool no_dedup = false;

  void add(CLI::App* app, bool with_thresholds) {
    if (with_thresholds) {
      app->add_option("--p-e", p_E, "Edge-probability threshold for required edges (0, 1]");
      app->add_option("--p-c", p_C, "Coexistence threshold [0, 1]");
    }
    app->add_option("--max-depth", max_depth, "Recursion depth cap");
    app->add_option("--max-outputs", max_outputs, "Cap on distinct terminal sections");
    app->add_option("--match-tolerance", tolerance, "Tiles of slack when matching relations");
    app->add_option("--max-expansions", max_expansions, "Cap on visited recursion states");
    app->add_option("--generation-seed", rng_seed, "Seed recorded with the outputs");
    app->add_flag("--no-dedup", no_dedup, "Keep outputs that duplicate originals or each other");
  }
  GenerationParams resolve(const Config& cfg) const {
    GenerationParams p;
    p.p_E = pick(p_E, cfg, "generation", "p_E", p.p_E);
    p.p_C = pick(p_C, cfg, "generation", "p_C", p.p_C);
    p.max_depth = pick(max_depth, cfg, "generation", "max_depth", p.max_depth);
    p.max_outputs = pick(max_outputs, cfg, "generation", "max_outputs", p.max_outputs);
    p.match_tolerance = pick(tolerance, cfg, "generation", "match_tolerance", p.match_tolerance);
    p.max_expansions = pick(max_expansions, cfg, "generation", "max_expansions", p.max_expansions);
    p.rng_seed = pick(rng_seed, cfg, "generation", "rng_seed", p.rng_seed);
    p.dedup = no_dedup ? false : pick<bool>(std::nullopt, cfg, "generation", "dedup", true);
    p.validate();
    return p;
  }
};

struct EvaluateFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> sample_size;
  std::vector<std::string> standable;
  CLI::Option* standable_opt = nullptr;
  std::optional<int> max_rise;
  std::optional<int> max_gap;
  std::optional<int> max_drop;

  void add(CLI::App* app) {
    app->add_option("--seed", seed, "Sampling seed (required here or in the config)");
    app->add_option("--sample-size", sample_size, "Sections sampled per setting");
    standable_opt = app->add_option("--standable", standable, "Sprite names the avatar can stand on");
    app->add_option("--max-rise", max_rise, "Highest climb per hop, in tiles");
    app->add_option("--max-gap", max_gap, "Widest gap per hop, in tiles");
    app->add_option("--max-drop", max_drop, "Deepest drop per hop, in tiles (unbounded when omitted)");
  }
  EvaluationParams resolve(const Config& cfg, const SpriteCatalog& catalog,
                           const std::vector<std::string>& default_standable = {}) const {
    EvaluationParams p;
    p.rng_seed = require_seed(seed, cfg, "evaluation");
    p.sample_size = pick(sample_size, cfg, "evaluation", "sample_size", p.sample_size);
    const auto names = pick_vector(standable, standable_opt, cfg, "evaluation", "standable", default_standable);
    if (names.empty()) throw ValidationError("no standable sprite types: pass --standable or set evaluation.standable");
    p.standable = resolve_types(names, catalog);
    p.envelope.max_rise = pick(max_rise, cfg, "evaluation", "max_rise", p.envelope.max_rise);
    p.envelope.max_gap = pick(max_gap, cfg, "evaluation", "max_gap", p.envelope.max_gap);
    if (max_drop) {
      p.envelope.max_drop = *max_drop;
    } else {
      p.envelope.max_drop = cfg.get<int>("evaluation", "max_drop");
    }
    p.envelope.validate();
    if (p.sample_size < 1) throw ValidationError("sample size must be at least 1");
    return p;
  }
};

struct SweepFlags {
  std::vector<double> p_C_values;
  std::vector<double> p_E_values;
  CLI::Option* p_C_opt = nullptr;
  CLI::Option* p_E_opt = nullptr;
  std::optional<double> p_E_hold;
  std::optional<double> p_C_hold;

  void add(CLI::App* app) {
    p_C_opt = app->add_option("--p-c-values", p_C_values, "p_C values swept with p_E held");
    p_E_opt = app->add_option("--p-e-values", p_E_values, "p_E values swept with p_C held");
    app->add_option("--p-e-hold", p_E_hold, "p_E used while p_C varies");
    app->add_option("--p-c-hold", p_C_hold, "p_C used while p_E varies");
  }
  SweepConfig resolve(const Config& cfg) const {
    SweepConfig c;
    c.p_C_values = pick_vector(p_C_values, p_C_opt, cfg, "sweep", "p_C_values", c.p_C_values);
    c.p_E_values = pick_vector(p_E_values, p_E_opt, cfg, "sweep", "p_E_values", c.p_E_values);
    c.p_E_hold = pick(p_E_hold, cfg, "sweep", "p_E_hold", c.p_E_hold);
    c.p_C_hold = pick(p_C_hold, cfg, "sweep", "p_C_hold", c.p_C_hold);
    return c;
  }
};

std::string evaluation_report(const EvaluationSummary& summary, const std::vector<std::string>& files,
                              const StyleModel& model) {
  std::ostringstream out;
  out.precision(6);
  out << "file playable failure path_length style closest_original\n";
  for (const auto& e : summary.sections) {
    out << files[e.index] << ' ' << (e.playability.playable ? "yes" : "no") << ' '
        << to_string(e.playability.failure) << ' ' << e.playability.path.size() << ' ' << e.style.score << ' '
        << model.section_ids[e.style.closest] << '\n';
  }
  out << "percent_playable " << summary.percent_playable << "\nmedian_style " << summary.median_style << '\n';
  return out.str();
}

std::string evaluation_csv(const EvaluationSummary& summary, const GenerationParams& params, std::size_t raw_count) {
  SweepResult r;
  SweepRow row;
  row.p_C = params.p_C;
  row.p_E = params.p_E;
  row.sample_size = summary.sections.size();
  row.percent_playable = summary.percent_playable;
  row.median_style = summary.median_style;
  row.raw_count = raw_count;
  r.rows.push_back(row);
  return sweep_csv(r);
}

void render_frame_files(const Frame& frame, const SpriteCatalog& catalog, const SpriteAtlas& atlas,
                        const fs::path& ascii, const fs::path& png) {
  if (!ascii.empty()) write_text_file(ascii, ascii_grid(frame, catalog));
  if (!png.empty()) {
    if (png.has_parent_path()) fs::create_directories(png.parent_path());
    write_png(png, render_frame(frame, atlas));
  }
}

void clear_frame_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) return;
  std::vector<fs::path> stale;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("frame_", 0) == 0 && e.path().extension() == ".png") stale.push_back(e.path());
  }
  for (const auto& p : stale) fs::remove(p);
}

struct SynthInfo {
  Corpus corpus;
  std::vector<std::string> standable;
  std::vector<std::string> ignored;
};

SynthInfo synthesize(const std::optional<std::string>& fixture, const std::optional<std::uint64_t>& random_seed,
                     const fs::path& out_dir) {
  CorpusSpec spec;
  if (fixture) {
    if (*fixture != "treetop") throw ValidationError("unknown fixture '" + *fixture + "' (known: treetop)");
    spec = treetop_fixture();
  } else if (random_seed) {
    spec = random_corpus_spec(*random_seed);
  } else {
    throw ValidationError("synth needs --fixture or --random-seed (corpus.fixture / corpus.random_seed)");
  }
  SynthInfo info;
  info.corpus = build_corpus(spec);
  const auto& catalog = info.corpus.trace.catalog;
  for (TypeId t : spec.standable) info.standable.push_back(catalog.at(t).name);
  if (spec.walker) info.ignored.push_back(catalog.at(*spec.walker).name);

  const auto atlas = procedural_atlas(catalog);
  save_trace(info.corpus.trace, out_dir / "trace.json");
  write_text_file(out_dir / "truth.json", dump_ground_truth(info.corpus.truth));
  save_atlas(atlas, catalog, out_dir / "atlas");
  clear_frame_images(out_dir / "frames");
  render_trace_frames(info.corpus.trace, atlas, out_dir / "frames");
  json corpus_doc = {{"version", 1},
                     {"source", fixture ? *fixture : std::string("random")},
                     {"seed", spec.rng_seed},
                     {"standable", info.standable},
                     {"ignored_types", info.ignored}};
  write_text_file(out_dir / "corpus.json", corpus_doc.dump(1) + "\n");
  return info;
}

Trace apply_ignore_region(Trace trace, const std::vector<int>& region) {
  if (region.empty()) return trace;
  if (region.size() != 4 || region[2] < 0 || region[3] < 0) {
    throw ValidationError("ignore region must be x y w h in tiles");
  }
  for (auto& f : trace.frames) {
    std::vector<SpriteInstance> kept;
    for (const auto& s : f.instances()) {
      const bool inside = s.x >= region[0] && s.x < region[0] + region[2] && s.y >= region[1] &&
                          s.y < region[1] + region[3];
      if (!inside) kept.push_back(s);
    }
    f = Frame(f.index(), f.width(), f.height(), std::move(kept));
  }
  return trace;
}

struct IngestFlags {
  std::optional<double> fps;
  std::optional<double> tolerance;
  std::vector<int> ignore_region;
  CLI::Option* ignore_opt = nullptr;

  void add(CLI::App* app) {
    app->add_option("--fps", fps, "Frames per second recorded in the trace");
    app->add_option("--tolerance", tolerance, "Largest mean squared error accepted for a template match");
    ignore_opt = app->add_option("--ignore-region", ignore_region, "x y w h (tiles) dropped from every frame")
                     ->expected(4);
  }
};

Trace ingest(const fs::path& frames, const fs::path& atlas_path, const IngestFlags& flags, const Config& cfg,
             std::ostream& out, std::ostream& err) {
  require_file(frames, "frame directory");
  require_file(atlas_path, "atlas manifest");
  const auto catalog = atlas_catalog(atlas_path);
  const auto atlas = load_atlas(atlas_path, catalog);
  TraceMeta meta;
  meta.tile_size_px = atlas.tile_size_px;
  meta.width = 0;
  meta.height = 0;
  meta.fps = pick(flags.fps, cfg, "ingest", "fps", 30.0);
  if (!(meta.fps > 0.0)) throw ValidationError("fps must be positive");
  const double tolerance = pick(flags.tolerance, cfg, "ingest", "tolerance", 0.0);
  auto result = ingest_frames(frames, atlas, catalog, meta, tolerance);
  for (const auto& s : result.skipped) err << "skipped " << s.path.filename().string() << ": " << s.message << '\n';
  const auto region = pick_vector(flags.ignore_region, flags.ignore_opt, cfg, "ingest", "ignore_region", {});
  Trace trace = apply_ignore_region(std::move(result.trace), region);
  out << "ingested " << trace.frames.size() << " frames (" << result.skipped.size() << " skipped)\n";
  return trace;
}

std::vector<LevelSection> category_sections(const SectionReport& report, const CategoryReport* categories,
                                            int category) {
  if (!categories) {
    auto high = report.high_sections();
    if (high.empty()) throw ValidationError("no high-interaction sections to model");
    return high;
  }
  const auto& members = categories->categories.members;
  if (category < 0 || category >= static_cast<int>(members.size())) {
    throw ValidationError("category " + std::to_string(category) + " does not exist (" +
                          std::to_string(members.size()) + " categories)");
  }
  std::vector<LevelSection> out;
  for (int i : members[static_cast<std::size_t>(category)]) {
    if (i < 0 || i >= static_cast<int>(report.set.sections.size())) {
      throw ValidationError("category file refers to section " + std::to_string(i) + " outside the section list");
    }
    out.push_back(report.set.sections[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::string generation_summary(const GenerationResult& r) {
  std::ostringstream out;
  out << "raw " << r.raw_count << " outputs " << r.sections.size() << " expansions " << r.expansions
      << (r.truncated ? " truncated" : "") << (r.depth_limited ? " depth_limited" : "") << '\n';
  return out.str();
}

int pipeline(const Config& cfg, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  const auto seg_params = SegmentFlags{}.resolve(cfg);
  const auto cat_params = ClusterFlags{}.resolve(cfg);

  const auto info = synthesize(cfg.get<std::string>("corpus", "fixture"), cfg.get<std::uint64_t>("corpus", "random_seed"),
                               out_dir / "corpus");
  out << "synth: " << info.corpus.trace.frames.size() << " frames\n";

  IngestFlags ingest_flags;
  const Trace trace =
      ingest(out_dir / "corpus" / "frames", out_dir / "corpus" / "atlas" / "atlas.json", ingest_flags, cfg, out, err);
  save_trace(trace, out_dir / "trace.json");

  const auto report = make_section_report(trace, segment_trace(trace, seg_params, "trace"));
  save_sections(report, out_dir / "sections.json");
  write_text_file(out_dir / "sections.txt", section_table(report));
  write_text_file(out_dir / "interaction.csv", interaction_csv(report));
  out << "segment: " << report.set.sections.size() << " sections, " << report.high_sections().size()
      << " high-interaction\n";

  const auto categories = categorize_report(report, cat_params);
  save_categories(categories, out_dir / "categories.json");
  out << "cluster: " << categories.categories.k << " categories\n";

  const auto model_params = ModelFlags{}.resolve(cfg, trace.catalog, info.ignored);
  const auto gen_params = GenerateFlags{}.resolve(cfg);
  const auto eval_params = EvaluateFlags{}.resolve(cfg, trace.catalog, info.standable);
  auto sweep_config = SweepFlags{}.resolve(cfg);
  sweep_config.generation = gen_params;
  sweep_config.evaluation = eval_params;
  const auto render_limit = cfg.get<std::size_t>("render", "limit");

  for (int c = 0; c < categories.categories.k; ++c) {
    const fs::path dir = out_dir / ("category_" + std::to_string(c));
    const auto sections = category_sections(report, &categories, c);
    const auto model = build_style_model(sections, trace.catalog, model_params);
    save_model(model, dir / "model.json");

    const auto result = generate_all(model, gen_params);
    save_generation(result, gen_params, model, dir / "generated");
    out << "category " << c << " generate: " << generation_summary(result);

    std::vector<Frame> layouts;
    std::vector<std::string> files;
    for (std::size_t i = 0; i < result.sections.size(); ++i) {
      layouts.push_back(result.sections[i].layout);
      files.push_back(section_file_name(i));
    }
    const auto summary = evaluate_sample(layouts, model.sections, eval_params);
    write_text_file(dir / "evaluation.csv", evaluation_csv(summary, gen_params, result.raw_count));
    write_text_file(dir / "evaluation.txt", evaluation_report(summary, files, model));

    const auto swept = sweep(model, sweep_config);
    write_text_file(dir / "sweep.csv", sweep_csv(swept));
    write_text_file(dir / "sweep_notes.txt", sweep_notes(swept));
    out << "category " << c << " sweep: " << swept.rows.size() << " settings\n";

    const auto atlas = tinted_atlas(model.catalog);
    const std::size_t n = std::min(layouts.size(), render_limit.value_or(layouts.size()));
    for (std::size_t i = 0; i < n; ++i) {
      const auto stem = fs::path(files[i]).stem().string();
      render_frame_files(layouts[i], model.catalog, atlas, dir / "render" / (stem + ".txt"),
                         dir / "render" / (stem + ".png"));
    }
    write_text_file(dir / "render" / "legend.txt", glyph_legend(model.catalog));
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn level-section models from gameplay traces and generate new sections", "levelgen"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Versioned JSON config; flags override its values");
  };

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus: trace, ground truth, atlas and frame images");
  std::string synth_out;
  std::optional<std::string> fixture;
  std::optional<std::uint64_t> random_seed;
  add_config(synth);
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--fixture", fixture, "Named fixture (treetop)");
  synth->add_option("--random-seed", random_seed, "Seed for a random corpus");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse a directory of frame images into a trace");
  std::string frames_dir, atlas_path, ingest_out;
  IngestFlags ingest_flags;
  add_config(ingest_cmd);
  ingest_cmd->add_option("--frames", frames_dir, "Directory of frame_<index>.png images")->required();
  ingest_cmd->add_option("--atlas", atlas_path, "Atlas manifest (atlas.json)")->required();
  ingest_cmd->add_option("--out", ingest_out, "Trace file to write")->required();
  ingest_flags.add(ingest_cmd);

  // segment
  auto* segment = app.add_subcommand("segment", "Split a trace into level sections");
  std::string trace_path, sections_out, csv_out;
  SegmentFlags segment_flags;
  add_config(segment);
  segment->add_option("--trace", trace_path, "Trace file")->required();
  segment->add_option("--out", sections_out, "Sections file to write")->required();
  segment->add_option("--csv", csv_out, "Optional section,interaction_value CSV");
  segment_flags.add(segment);

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Group high-interaction sections into categories");
  std::string cluster_in, cluster_out;
  ClusterFlags cluster_flags;
  add_config(cluster);
  cluster->add_option("--sections", cluster_in, "Sections file")->required();
  cluster->add_option("--out", cluster_out, "Categories file to write")->required();
  cluster_flags.add(cluster);

  // model
  auto* model_cmd = app.add_subcommand("model", "Build a style model from one category of sections");
  std::string model_sections, model_categories, model_out;
  std::optional<int> category;
  ModelFlags model_flags;
  add_config(model_cmd);
  model_cmd->add_option("--sections", model_sections, "Sections file")->required();
  model_cmd->add_option("--categories", model_categories, "Categories file (all high-interaction sections if omitted)");
  model_cmd->add_option("--category", category, "Category index to model");
  model_cmd->add_option("--out", model_out, "Model file to write")->required();
  model_flags.add(model_cmd);

  // generate
  auto* generate = app.add_subcommand("generate", "Enumerate new sections from a model");
  std::string gen_model, gen_out;
  GenerateFlags generate_flags;
  add_config(generate);
  generate->add_option("--model", gen_model, "Model file")->required();
  generate->add_option("--out", gen_out, "Output directory for sections and manifest.json")->required();
  generate_flags.add(generate, true);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score a sample of generated sections");
  std::string eval_model, eval_generated, eval_out, eval_report;
  EvaluateFlags evaluate_flags;
  add_config(evaluate);
  evaluate->add_option("--model", eval_model, "Model file")->required();
  evaluate->add_option("--generated", eval_generated, "Directory written by generate")->required();
  evaluate->add_option("--out", eval_out, "CSV file to write")->required();
  evaluate->add_option("--report", eval_report, "Optional per-section report");
  evaluate_flags.add(evaluate);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Vary p_C and p_E and report playability and style");
  std::string sweep_model, sweep_out;
  GenerateFlags sweep_generate;
  EvaluateFlags sweep_evaluate;
  SweepFlags sweep_flags;
  add_config(sweep_cmd);
  sweep_cmd->add_option("--model", sweep_model, "Model file")->required();
  sweep_cmd->add_option("--out", sweep_out, "CSV file to write")->required();
  sweep_generate.add(sweep_cmd, false);
  sweep_evaluate.add(sweep_cmd);
  sweep_flags.add(sweep_cmd);

  // render
  auto* render = app.add_subcommand("render", "Draw a section as ASCII and PNG");
  std::string render_in, render_ascii, render_png, render_atlas;
  int render_frame_ordinal = 0;
  bool legend = false;
  render->add_option("--input", render_in, "Trace-schema file (a generated section or a trace)")->required();
  render->add_option("--frame", render_frame_ordinal, "Frame ordinal within the file");
  render->add_option("--ascii", render_ascii, "ASCII output file (stdout when omitted)");
  render->add_option("--png", render_png, "PNG output file");
  render->add_option("--atlas", render_atlas, "Atlas manifest for sprite art (tinted tiles when omitted)");
  render->add_flag("--legend", legend, "Print the glyph legend");

  // pipeline
  auto* pipeline_cmd = app.add_subcommand("pipeline", "synth, ingest, segment, cluster, model, generate, evaluate, sweep, render");
  std::string pipeline_out;
  pipeline_cmd->add_option("--config", config_path, "Versioned JSON config")->required();
  pipeline_cmd->add_option("--out", pipeline_out, "Output directory (overrides output_dir)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    const Config cfg = config_path.empty() ? Config{} : Config(config_path);

    if (synth->parsed()) {
      const auto fx = fixture ? fixture : cfg.get<std::string>("corpus", "fixture");
      const auto seed = random_seed ? random_seed : cfg.get<std::uint64_t>("corpus", "random_seed");
      const auto info = synthesize(fx, seed, synth_out);
      out << "wrote " << info.corpus.trace.frames.size() << " frames to " << synth_out << '\n';
    } else if (ingest_cmd->parsed()) {
      save_trace(ingest(frames_dir, atlas_path, ingest_flags, cfg, out, err), ingest_out);
    } else if (segment->parsed()) {
      require_file(trace_path, "trace");
      const Trace trace = load_trace(trace_path);
      const auto report =
          make_section_report(trace, segment_trace(trace, segment_flags.resolve(cfg), fs::path(trace_path).stem().string()));
      save_sections(report, sections_out);
      if (!csv_out.empty()) write_text_file(csv_out, interaction_csv(report));
      out << section_table(report);
    } else if (cluster->parsed()) {
      require_file(cluster_in, "sections file");
      const auto report = load_sections(cluster_in);
      const auto categories = categorize_report(report, cluster_flags.resolve(cfg));
      save_categories(categories, cluster_out);
      out << "k " << categories.categories.k << '\n';
      for (std::size_t c = 0; c < categories.categories.members.size(); ++c) {
        out << "category " << c << ":";
        for (int i : categories.categories.members[c]) out << ' ' << i;
        out << '\n';
      }
    } else if (model_cmd->parsed()) {
      require_file(model_sections, "sections file");
      const auto report = load_sections(model_sections);
      std::optional<CategoryReport> cats;
      if (!model_categories.empty()) {
        require_file(model_categories, "categories file");
        cats = load_categories(model_categories);
      }
      const int c = pick(category, cfg, "model", "category", 0);
      const auto sections = category_sections(report, cats ? &*cats : nullptr, c);
      const auto model = build_style_model(sections, report.catalog, model_flags.resolve(cfg, report.catalog));
      save_model(model, model_out);
      out << "sections " << model.sections.size() << " s_nodes " << model.s_nodes.size() << " l_nodes "
          << model.l_nodes.size() << '\n';
    } else if (generate->parsed()) {
      require_file(gen_model, "model file");
      const auto model = load_model(gen_model);
      const auto params = generate_flags.resolve(cfg);
      const auto result = generate_all(model, params);
      save_generation(result, params, model, gen_out);
      out << generation_summary(result);
    } else if (evaluate->parsed()) {
      require_file(eval_model, "model file");
      require_file(fs::path(eval_generated) / "manifest.json", "generation manifest");
      const auto model = load_model(eval_model);
      const auto manifest = load_generation(eval_generated);
      const auto params = evaluate_flags.resolve(cfg, model.catalog);
      const auto summary = evaluate_sample(manifest.layouts(), model.sections, params);
      write_text_file(eval_out, evaluation_csv(summary, manifest.params, manifest.raw_count));
      std::vector<std::string> files;
      for (const auto& e : manifest.sections) files.push_back(e.file);
      const auto text = evaluation_report(summary, files, model);
      if (!eval_report.empty()) write_text_file(eval_report, text);
      out << text;
    } else if (sweep_cmd->parsed()) {
      require_file(sweep_model, "model file");
      const auto model = load_model(sweep_model);
      auto config = sweep_flags.resolve(cfg);
      config.generation = sweep_generate.resolve(cfg);
      config.evaluation = sweep_evaluate.resolve(cfg, model.catalog);
      const auto swept = sweep(model, config);
      const auto csv = sweep_csv(swept);
      write_text_file(sweep_out, csv);
      out << csv;
      const auto notes = sweep_notes(swept);
      if (!notes.empty()) out << "\nflagged settings\n" << notes;
    } else if (render->parsed()) {
      require_file(render_in, "section file");
      const Trace t = load_trace(render_in);
      if (render_frame_ordinal < 0 || render_frame_ordinal >= static_cast<int>(t.frames.size())) {
        throw ValidationError(render_in + ": no frame " + std::to_string(render_frame_ordinal));
      }
      const Frame& f = t.frames[static_cast<std::size_t>(render_frame_ordinal)];
      SpriteAtlas atlas;
      if (render_atlas.empty()) {
        atlas = tinted_atlas(t.catalog);
      } else {
        require_file(render_atlas, "atlas manifest");
        atlas = load_atlas(render_atlas, t.catalog);
      }
      render_frame_files(f, t.catalog, atlas, render_ascii, render_png);
      if (render_ascii.empty()) out << ascii_grid(f, t.catalog);
      if (legend) out << glyph_legend(t.catalog);
    } else if (pipeline_cmd->parsed()) {
      std::string dir = pipeline_out;
      if (dir.empty()) dir = cfg.output_dir().value_or("");
      if (dir.empty()) throw ValidationError("pipeline needs --out or output_dir in the config");
      return pipeline(cfg, dir, out, err);
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace levelgen::cli
