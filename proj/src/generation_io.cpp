#include "levelgen/generation_io.hpp"

#include <cstdio>

#include "levelgen/detail/json_util.hpp"
#include "levelgen/trace_io.hpp"

namespace levelgen {

using detail::json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json params_to_json(const GenerationParams& p) {
  return {{"p_E", p.p_E},
          {"p_C", p.p_C},
          {"max_depth", p.max_depth},
          {"max_outputs", p.max_outputs},
          {"match_tolerance", p.match_tolerance},
          {"rng_seed", p.rng_seed},
          {"dedup", p.dedup},
          {"max_expansions", p.max_expansions}};
}

GenerationParams params_from_json(const json& j, const std::string& where) {
  GenerationParams p;
  p.p_E = detail::get_field<double>(j, "p_E", where);
  p.p_C = detail::get_field<double>(j, "p_C", where);
  p.max_depth = detail::get_field<int>(j, "max_depth", where);
  p.max_outputs = detail::get_field<int>(j, "max_outputs", where);
  p.match_tolerance = detail::get_field<int>(j, "match_tolerance", where);
  p.rng_seed = detail::get_field<std::uint64_t>(j, "rng_seed", where);
  p.dedup = detail::get_field<bool>(j, "dedup", where);
  p.max_expansions = detail::get_field<long long>(j, "max_expansions", where);
  p.validate();
  return p;
}

}  // namespace

std::vector<Frame> GenerationManifest::layouts() const {
  std::vector<Frame> out;
  for (const auto& e : sections) out.push_back(e.layout);
  return out;
}

std::string section_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "section_%05zu.json", index);
  return buf;
}

std::string dump_manifest(const GenerationResult& result, const GenerationParams& params) {
  json doc;
  doc["version"] = kManifestSchemaVersion;
  doc["params"] = params_to_json(params);
  doc["raw_count"] = result.raw_count;
  doc["output_count"] = result.sections.size();
  doc["expansions"] = result.expansions;
  doc["truncated"] = result.truncated;
  doc["depth_limited"] = result.depth_limited;
  doc["sections"] = json::array();
  for (std::size_t i = 0; i < result.sections.size(); ++i) {
    const auto& g = result.sections[i];
    doc["sections"].push_back({{"file", section_file_name(i)},
                               {"l_node", g.l_node},
                               {"seed", {g.seed.s_node, g.seed.member, g.seed.anchor.x, g.seed.anchor.y}},
                               {"placements", g.placements.size()},
                               {"trace_hash", hex64(g.trace_hash)}});
  }
  return doc.dump(1) + "\n";
}

void save_generation(const GenerationResult& result, const GenerationParams& params, const StyleModel& model,
                     const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  Trace one;
  one.meta.tile_size_px = model.catalog.tile_size_px();
  one.meta.width = model.width;
  one.meta.height = model.height;
  one.catalog = model.catalog;
  for (std::size_t i = 0; i < result.sections.size(); ++i) {
    one.frames = {result.sections[i].layout.with_index(0)};
    save_trace(one, directory / section_file_name(i));
  }
  write_text_file(directory / "manifest.json", dump_manifest(result, params));
}

GenerationManifest load_generation(const std::filesystem::path& directory) {
  const auto path = directory / "manifest.json";
  const std::string source = path.string();
  const json doc = detail::parse_json_text(read_text_file(path), source);
  detail::check_version(doc, kManifestSchemaVersion, source);
  GenerationManifest m;
  m.params = params_from_json(detail::field(doc, "params", source), source + ".params");
  m.raw_count = detail::get_field<std::size_t>(doc, "raw_count", source);
  m.expansions = detail::get_field<long long>(doc, "expansions", source);
  m.truncated = detail::get_field<bool>(doc, "truncated", source);
  m.depth_limited = detail::get_field<bool>(doc, "depth_limited", source);
  const auto& sections = detail::field(doc, "sections", source);
  if (!sections.is_array()) throw ParseError(source + ".sections: expected an array");
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const std::string at = source + ".sections[" + std::to_string(i) + "]";
    GeneratedEntry e;
    e.file = detail::get_field<std::string>(sections[i], "file", at);
    e.l_node = detail::get_field<int>(sections[i], "l_node", at);
    const auto seed = detail::get_field<std::vector<int>>(sections[i], "seed", at);
    if (seed.size() != 4) throw ParseError(at + ".seed: expected [s_node, member, x, y]");
    e.seed = {seed[0], seed[1], {seed[2], seed[3]}};
    e.placements = detail::get_field<std::size_t>(sections[i], "placements", at);
    e.trace_hash = std::stoull(detail::get_field<std::string>(sections[i], "trace_hash", at), nullptr, 16);
    const Trace t = load_trace(directory / e.file);
    if (t.frames.size() != 1) throw ValidationError(e.file + ": expected exactly one frame");
    e.layout = t.frames.front();
    m.sections.push_back(std::move(e));
  }
  if (detail::get_field<std::size_t>(doc, "output_count", source) != m.sections.size()) {
    throw ValidationError(source + ": output_count disagrees with the section list");
  }
  return m;
}

}  // namespace levelgen
