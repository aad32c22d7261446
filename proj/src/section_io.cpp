#include "levelgen/section_io.hpp"

#include <sstream>

#include "levelgen/detail/json_util.hpp"
#include "levelgen/trace_io.hpp"

namespace levelgen {

using detail::json;

namespace {

json section_to_json(const LevelSection& s) {
  return {{"trace_id", s.trace_id},
          {"start", s.start_frame},
          {"end", s.end_frame},
          {"interaction_value", s.interaction_value},
          {"frame", s.representative.index()},
          {"instances", detail::instances_to_json(s.representative.instances())}};
}

LevelSection section_from_json(const json& j, const TraceMeta& meta, const std::string& where) {
  LevelSection s;
  s.trace_id = detail::get_field<std::string>(j, "trace_id", where);
  s.start_frame = detail::get_field<int>(j, "start", where);
  s.end_frame = detail::get_field<int>(j, "end", where);
  s.interaction_value = detail::get_field<int>(j, "interaction_value", where);
  if (s.end_frame < s.start_frame || s.interaction_value < 1) {
    throw ValidationError(where + ": section range or interaction value is invalid");
  }
  s.representative = Frame(detail::get_field<int>(j, "frame", where), meta.width, meta.height,
                           detail::instances_from_json(detail::field(j, "instances", where), where + ".instances"));
  return s;
}

std::vector<LevelSection> sections_from_json(const json& arr, const TraceMeta& meta, const std::string& where) {
  if (!arr.is_array()) throw ParseError(where + ": expected an array");
  std::vector<LevelSection> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(section_from_json(arr[i], meta, where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void check_frames(const SectionReport& report, const std::string& source) {
  Trace probe;
  probe.meta = report.meta;
  probe.catalog = report.catalog;
  for (const auto* list : {&report.set.sections, &report.set.dropped}) {
    for (const auto& s : *list) {
      probe.frames = {s.representative.with_index(0)};
      try {
        validate_trace(probe);
      } catch (const ValidationError& e) {
        throw ValidationError(source + ": section starting at frame " + std::to_string(s.start_frame) + ": " +
                              e.what());
      }
    }
  }
}

}  // namespace

std::vector<LevelSection> SectionReport::high_sections() const {
  std::vector<LevelSection> out;
  for (std::size_t i = 0; i < set.sections.size(); ++i) {
    if (high_interaction[i]) out.push_back(set.sections[i]);
  }
  return out;
}

SectionReport make_section_report(const Trace& trace, SectionSet set) {
  SectionReport r;
  r.meta = trace.meta;
  r.catalog = trace.catalog;
  r.high_interaction = high_interaction_flags(set.sections);
  r.set = std::move(set);
  return r;
}

std::string dump_sections(const SectionReport& report) {
  std::string out = "{\"version\": " + std::to_string(kSectionSchemaVersion) + ",\n";
  out += " \"meta\": " + detail::meta_to_json(report.meta).dump() + ",\n";
  out += " \"catalog\": " + detail::catalog_to_json(report.catalog).dump() + ",\n";
  out += " \"endpoints\": " + json(report.set.endpoints).dump() + ",\n";
  out += " \"high_interaction\": " + json(report.high_interaction).dump() + ",\n";
  auto list = [&](const char* key, const std::vector<LevelSection>& sections, bool last) {
    out += std::string(" \"") + key + "\": [";
    for (std::size_t i = 0; i < sections.size(); ++i) out += (i == 0 ? "\n  " : ",\n  ") + section_to_json(sections[i]).dump();
    out += last ? "]}\n" : "],\n";
  };
  list("sections", report.set.sections, false);
  list("dropped", report.set.dropped, true);
  return out;
}

SectionReport parse_sections(std::string_view text, const std::string& source) {
  const json doc = detail::parse_json_text(text, source);
  detail::check_version(doc, kSectionSchemaVersion, source);
  SectionReport r;
  r.meta = detail::meta_from_json(detail::field(doc, "meta", source), source + ".meta");
  r.catalog = detail::catalog_from_json(detail::field(doc, "catalog", source), r.meta.tile_size_px, source + ".catalog");
  r.set.endpoints = detail::get_field<std::vector<int>>(doc, "endpoints", source);
  r.high_interaction = detail::get_field<std::vector<bool>>(doc, "high_interaction", source);
  r.set.sections = sections_from_json(detail::field(doc, "sections", source), r.meta, source + ".sections");
  r.set.dropped = sections_from_json(detail::field(doc, "dropped", source), r.meta, source + ".dropped");
  if (r.high_interaction.size() != r.set.sections.size()) {
    throw ValidationError(source + ": one high_interaction flag per section required");
  }
  check_frames(r, source);
  return r;
}

SectionReport load_sections(const std::filesystem::path& path) {
  return parse_sections(read_text_file(path), path.string());
}

void save_sections(const SectionReport& report, const std::filesystem::path& path) {
  write_text_file(path, dump_sections(report));
}

std::string section_table(const SectionReport& report) {
  std::ostringstream out;
  out << "section start end interaction_value high_interaction\n";
  for (std::size_t i = 0; i < report.set.sections.size(); ++i) {
    const auto& s = report.set.sections[i];
    out << i << ' ' << s.start_frame << ' ' << s.end_frame << ' ' << s.interaction_value << ' '
        << (report.high_interaction[i] ? "yes" : "no") << '\n';
  }
  for (const auto& s : report.set.dropped) {
    out << "dropped " << s.start_frame << ' ' << s.end_frame << ' ' << s.interaction_value << " -\n";
  }
  return out.str();
}

std::string interaction_csv(const SectionReport& report) {
  std::ostringstream out;
  out << "section,interaction_value\n";
  for (std::size_t i = 0; i < report.set.sections.size(); ++i) {
    out << i << ',' << report.set.sections[i].interaction_value << '\n';
  }
  return out.str();
}

CategoryReport categorize_report(const SectionReport& report, const CategoryParams& params) {
  std::vector<int> index;
  for (std::size_t i = 0; i < report.set.sections.size(); ++i) {
    if (report.high_interaction[i]) index.push_back(static_cast<int>(i));
  }
  if (index.empty()) throw ValidationError("no high-interaction sections to cluster");
  CategoryReport out;
  out.params = params;
  out.categories = categorize_sections(report.high_sections(), report.catalog, params);
  for (auto& members : out.categories.members) {
    for (int& m : members) m = index[static_cast<std::size_t>(m)];
  }
  return out;
}

std::string dump_categories(const CategoryReport& report) {
  json doc;
  doc["version"] = kCategorySchemaVersion;
  doc["params"] = {{"seed", report.params.seed},
                   {"k_max", report.params.k_max},
                   {"fk_threshold", report.params.fk_threshold}};
  doc["k"] = report.categories.k;
  doc["assignment"] = report.categories.assignment;
  doc["members"] = report.categories.members;
  doc["distortion"] = report.categories.distortion;
  return doc.dump(1) + "\n";
}

CategoryReport parse_categories(std::string_view text, const std::string& source) {
  const json doc = detail::parse_json_text(text, source);
  detail::check_version(doc, kCategorySchemaVersion, source);
  CategoryReport r;
  const auto& p = detail::field(doc, "params", source);
  r.params.seed = detail::get_field<std::uint64_t>(p, "seed", source + ".params");
  r.params.k_max = detail::get_field<int>(p, "k_max", source + ".params");
  r.params.fk_threshold = detail::get_field<double>(p, "fk_threshold", source + ".params");
  r.categories.k = detail::get_field<int>(doc, "k", source);
  r.categories.assignment = detail::get_field<std::vector<int>>(doc, "assignment", source);
  r.categories.members = detail::get_field<std::vector<std::vector<int>>>(doc, "members", source);
  r.categories.distortion = detail::get_field<double>(doc, "distortion", source);
  if (static_cast<int>(r.categories.members.size()) != r.categories.k) {
    throw ValidationError(source + ": member lists do not match k");
  }
  return r;
}

CategoryReport load_categories(const std::filesystem::path& path) {
  return parse_categories(read_text_file(path), path.string());
}

void save_categories(const CategoryReport& report, const std::filesystem::path& path) {
  write_text_file(path, dump_categories(report));
}

}  // namespace levelgen
