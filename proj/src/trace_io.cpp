#include "levelgen/trace_io.hpp"

#include <fstream>
#include <sstream>

#include "levelgen/detail/json_util.hpp"

namespace levelgen {

using detail::json;

std::string dump_trace(const Trace& trace) {
  std::string out = "{\"version\": " + std::to_string(kTraceSchemaVersion) + ",\n";
  out += " \"meta\": " + detail::meta_to_json(trace.meta).dump() + ",\n";
  out += " \"catalog\": [";
  const json catalog = detail::catalog_to_json(trace.catalog);
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    out += (i == 0 ? "\n  " : ",\n  ") + catalog[i].dump();
  }
  out += "],\n \"frames\": [";
  for (std::size_t f = 0; f < trace.frames.size(); ++f) {
    const Frame& frame = trace.frames[f];
    json row = {{"i", frame.index()}, {"instances", detail::instances_to_json(frame.instances())}};
    out += (f == 0 ? "\n  " : ",\n  ") + row.dump();
  }
  out += "]}\n";
  return out;
}

Trace parse_trace(std::string_view text, const std::string& source) {
  const json doc = detail::parse_json_text(text, source);
  detail::check_version(doc, kTraceSchemaVersion, source);

  Trace trace;
  trace.meta = detail::meta_from_json(detail::field(doc, "meta", source), source + ".meta");
  trace.catalog = detail::catalog_from_json(detail::field(doc, "catalog", source), trace.meta.tile_size_px,
                                            source + ".catalog");
  const json& frames = detail::field(doc, "frames", source);
  if (!frames.is_array()) throw ParseError(source + ".frames: expected an array");
  trace.frames.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const std::string where = source + ".frames[" + std::to_string(f) + "]";
    const int index = detail::get_field<int>(frames[f], "i", where);
    auto instances = detail::instances_from_json(detail::field(frames[f], "instances", where), where + ".instances");
    trace.frames.emplace_back(index, trace.meta.width, trace.meta.height, std::move(instances));
  }
  validate_trace(trace);
  return trace;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Trace load_trace(const std::filesystem::path& path) { return parse_trace(read_text_file(path), path.string()); }

void save_trace(const Trace& trace, const std::filesystem::path& path) {
  validate_trace(trace);
  write_text_file(path, dump_trace(trace));
}

}  // namespace levelgen
