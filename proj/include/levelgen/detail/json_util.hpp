#pragma once

// Internal helpers for reading the JSON-based artifact formats with errors
// that name the offending line or field.

#include <string>
#include <string_view>

#include <json.hpp>

#include "levelgen/trace.hpp"

namespace levelgen::detail {

using json = nlohmann::json;

inline json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

inline const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

template <typename T>
T get_as(const json& value, const std::string& where) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
}

template <typename T>
T get_field(const json& obj, const char* key, const std::string& where) {
  return get_as<T>(field(obj, key, where), where + "." + key);
}

template <typename T>
T get_field_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return get_as<T>(*it, where + "." + key);
}

inline void check_version(const json& doc, int expected, const std::string& source) {
  const int version = get_field<int>(doc, "version", source);
  if (version != expected) {
    throw ValidationError(source + ": schema version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(expected) + ")");
  }
}

inline json catalog_to_json(const SpriteCatalog& catalog) {
  json out = json::array();
  for (const auto& e : catalog.entries()) {
    out.push_back({{"id", e.id}, {"name", e.name}, {"w", e.tile_w}, {"h", e.tile_h}});
  }
  return out;
}

inline SpriteCatalog catalog_from_json(const json& arr, int tile_size_px, const std::string& where) {
  if (!arr.is_array()) throw ParseError(where + ": expected an array");
  std::vector<SpriteType> entries;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    entries.push_back({get_field<int>(arr[i], "id", at), get_field<std::string>(arr[i], "name", at),
                       get_field_or<int>(arr[i], "w", 1, at), get_field_or<int>(arr[i], "h", 1, at)});
  }
  return SpriteCatalog(std::move(entries), tile_size_px);
}

inline json instances_to_json(const std::vector<SpriteInstance>& instances) {
  json out = json::array();
  for (const auto& s : instances) out.push_back(json::array({s.type, s.x, s.y}));
  return out;
}

inline std::vector<SpriteInstance> instances_from_json(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParseError(where + ": expected an array");
  std::vector<SpriteInstance> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    const auto& v = arr[i];
    if (!v.is_array() || v.size() != 3) throw ParseError(at + ": expected [type_id, x, y]");
    out.push_back({get_as<int>(v[0], at), get_as<int>(v[1], at), get_as<int>(v[2], at)});
  }
  return out;
}

inline json meta_to_json(const TraceMeta& meta) {
  return {{"tile_size_px", meta.tile_size_px}, {"width", meta.width}, {"height", meta.height}, {"fps", meta.fps}};
}

inline TraceMeta meta_from_json(const json& j, const std::string& where) {
  TraceMeta meta;
  meta.tile_size_px = get_field_or<int>(j, "tile_size_px", 16, where);
  meta.width = get_field<int>(j, "width", where);
  meta.height = get_field<int>(j, "height", where);
  meta.fps = get_field<double>(j, "fps", where);
  return meta;
}

}  // namespace levelgen::detail
