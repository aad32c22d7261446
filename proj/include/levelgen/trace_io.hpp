#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "levelgen/trace.hpp"

namespace levelgen {

inline constexpr int kTraceSchemaVersion = 1;

/// Serializes to the versioned trace schema: one catalog entry and one frame
/// per line, instances as [type_id, x, y].
std::string dump_trace(const Trace& trace);

/// Parses and validates. `source` prefixes error messages (usually a path).
/// Throws ParseError (with line/column or field path) or ValidationError.
Trace parse_trace(std::string_view text, const std::string& source = "<trace>");

Trace load_trace(const std::filesystem::path& path);
void save_trace(const Trace& trace, const std::filesystem::path& path);

/// Whole-file helpers shared by every artifact reader/writer.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace levelgen
