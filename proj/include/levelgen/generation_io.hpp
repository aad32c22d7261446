#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "levelgen/generator.hpp"

namespace levelgen {

inline constexpr int kManifestSchemaVersion = 1;

struct GeneratedEntry {
  std::string file;
  int l_node = 0;
  Placement seed;
  std::size_t placements = 0;
  std::uint64_t trace_hash = 0;
  Frame layout;
};

struct GenerationManifest {
  GenerationParams params;
  std::size_t raw_count = 0;
  long long expansions = 0;
  bool truncated = false;
  bool depth_limited = false;
  std::vector<GeneratedEntry> sections;

  std::vector<Frame> layouts() const;
};

std::string section_file_name(std::size_t index);

/// manifest.json (parameters, counts, truncation flags, provenance) plus
/// one single-frame trace file per generated section.
void save_generation(const GenerationResult& result, const GenerationParams& params, const StyleModel& model,
                     const std::filesystem::path& directory);
std::string dump_manifest(const GenerationResult& result, const GenerationParams& params);
/// Reads the manifest and every section file it lists.
GenerationManifest load_generation(const std::filesystem::path& directory);

}  // namespace levelgen
