#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "levelgen/segmentation.hpp"

namespace levelgen {

inline constexpr int kSectionSchemaVersion = 1;
inline constexpr int kCategorySchemaVersion = 1;

/// Output of the segment stage: the trace's sections with their
/// representative frames and high-interaction flags.
struct SectionReport {
  TraceMeta meta;
  SpriteCatalog catalog;
  SectionSet set;
  std::vector<bool> high_interaction;

  std::vector<LevelSection> high_sections() const;
  bool operator==(const SectionReport&) const = default;
};

SectionReport make_section_report(const Trace& trace, SectionSet set);

std::string dump_sections(const SectionReport& report);
SectionReport parse_sections(std::string_view text, const std::string& source = "<sections>");
SectionReport load_sections(const std::filesystem::path& path);
void save_sections(const SectionReport& report, const std::filesystem::path& path);

/// Plain-text table: index, start, end, interaction value, high flag.
std::string section_table(const SectionReport& report);
/// "section,interaction_value" rows for plotting.
std::string interaction_csv(const SectionReport& report);

/// Output of the cluster stage. `members` hold indices into the report's
/// section list (only high-interaction sections are clustered).
struct CategoryReport {
  CategoryParams params;
  SectionCategories categories;

  bool operator==(const CategoryReport&) const = default;
};

CategoryReport categorize_report(const SectionReport& report, const CategoryParams& params);

std::string dump_categories(const CategoryReport& report);
CategoryReport parse_categories(std::string_view text, const std::string& source = "<categories>");
CategoryReport load_categories(const std::filesystem::path& path);
void save_categories(const CategoryReport& report, const std::filesystem::path& path);

}  // namespace levelgen
