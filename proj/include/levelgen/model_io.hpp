#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "levelgen/model.hpp"

namespace levelgen {

inline constexpr int kModelSchemaVersion = 1;

std::string dump_model(const StyleModel& model);
StyleModel parse_model(std::string_view text, const std::string& source = "<model>");

StyleModel load_model(const std::filesystem::path& path);
void save_model(const StyleModel& model, const std::filesystem::path& path);

}  // namespace levelgen
