#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "levelgen/trace.hpp"

namespace testing {

using namespace levelgen;

// Rows of characters; '.' is empty, every other character maps to a type.
inline Frame frame_from_rows(const std::vector<std::string>& rows, const std::map<char, TypeId>& legend,
                             int index = 0) {
  std::vector<SpriteInstance> out;
  const int height = static_cast<int>(rows.size());
  const int width = height == 0 ? 0 : static_cast<int>(rows.front().size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const char c = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
      if (c != '.') out.push_back({legend.at(c), x, y});
    }
  }
  return Frame(index, width, height, std::move(out));
}

inline Frame make_frame(int width, int height, std::vector<SpriteInstance> instances, int index = 0) {
  return Frame(index, width, height, std::move(instances));
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) {
    path = std::filesystem::temp_directory_path() / ("levelgen_test_" + name);
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

}  // namespace testing
