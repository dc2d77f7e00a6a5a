#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gumorph/script.hpp"

namespace test {

inline gumorph::Units U(std::string_view s) { return gumorph::to_units(s); }

inline std::string data_path(const std::string& name) { return std::string(GUMORPH_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Fresh scratch directory per test case.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gumorph_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace test
