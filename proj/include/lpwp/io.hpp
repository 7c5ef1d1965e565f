#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lpwp/error.hpp"

namespace lpwp {

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file '" + path.string() + "'");
  out << content;
}

}  // namespace lpwp
