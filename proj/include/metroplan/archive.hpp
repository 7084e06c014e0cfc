#ifndef METROPLAN_ARCHIVE_HPP
#define METROPLAN_ARCHIVE_HPP

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "metroplan/common.hpp"

namespace metroplan {

/// Result archives are JSON objects with sorted keys and shortest round-trip
/// number formatting, so identical plans serialize byte-identically.
inline void write_archive(const std::string& path, const nlohmann::json& j) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write archive: " + path);
  out << j.dump(1) << "\n";
  if (!out) throw IoError("short write on archive: " + path);
}

inline nlohmann::json read_archive(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing result archive: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IoError("corrupt archive " + path + ": " + e.what());
  }
  return j;
}

}  // namespace metroplan

#endif  // METROPLAN_ARCHIVE_HPP
