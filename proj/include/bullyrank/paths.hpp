#pragma once

#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace bullyrank {

// Bundled data files (lexicons, stop list, templates) are resolved in order:
// explicit argument > BULLYRANK_DATA env var > compiled-in source data dir.
inline std::string resolve_data_dir(const std::string& explicit_dir = "") {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("BULLYRANK_DATA")) return env;
#ifdef BULLYRANK_DEFAULT_DATA_DIR
  return BULLYRANK_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

inline std::string data_file(const std::string& dir, const std::string& name) {
  auto p = std::filesystem::path(dir) / name;
  if (!std::filesystem::exists(p))
    throw std::runtime_error("missing data file: " + p.string());
  return p.string();
}

}  // namespace bullyrank
