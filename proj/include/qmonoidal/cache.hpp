#pragma once

#include "qmonoidal/json_io.hpp"

#include <optional>
#include <string>

namespace qmon {

/// Bumped whenever cached payloads change meaning; old files are then ignored.
inline constexpr const char* kCacheVersion = "qmonoidal-cache-1";

std::string sha256_hex(const std::string& data);

/// One JSON file per object under `dir`. An empty dir disables the cache.
class JsonCache {
 public:
  explicit JsonCache(std::string dir) : dir_(std::move(dir)) {}

  /// Key from the exact entries of F, the level, the kind of object and the
  /// cache version.
  static std::string key(const std::string& kind, const Mat& f, int level);

  bool enabled() const { return !dir_.empty(); }
  std::optional<json> get(const std::string& key) const;
  void put(const std::string& key, const json& value) const;
  std::string path(const std::string& key) const;

 private:
  std::string dir_;
};

/// QMONOIDAL_CACHE when set, else `fallback`.
std::string cache_dir_from_env(const std::string& fallback);

}  // namespace qmon
