#include "qmonoidal/cache.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace qmon {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::InvalidInput, "SHA-256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

std::string JsonCache::key(const std::string& kind, const Mat& f, int level) {
  std::string s = std::string(kCacheVersion) + '\n' + kind + '\n' + std::to_string(level) + '\n' +
                  std::to_string(f.rows()) + '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < f.rows(); ++i)
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%a %a\n", f(i, j).real(), f(i, j).imag());
      s += buf;
    }
  return kind + "-" + sha256_hex(s);
}

std::string JsonCache::path(const std::string& key) const { return dir_ + "/" + key + ".json"; }

std::optional<json> JsonCache::get(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(path(key));
  if (!in) return std::nullopt;
  try {
    json j;
    in >> j;
    if (j.value("version", "") != kCacheVersion || !j.contains("payload")) return std::nullopt;
    return j["payload"];
  } catch (const json::exception&) {
    return std::nullopt;  // unreadable file counts as a miss
  }
}

void JsonCache::put(const std::string& key, const json& value) const {
  if (!enabled()) return;
  std::filesystem::create_directories(dir_);
  // write-then-rename so a concurrent reader never sees half a file
  const std::string final_path = path(key);
  const std::string tmp = final_path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write cache file " + tmp);
    out << json{{"version", kCacheVersion}, {"payload", value}}.dump() << '\n';
  }
  std::filesystem::rename(tmp, final_path);
}

std::string cache_dir_from_env(const std::string& fallback) {
  const char* env = std::getenv("QMONOIDAL_CACHE");
  return env != nullptr && *env != '\0' ? std::string(env) : fallback;
}

}  // namespace qmon
