#include "glissando/cli/cache.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "glissando/cli/serialize.hpp"

namespace glissando::cli {

namespace fs = std::filesystem;

std::string fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

fs::path default_cache_dir() {
  if (const char* d = std::getenv(kCacheEnvVar); d && *d) return d;
  if (const char* d = std::getenv("XDG_DATA_HOME"); d && *d) return fs::path(d) / "glissando";
  if (const char* h = std::getenv("HOME"); h && *h)
    return fs::path(h) / ".local" / "share" / "glissando";
  return {};
}

ResultCache::ResultCache(fs::path dir) : dir_(std::move(dir)) {}

namespace {

std::string mode_name(std::size_t precision) {
  return precision == kExact ? "exact" : "truncated";
}

json key_json(const Params& params, int k, std::size_t precision) {
  return {{"p", params.p},
          {"q", params.q},
          {"k", k},
          {"mode", mode_name(precision)},
          {"precision", precision == kExact ? json(nullptr) : json(precision)}};
}

}  // namespace

fs::path ResultCache::entry_path(const Params& params, int k, std::size_t precision) const {
  std::ostringstream name;
  name << "u-p" << params.p << "-q" << params.q << "-k" << k << '-'
       << (precision == kExact ? std::string("exact") : "t" + std::to_string(precision))
       << ".json";
  return dir_ / name.str();
}

std::optional<CharSeries> ResultCache::load(const Params& params, int k,
                                            std::size_t precision) const {
  std::ifstream in(entry_path(params, k, precision));
  if (!in) return std::nullopt;
  try {
    const json entry = json::parse(in);
    if (entry.at("version") != kCacheVersion) return std::nullopt;
    if (entry.at("key") != key_json(params, k, precision)) return std::nullopt;
    const json& payload = entry.at("payload");
    if (entry.at("checksum") != fnv1a64(payload.dump())) return std::nullopt;
    return series_from_json(payload);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void ResultCache::store(const Params& params, int k, std::size_t precision,
                        const CharSeries& s) const {
  static std::atomic<unsigned> counter{0};
  fs::create_directories(dir_);
  const json payload = to_json(s, params, k);
  const json entry = {{"version", kCacheVersion},
                      {"key", key_json(params, k, precision)},
                      {"checksum", fnv1a64(payload.dump())},
                      {"payload", payload}};
  const fs::path final_path = entry_path(params, k, precision);
  std::ostringstream tmp_name;
  tmp_name << final_path.filename().string() << ".tmp-"
           << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '-' << counter++;
  const fs::path tmp = dir_ / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << entry.dump() << '\n';
    if (!out) throw std::runtime_error("cannot write cache entry " + tmp.string());
  }
  fs::rename(tmp, final_path);
}

}  // namespace glissando::cli
