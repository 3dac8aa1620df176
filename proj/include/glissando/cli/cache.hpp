#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "glissando/charpoly.hpp"
#include "glissando/field.hpp"

namespace glissando::cli {

inline constexpr const char* kCacheVersion = "glissando-cache-1";
inline constexpr const char* kCacheEnvVar = "GLISSANDO_CACHE_DIR";

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a64(const std::string& data);

/// $GLISSANDO_CACHE_DIR, else $XDG_DATA_HOME/glissando, else
/// ~/.local/share/glissando; empty if none can be determined.
std::filesystem::path default_cache_dir();

/// Directory of plain-JSON char-series entries keyed by (p, q, k, mode, precision).
/// Writes go to a temporary file that is renamed into place.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path entry_path(const Params& params, int k, std::size_t precision) const;

  /// A valid entry, or nothing when absent, unreadable, stale or corrupt.
  std::optional<CharSeries> load(const Params& params, int k, std::size_t precision) const;
  void store(const Params& params, int k, std::size_t precision, const CharSeries& s) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace glissando::cli
