#pragma once

// On-disk cache of free-quotient towers, keyed by (p, g, c, format version).
// Entries are validated on load; anything unreadable or inconsistent is
// rebuilt and rewritten.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <tuple>

#include "ssg/consistency.hpp"
#include "ssg/free_quotient.hpp"
#include "ssg/quotient.hpp"
#include "ssg/text_format.hpp"

namespace ssg {

inline constexpr int kTowerFormatVersion = 1;
inline constexpr const char* kCacheEnvVar = "SSG_CACHE_DIR";

// $SSG_CACHE_DIR, else $XDG_CACHE_HOME/ssg, else $HOME/.cache/ssg.
inline std::filesystem::path default_cache_dir() {
  if (const char* d = std::getenv(kCacheEnvVar); d && *d) return d;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::filesystem::path(x) / "ssg";
  if (const char* h = std::getenv("HOME"); h && *h) return std::filesystem::path(h) / ".cache" / "ssg";
  return std::filesystem::temp_directory_path() / "ssg-cache";
}

// True when levels form the tower F_1, ..., F_c of rank g: consistent,
// orders as predicted, each level a truncation of the next.
inline bool valid_tower(const std::vector<PcPresentation>& levels, int p, int g, int c) {
  if (static_cast<int>(levels.size()) != c) return false;
  for (int k = 1; k <= c; ++k) {
    const PcPresentation& F = levels[static_cast<std::size_t>(k - 1)];
    if (F.prime() != p) return false;
    if (static_cast<std::uint64_t>(F.ngens()) != predicted_order_exponent(g, k)) return false;
    if (!F.has_complete_definitions() || F.undefined_generators().size() != static_cast<std::size_t>(g))
      return false;
    if (!verify_consistency(F).empty()) return false;
    if (k < c && !(truncate_to_weight(levels[static_cast<std::size_t>(k)], k) == F)) return false;
  }
  return true;
}

class DiskTowerSource : public TowerSource {
 public:
  explicit DiskTowerSource(std::filesystem::path dir = default_cache_dir()) : dir_(std::move(dir)) {}

  const std::filesystem::path& directory() const { return dir_; }
  // Counters for the last tower() call.
  bool last_hit() const { return last_hit_; }
  bool last_rejected() const { return last_rejected_; }

  std::filesystem::path entry(int p, int g, int c) const {
    return dir_ / ("tower-p" + std::to_string(p) + "-g" + std::to_string(g) + "-c" + std::to_string(c) + "-v" +
                   std::to_string(kTowerFormatVersion) + ".txt");
  }

  FreeQuotientTower tower(int p, int g, int c) override {
    std::lock_guard<std::mutex> lock(mu_);
    last_hit_ = last_rejected_ = false;
    if (auto it = loaded_.find({p, g, c}); it != loaded_.end()) return it->second;
    if (predicted_order_exponent(g, c) > static_cast<std::uint64_t>(ceiling_)) return build_tower(p, g, c, ceiling_);
    const auto path = entry(p, g, c);
    std::error_code ec;
    if (std::filesystem::exists(path, ec)) {
      try {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        auto levels = parse_tower(ss.str());
        if (valid_tower(levels, p, g, c)) {
          last_hit_ = true;
          return loaded_.emplace(std::make_tuple(p, g, c), FreeQuotientTower(p, g, std::move(levels))).first->second;
        }
      } catch (const Error&) {
      }
      last_rejected_ = true;
    }
    memory_.set_ceiling(ceiling_);
    FreeQuotientTower t = memory_.tower(p, g, c);
    store(path, render_tower(t.levels()));
    loaded_.emplace(std::make_tuple(p, g, c), t);
    return t;
  }

 private:
  void store(const std::filesystem::path& path, const std::string& text) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) return;
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) return;
      out << text;
      if (!out) return;
    }
    std::filesystem::rename(tmp, path, ec);
  }

  std::filesystem::path dir_;
  MemoryTowerSource memory_;
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, FreeQuotientTower> loaded_;
  bool last_hit_ = false;
  bool last_rejected_ = false;
};

}  // namespace ssg
