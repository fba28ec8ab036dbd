#pragma once

// Command-line front end. Exit codes: 0 ok, 1 usage, 2 data, 3 invariant.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mixsem/report.hpp"

namespace mixsem::cli {

inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInvariant = 3;

/// Flat key=value settings (a config file, then --set overrides).
struct Config {
  std::size_t basis_size = 2000;
  std::size_t window = 5;
  std::string stoplist;  // path; the built-in list when empty
  double tau = 0.8;
  std::size_t min_cluster_size = 5;
  std::size_t min_clusters = 1;
  std::size_t min_occurrences = 1;
  std::size_t top_k = 100;
  unsigned threads = 0;  // 0: all cores
  std::string mode = "density";

  /// Throws ParseError for unknown keys and non-positive or malformed values.
  void set(const std::string& key, const std::string& value);
  void set(const std::string& assignment);  // "key=value"
  void load(const std::filesystem::path& path);

  unsigned worker_threads() const;
  wsi::SpaceConfig space_config() const;
  wsi::ClusterConfig cluster_config() const;
  report::Config report_config() const;
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mixsem::cli
