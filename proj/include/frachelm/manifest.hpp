#pragma once

#include <string>
#include <utility>
#include <vector>

namespace frachelm {

inline constexpr const char* kVersion = "0.1.0";

/// Record of one CLI run, written as `key = value` text.
struct RunManifest {
  std::string subcommand;
  std::string config_digest;
  std::string version = kVersion;
  std::string started;
  std::string finished;
  std::vector<std::pair<std::string, std::string>> stages;   // name, status
  std::vector<std::pair<std::string, std::string>> outputs;  // path, digest

  void stage(const std::string& name, const std::string& status) { stages.emplace_back(name, status); }
  /// Records `path` with its file digest.
  void output(const std::string& path);
  std::string to_text() const;
  /// Atomic write (temporary file plus rename).
  void write(const std::string& path) const;
};

/// UTC time as 2026-01-31T12:00:00Z.
std::string utc_timestamp();

}  // namespace frachelm
