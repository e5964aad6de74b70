#include "frachelm/manifest.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

#include "frachelm/field_io.hpp"

namespace frachelm {

void RunManifest::output(const std::string& path) { outputs.emplace_back(path, hex_digest(file_digest(path))); }

std::string RunManifest::to_text() const {
  std::ostringstream out;
  out << "subcommand = " << subcommand << '\n'
      << "version = " << version << '\n'
      << "config_digest = " << config_digest << '\n'
      << "started = " << started << '\n'
      << "finished = " << finished << '\n';
  for (const auto& [name, status] : stages) out << "stage." << name << " = " << status << '\n';
  for (const auto& [path, digest] : outputs) out << "output." << path << " = " << digest << '\n';
  return out.str();
}

void RunManifest::write(const std::string& path) const { write_text_atomic(path, to_text()); }

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace frachelm
