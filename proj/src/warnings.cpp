#include "frachelm/warnings.hpp"

#include <iostream>
#include <mutex>
#include <set>

namespace frachelm {

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& current_sink() {
  static WarningSink sink;
  return sink;
}

}  // namespace

void warn(const std::string& message) {
  std::lock_guard lock(sink_mutex());
  if (current_sink()) {
    current_sink()(message);
    return;
  }
  static std::set<std::string> seen;
  if (seen.insert(message).second) std::cerr << "warning: " << message << '\n';
}

void set_warning_sink(WarningSink sink) {
  std::lock_guard lock(sink_mutex());
  current_sink() = std::move(sink);
}

}  // namespace frachelm
