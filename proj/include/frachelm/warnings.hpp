#pragma once

#include <functional>
#include <string>

namespace frachelm {

using WarningSink = std::function<void(const std::string&)>;

/// Reports a non-fatal numerical concern. The default sink prints each
/// distinct message to stderr once per process.
void warn(const std::string& message);
/// Replaces the sink; an empty function restores the default.
void set_warning_sink(WarningSink sink);

}  // namespace frachelm
