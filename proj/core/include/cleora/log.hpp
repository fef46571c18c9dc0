#pragma once

#include <ostream>
#include <string_view>

namespace cleora {

enum class LogLevel { kQuiet = 0, kWarning = 1, kInfo = 2 };

// Process-wide sink; defaults to std::cerr at kWarning.
void set_log_level(LogLevel level);
void set_log_stream(std::ostream* stream);

void log_info(std::string_view message);
void log_warning(std::string_view message);

}  // namespace cleora
