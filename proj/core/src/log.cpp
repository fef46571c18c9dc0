#include "cleora/log.hpp"

#include <iostream>
#include <mutex>

namespace cleora {
namespace {

std::mutex g_mutex;
LogLevel g_level = LogLevel::kWarning;
std::ostream* g_stream = &std::cerr;

void emit(LogLevel level, std::string_view tag, std::string_view message) {
  std::lock_guard lock(g_mutex);
  if (g_stream == nullptr || static_cast<int>(level) > static_cast<int>(g_level)) return;
  *g_stream << tag << message << '\n';
}

}  // namespace

void set_log_level(LogLevel level) {
  std::lock_guard lock(g_mutex);
  g_level = level;
}

void set_log_stream(std::ostream* stream) {
  std::lock_guard lock(g_mutex);
  g_stream = stream;
}

void log_info(std::string_view message) { emit(LogLevel::kInfo, "info: ", message); }

void log_warning(std::string_view message) { emit(LogLevel::kWarning, "warning: ", message); }

}  // namespace cleora
