#include "cleora/error.hpp"

namespace cleora {

Error::Error(std::string_view module, ErrorKind kind, const std::string& message)
    : std::runtime_error("[" + std::string(module) + "] " + message),
      module_(module),
      kind_(kind) {}

void throw_usage(std::string_view module, const std::string& message) {
  throw Error(module, ErrorKind::kUsage, message);
}

void throw_data(std::string_view module, const std::string& message) {
  throw Error(module, ErrorKind::kData, message);
}

void throw_internal(std::string_view module, const std::string& message) {
  throw Error(module, ErrorKind::kInternal, message);
}

}  // namespace cleora
