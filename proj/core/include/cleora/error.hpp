#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cleora {

/// Broad failure category. The command line tool maps these onto exit codes.
enum class ErrorKind {
  kUsage,     // bad flags or schema
  kData,      // malformed input, I/O failure, hash collision
  kInternal,  // invariant violated inside the engine
};

/// Exception type thrown by every module. `what()` is prefixed with the
/// module tag, e.g. "[ingest] unknown column modifier 'frobnicate'".
class Error : public std::runtime_error {
 public:
  Error(std::string_view module, ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
  ErrorKind kind_;
};

[[noreturn]] void throw_usage(std::string_view module, const std::string& message);
[[noreturn]] void throw_data(std::string_view module, const std::string& message);
[[noreturn]] void throw_internal(std::string_view module, const std::string& message);

}  // namespace cleora
