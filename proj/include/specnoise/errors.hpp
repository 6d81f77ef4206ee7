#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace specnoise {

// All library errors carry a stable code string; the CLI surfaces it
// verbatim in machine-readable JSON error output.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, std::string context = {})
      : std::runtime_error(message),
        code_(std::move(code)),
        context_(std::move(context)) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& context() const noexcept { return context_; }

 private:
  std::string code_;
  std::string context_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message,
                              std::string context = {}) {
  throw Error(std::move(code), message, std::move(context));
}

}  // namespace specnoise
