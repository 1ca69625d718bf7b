#pragma once

#include <stdexcept>
#include <string>

namespace herglotz {

// Library-wide error type. `code` is a stable, machine-parsable identifier of
// the form "<module>.<condition>" (e.g. "symexpr.syntax",
// "elderive.nonconstant_gamma"); `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace herglotz
