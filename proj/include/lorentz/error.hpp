#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lorentz {

enum class ErrorKind {
  domain,
  non_integrable,
  not_invertible,
  window_too_large,
  prefix_exceeded,
  prefix_exhausted,
  not_divergent,
  too_few_samples,
  not_asymptotically_equal,
  parse,
  not_ascending,
  empty_input,
  overflow,
  no_convergence,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so that
/// callers (and the CLI exit-code logic) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lorentz
