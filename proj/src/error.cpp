#include "lorentz/error.hpp"

namespace lorentz {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "DomainError";
    case ErrorKind::non_integrable: return "NonIntegrable";
    case ErrorKind::not_invertible: return "NotInvertible";
    case ErrorKind::window_too_large: return "WindowTooLarge";
    case ErrorKind::prefix_exceeded: return "PrefixExceeded";
    case ErrorKind::prefix_exhausted: return "PrefixExhausted";
    case ErrorKind::not_divergent: return "NotDivergent";
    case ErrorKind::too_few_samples: return "TooFewSamples";
    case ErrorKind::not_asymptotically_equal: return "NotAsymptoticallyEqual";
    case ErrorKind::parse: return "ParseError";
    case ErrorKind::not_ascending: return "NotAscending";
    case ErrorKind::empty_input: return "EmptyInput";
    case ErrorKind::overflow: return "Overflow";
    case ErrorKind::no_convergence: return "NoConvergence";
    case ErrorKind::io: return "IOError";
  }
  return "Error";
}

}  // namespace lorentz
