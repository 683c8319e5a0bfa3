#pragma once

// Finite-data estimation of a limit from samples along a dyadic grid.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lorentz {

enum class Verdict { convergent, divergent, inconclusive };
std::string_view to_string(Verdict v) noexcept;

/// Expected approach rate. Sets the default tolerance and whether the tail is
/// extrapolated in x = log N.
enum class RateHint { power, log, log2 };
std::string_view to_string(RateHint r) noexcept;
RateHint parse_rate_hint(std::string_view s);
double default_tolerance(RateHint r) noexcept;

/// One window. `lo`/`hi` bound the statistic over the whole window (equal to
/// `value` for point samples).
struct Sample {
  double n = 0.0;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  static Sample point(double n, double v) { return {n, v, v, v}; }
};

struct LimitOptions {
  RateHint rate = RateHint::log;
  std::optional<double> tolerance;  // default_tolerance(rate) when empty
  std::size_t trailing = 4;          // W

  double tol() const noexcept { return tolerance.value_or(default_tolerance(rate)); }
};

struct LimitEstimate {
  std::vector<std::pair<double, double>> windows;  // (N_k, value_k)
  std::vector<double> deltas;                      // |value_k - value_{k-1}|
  double estimate = 0.0;                           // value on the largest window
  double band_lo = 0.0, band_hi = 0.0;             // over the last W windows
  /// Tail extrapolated from the last three windows: a geometric (Aitken) sum
  /// when the deltas shrink by at least 3/4 per window, else the log model for
  /// non-power rates; `estimate` when the tail is not monotone.
  double extrapolated = 0.0;
  double tail_error = 0.0;  // |extrapolated - estimate|
  Verdict verdict = Verdict::inconclusive;
  double tolerance = 0.0;

  double band_width() const noexcept { return band_hi - band_lo; }
};

/// Samples sorted by N; at least max(W, 3) of them.
///
/// convergent:   the last three deltas are non-increasing, the final delta,
///               the final window's own spread and the tail error are all
///               within tolerance;
/// divergent:    otherwise, when the spread over the last W windows exceeds
///               tolerance and is at least 80% of the spread over the W windows
///               before them (fewer samples: last triple against first triple);
/// inconclusive: everything else.
LimitEstimate estimate_limit(const std::vector<Sample>& samples, const LimitOptions& opts = {});
LimitEstimate estimate_limit(const std::vector<std::pair<double, double>>& samples, const LimitOptions& opts = {});

/// Three-point extrapolation in x = log N with the model a + b/x + c log(x)/x,
/// or a + b/x + c/x^2 for the log2 rate.
std::optional<double> extrapolate_log(const std::vector<std::pair<double, double>>& last3,
                                      RateHint rate = RateHint::log);

/// N_k = 2^k for k_min <= k, N_k <= max_n.
std::vector<std::size_t> dyadic_grid(std::size_t max_n, int k_min = 1);

}  // namespace lorentz
