#include "lorentz/limit.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lorentz/error.hpp"

namespace lorentz {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::convergent: return "convergent";
    case Verdict::divergent: return "divergent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(RateHint r) noexcept {
  switch (r) {
    case RateHint::power: return "power";
    case RateHint::log: return "log";
    case RateHint::log2: return "log2";
  }
  return "?";
}

RateHint parse_rate_hint(std::string_view s) {
  if (s == "power") return RateHint::power;
  if (s == "log") return RateHint::log;
  if (s == "log2") return RateHint::log2;
  throw Error(ErrorKind::parse, "unknown rate hint '" + std::string(s) + "' (expected power, log or log2)");
}

double default_tolerance(RateHint r) noexcept {
  switch (r) {
    case RateHint::power: return 1e-3;
    case RateHint::log: return 5e-2;
    case RateHint::log2: return 1e-1;
  }
  return 5e-2;
}

std::optional<double> extrapolate_log(const std::vector<std::pair<double, double>>& last3, RateHint rate) {
  if (last3.size() != 3) return std::nullopt;
  std::array<std::array<double, 4>, 3> m{};
  for (int i = 0; i < 3; ++i) {
    const double n = last3[i].first;
    if (!(n > 2.0)) return std::nullopt;
    const double x = std::log(n);
    m[i] = {1.0, 1.0 / x, rate == RateHint::log2 ? 1.0 / (x * x) : std::log(x) / x, last3[i].second};
  }
  // Gaussian elimination with partial pivoting on the 3x4 system.
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    std::swap(m[c], m[piv]);
    if (m[c][c] == 0.0) return std::nullopt;
    for (int r = c + 1; r < 3; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
    }
  }
  std::array<double, 3> sol{};
  for (int r = 2; r >= 0; --r) {
    double acc = m[r][3];
    for (int k = r + 1; k < 3; ++k) acc -= m[r][k] * sol[k];
    sol[r] = acc / m[r][r];
  }
  if (!std::isfinite(sol[0])) return std::nullopt;
  return sol[0];
}

LimitEstimate estimate_limit(const std::vector<Sample>& samples, const LimitOptions& opts) {
  const std::size_t w = std::max<std::size_t>(opts.trailing, 3);
  if (samples.size() < w)
    throw Error(ErrorKind::too_few_samples,
                std::to_string(samples.size()) + " windows, need at least " + std::to_string(w));
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].n > samples[i - 1].n)) throw Error(ErrorKind::domain, "samples not sorted by N");

  LimitEstimate est;
  est.tolerance = opts.tol();
  const std::size_t m = samples.size();
  for (const auto& s : samples) est.windows.emplace_back(s.n, s.value);
  for (std::size_t i = 1; i < m; ++i) est.deltas.push_back(std::abs(samples[i].value - samples[i - 1].value));
  est.estimate = samples.back().value;
  est.band_lo = est.band_hi = est.estimate;
  for (std::size_t i = m - w; i < m; ++i) {
    est.band_lo = std::min({est.band_lo, samples[i].lo, samples[i].value});
    est.band_hi = std::max({est.band_hi, samples[i].hi, samples[i].value});
  }

  const auto& a = samples[m - 3];
  const auto& b = samples[m - 2];
  const auto& c = samples[m - 1];
  est.extrapolated = est.estimate;
  const bool monotone_tail = (a.value <= b.value && b.value <= c.value) || (a.value >= b.value && b.value >= c.value);
  // Deltas shrinking by a fixed factor per window mean a power-rate approach
  // whatever the hint says; the log model would overshoot, so the geometric
  // tail is summed instead (Aitken).
  const std::size_t nd = est.deltas.size();
  const bool geometric = monotone_tail && nd >= 3 && est.deltas[nd - 2] > 0.0 &&
                         est.deltas[nd - 1] <= 0.75 * est.deltas[nd - 2] &&
                         est.deltas[nd - 2] <= 0.75 * est.deltas[nd - 3];
  if (geometric) {
    const double r = (c.value - b.value) / (b.value - a.value);
    est.extrapolated = c.value + (c.value - b.value) * r / (1.0 - r);
  } else if (opts.rate != RateHint::power && monotone_tail) {
    if (auto x = extrapolate_log({{a.n, a.value}, {b.n, b.value}, {c.n, c.value}}, opts.rate)) est.extrapolated = *x;
  }
  est.tail_error = std::abs(est.extrapolated - est.estimate);

  const double tol = est.tolerance;
  // Wiggles far below the tolerance (interpolated g, rounding) are not
  // allowed to decide whether the deltas settle.
  const double floor = std::max(1e-10 * std::max(1.0, std::abs(est.estimate)), 1e-3 * tol);
  const std::size_t d = est.deltas.size();
  const bool deltas_settle = d < 3 || (est.deltas[d - 1] <= est.deltas[d - 2] + floor &&
                                       est.deltas[d - 2] <= est.deltas[d - 3] + floor);
  const bool small = est.deltas.back() <= tol && (c.hi - c.lo) <= tol && est.tail_error <= tol;

  // Spread of samples [from, to): block ranges included.
  auto spread = [&](std::size_t from, std::size_t to) {
    double lo = samples[from].lo, hi = samples[from].hi;
    for (std::size_t i = from; i < to; ++i) {
      lo = std::min({lo, samples[i].lo, samples[i].value});
      hi = std::max({hi, samples[i].hi, samples[i].value});
    }
    return hi - lo;
  };
  // Compare the last W windows against the W before them when there are
  // enough; otherwise the first and last window triples of the trailing W.
  double first, last;
  if (m >= 2 * w) {
    first = spread(m - 2 * w, m - w);
    last = spread(m - w, m);
  } else {
    first = spread(m - w, m - w + 3);
    last = spread(m - 3, m);
  }

  if (deltas_settle && small)
    est.verdict = Verdict::convergent;
  else if (last > tol && last >= 0.8 * first)
    est.verdict = Verdict::divergent;
  else
    est.verdict = Verdict::inconclusive;
  return est;
}

LimitEstimate estimate_limit(const std::vector<std::pair<double, double>>& samples, const LimitOptions& opts) {
  std::vector<Sample> s;
  s.reserve(samples.size());
  for (const auto& [n, v] : samples) s.push_back(Sample::point(n, v));
  return estimate_limit(s, opts);
}

std::vector<std::size_t> dyadic_grid(std::size_t max_n, int k_min) {
  std::vector<std::size_t> out;
  for (int k = std::max(k_min, 0); k < 63; ++k) {
    const std::size_t n = std::size_t{1} << k;
    if (n > max_n) break;
    out.push_back(n);
  }
  return out;
}

}  // namespace lorentz
