#include "lorentz/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lorentz/error.hpp"
#include "lorentz/text.hpp"

namespace lorentz {

CountingPart parse_counting_part(std::string_view s) {
  if (s == "plus") return CountingPart::plus;
  if (s == "minus") return CountingPart::minus;
  if (s == "singular") return CountingPart::singular;
  if (s == "modulus") return CountingPart::modulus;
  throw Error(ErrorKind::parse, "unknown counting part '" + std::string(s) + "'");
}

CountingFunction CountingFunction::from_runs(std::vector<double> values, std::vector<std::uint64_t> multiplicities,
                                             std::string name) {
  if (values.size() != multiplicities.size()) throw Error(ErrorKind::domain, "values/multiplicities length mismatch");
  auto steps = std::make_shared<Steps>();
  steps->values = std::move(values);
  steps->cumulative.reserve(multiplicities.size());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < steps->values.size(); ++i) {
    const double v = steps->values[i];
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::domain, "step value is not finite and non-negative");
    if (i > 0 && !(v < steps->values[i - 1])) throw Error(ErrorKind::domain, "step values not strictly decreasing");
    if (multiplicities[i] == 0) throw Error(ErrorKind::domain, "zero multiplicity");
    acc += multiplicities[i];
    steps->cumulative.push_back(acc);
  }
  CountingFunction f;
  f.kind_ = CountingKind::step;
  f.name_ = std::move(name);
  f.steps_ = std::move(steps);
  return f;
}

CountingFunction CountingFunction::model(std::function<double(double)> fn, std::string name) {
  CountingFunction f;
  f.kind_ = CountingKind::model;
  f.name_ = std::move(name);
  f.fn_ = std::move(fn);
  return f;
}

double CountingFunction::floor() const noexcept {
  if (kind_ == CountingKind::model || steps_->values.empty()) return 0.0;
  return steps_->values.back();
}

double CountingFunction::operator()(double lambda) const {
  if (!(lambda > 0.0)) throw Error(ErrorKind::domain, "counting functions are evaluated at lambda > 0");
  if (kind_ == CountingKind::model) return fn_(lambda);
  if (lambda < floor())
    throw Error(ErrorKind::prefix_exhausted,
                "lambda " + text::format_double(lambda) + " below the prefix floor " + text::format_double(floor()));
  const auto& v = steps_->values;
  // first index with v[i] <= lambda
  const auto it = std::lower_bound(v.begin(), v.end(), lambda, std::greater<>());
  const auto k = static_cast<std::size_t>(it - v.begin());
  return k == 0 ? 0.0 : static_cast<double>(steps_->cumulative[k - 1]);
}

double CountingFunction::left_limit(double lambda) const {
  if (kind_ != CountingKind::step) throw Error(ErrorKind::domain, "left_limit needs step data");
  if (!(lambda > 0.0)) throw Error(ErrorKind::domain, "counting functions are evaluated at lambda > 0");
  if (lambda < floor())
    throw Error(ErrorKind::prefix_exhausted, "lambda below the prefix floor");
  const auto& v = steps_->values;
  // first index with v[i] < lambda
  const auto it = std::upper_bound(v.begin(), v.end(), lambda, std::greater<>());
  const auto k = static_cast<std::size_t>(it - v.begin());
  return k == 0 ? 0.0 : static_cast<double>(steps_->cumulative[k - 1]);
}

std::span<const double> CountingFunction::step_values() const {
  if (kind_ != CountingKind::step) throw Error(ErrorKind::domain, "not step data");
  return steps_->values;
}

std::span<const std::uint64_t> CountingFunction::cumulative() const {
  if (kind_ != CountingKind::step) throw Error(ErrorKind::domain, "not step data");
  return steps_->cumulative;
}

std::uint64_t CountingFunction::total() const {
  const auto c = cumulative();
  return c.empty() ? 0 : c.back();
}

namespace {

CountingFunction runs_of(std::span<const double> sorted, std::string name) {
  std::vector<double> values;
  std::vector<std::uint64_t> mult;
  for (double x : sorted) {
    if (!values.empty() && values.back() == x)
      ++mult.back();
    else {
      values.push_back(x);
      mult.push_back(1);
    }
  }
  return CountingFunction::from_runs(std::move(values), std::move(mult), std::move(name));
}

}  // namespace

CountingFunction counting_from_sequence(const SpectralSequence& s, CountingPart part) {
  switch (s.kind()) {
    case SpectrumKind::singular:
      if (part == CountingPart::singular || part == CountingPart::modulus) return runs_of(s.values(), "nu");
      break;
    case SpectrumKind::eigen_real_signed:
      if (part == CountingPart::plus) return runs_of(s.plus(), "N+");
      if (part == CountingPart::minus) return runs_of(s.minus(), "N-");
      if (part == CountingPart::modulus) {
        const auto m = s.moduli();
        return runs_of(m, "N|.|");
      }
      break;
    case SpectrumKind::eigen_complex:
      if (part == CountingPart::modulus) {
        const auto m = s.moduli();
        return runs_of(m, "N|.|");
      }
      break;
  }
  throw Error(ErrorKind::domain, "counting part incompatible with a " + std::string(to_string(s.kind())) + " sequence");
}

SpectralSequence sequence_from_counting(const CountingFunction& n, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::domain, "empty prefix requested");
  std::vector<double> out;
  out.reserve(m);
  if (n.kind() == CountingKind::step) {
    if (n.total() < m)
      throw Error(ErrorKind::prefix_exceeded,
                  "step data holds " + std::to_string(n.total()) + " entries, " + std::to_string(m) + " requested");
    const auto v = n.step_values();
    const auto c = n.cumulative();
    for (std::size_t i = 0; out.size() < m; ++i)
      while (out.size() < m && out.size() < c[i]) out.push_back(v[i]);
    return SpectralSequence::singular(std::move(out));
  }

  constexpr double tiny = 1e-300;
  if (!(n(tiny) >= static_cast<double>(m)))
    throw Error(ErrorKind::not_divergent, "counting model " + n.name() + " stays below " + std::to_string(m));

  double hi = 1.0;
  while (n(hi) >= 1.0) {
    hi *= 2.0;
    if (hi > 1e300) throw Error(ErrorKind::domain, "counting model " + n.name() + " does not vanish at infinity");
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double target = static_cast<double>(j + 1);
    if (j > 0) {
      hi = out.back();
      if (n(hi) >= target) {  // jump of size > 1 at the previous value
        out.push_back(hi);
        continue;
      }
    }
    double lo = hi;
    do {
      lo *= 0.5;
      if (lo < tiny) throw Error(ErrorKind::not_divergent, "counting model " + n.name() + " is bounded");
    } while (n(lo) < target);
    while (hi / lo - 1.0 > 1e-12) {
      const double mid = std::sqrt(lo * hi);
      if (mid <= lo || mid >= hi) break;
      if (n(mid) >= target)
        lo = mid;
      else
        hi = mid;
    }
    out.push_back(lo);
  }
  return SpectralSequence::singular(std::move(out));
}

std::vector<double> lambda_grid(double lambda_max, double floor, int max_steps) {
  if (!(lambda_max > 0.0)) throw Error(ErrorKind::domain, "lambda_max must be positive");
  std::vector<double> grid;
  double lam = lambda_max;
  for (int k = 0; k <= max_steps && lam >= floor; ++k, lam *= 0.5) grid.push_back(lam);
  return grid;
}

LimitEstimate scaled_counting_limit(const CountingFunction& n, const RegVarFunction& h, const std::vector<double>& grid,
                                    const LimitOptions& opts) {
  if (!(h.index() > 0)) throw Error(ErrorKind::domain, "scale function must have positive index");
  std::vector<std::pair<double, double>> samples;
  samples.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0 && !(grid[k] < grid[k - 1])) throw Error(ErrorKind::domain, "lambda grid must be decreasing");
    const double t = 1.0 / grid[k];
    samples.emplace_back(t, n(grid[k]) / h(t));
  }
  return estimate_limit(samples, opts);
}

bool EquivalenceReport::gaps_shrinking() const {
  auto ok = [](const std::vector<double>& g) {
    if (g.size() < 3) return true;
    const std::size_t m = g.size();
    const double eps = 1e-12;
    return g[m - 1] <= g[m - 2] + eps && g[m - 2] <= g[m - 3] + eps;
  };
  return ok(gap_sup) && ok(gap_inf);
}

EquivalenceReport equivalence_check(const SpectralSequence& s, const RegVarFunction& h, const LimitOptions& opts) {
  const double p = h.index();
  if (!(p > 0)) throw Error(ErrorKind::domain, "scale function must have positive index");
  const auto lam = s.moduli();
  const std::size_t m = lam.size();
  const auto hinv = exact_inverse(h);

  EquivalenceReport rep;
  rep.p = p;
  rep.degenerate = std::all_of(lam.begin(), lam.end(), [](double x) { return x == 0.0; });

  // first[i] / last[i]: extent of the run of equal values containing i.
  std::vector<std::size_t> first(m), last(m);
  for (std::size_t i = 0; i < m; ++i) first[i] = (i > 0 && lam[i] == lam[i - 1]) ? first[i - 1] : i;
  for (std::size_t i = m; i-- > 0;) last[i] = (i + 1 < m && lam[i] == lam[i + 1]) ? last[i + 1] : i;

  std::vector<std::pair<double, double>> ssup, sinf, csup, cinf;
  for (std::size_t k = 1; (std::size_t{1} << k) <= m; ++k) {
    const std::size_t a = std::size_t{1} << (k - 1), b = std::size_t{1} << k;
    double s_hi = -std::numeric_limits<double>::infinity(), s_lo = std::numeric_limits<double>::infinity();
    double c_hi = 0.0, c_lo = std::numeric_limits<double>::infinity();
    for (std::size_t j = a; j < b; ++j) {
      const double v = hinv(static_cast<double>(j + 1)) * lam[j];
      s_hi = std::max(s_hi, v);
      s_lo = std::min(s_lo, v);
      if (lam[j] > 0.0) {
        const double hv = h(1.0 / lam[j]);
        c_hi = std::max(c_hi, static_cast<double>(last[j] + 1) / hv);
        c_lo = std::min(c_lo, static_cast<double>(first[j]) / hv);
      } else {
        c_lo = std::min(c_lo, 0.0);
      }
    }
    if (!std::isfinite(c_lo)) c_lo = 0.0;
    const double n = static_cast<double>(b);
    ssup.emplace_back(n, s_hi);
    sinf.emplace_back(n, s_lo);
    csup.emplace_back(n, c_hi);
    cinf.emplace_back(n, c_lo);
  }
  rep.seq_sup = estimate_limit(ssup, opts);
  rep.seq_inf = estimate_limit(sinf, opts);
  rep.count_sup = estimate_limit(csup, opts);
  rep.count_inf = estimate_limit(cinf, opts);

  const double ip = 1.0 / p;
  for (std::size_t k = 0; k < ssup.size(); ++k) {
    rep.gap_sup.push_back(std::abs(ssup[k].second - std::pow(csup[k].second, ip)));
    rep.gap_inf.push_back(std::abs(sinf[k].second - std::pow(cinf[k].second, ip)));
  }
  // extrapolations of unsettled tails are not trusted; fall back to the last window
  auto best = [](const LimitEstimate& e) { return e.verdict == Verdict::convergent ? e.extrapolated : e.estimate; };
  auto rel = [&](const LimitEstimate& seq, const LimitEstimate& cnt) {
    const double a = best(seq);
    const double b = std::pow(std::max(best(cnt), 0.0), ip);
    const double scale = std::max(std::abs(a), 1e-300);
    return a == b ? 0.0 : std::abs(a - b) / scale;
  };
  rep.rel_gap_sup = rel(rep.seq_sup, rep.count_sup);
  rep.rel_gap_inf = rel(rep.seq_inf, rep.count_inf);
  return rep;
}

}  // namespace lorentz
