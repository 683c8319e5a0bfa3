#include "lorentz/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lorentz/error.hpp"

namespace lorentz {

namespace {

std::vector<double> real_stream(const SpectralSequence& s) {
  if (s.kind() != SpectrumKind::eigen_complex) return s.merged();
  std::vector<double> out;
  for (auto z : s.complex_values()) out.push_back(z.real());
  return out;
}

std::vector<double> prefix_sums(const std::vector<double>& v, std::size_t upto) {
  std::vector<double> out(upto + 1, 0.0);
  for (std::size_t i = 0; i < upto; ++i) out[i + 1] = out[i] + (i < v.size() ? v[i] : 0.0);
  return out;
}

}  // namespace

std::vector<double> tau_values(const SpectralSequence& s, const KaramataPrimitive& G, const std::vector<std::size_t>& ns) {
  if (ns.empty()) return {};
  const std::size_t top = *std::max_element(ns.begin(), ns.end());
  if (top > s.size())
    throw Error(ErrorKind::prefix_exceeded,
                "grid reaches N=" + std::to_string(top) + " beyond the prefix length " + std::to_string(s.size()));
  const auto sums = prefix_sums(real_stream(s), top);
  const auto prim = G.at_integers(top);
  std::vector<double> out;
  out.reserve(ns.size());
  for (auto n : ns) out.push_back(n == 0 ? 0.0 : sums[n] / prim[n]);
  return out;
}

LimitEstimate tau_functional(const SpectralSequence& s, const KaramataPrimitive& G, const LimitOptions& opts,
                             std::optional<std::size_t> grid_max) {
  const auto grid = dyadic_grid(grid_max.value_or(s.determined_prefix()), 1);
  const auto tau = tau_values(s, G, grid);
  std::vector<std::pair<double, double>> samples;
  for (std::size_t k = 0; k < grid.size(); ++k) samples.emplace_back(static_cast<double>(grid[k]), tau[k]);
  return estimate_limit(samples, opts);
}

std::vector<Sample> weyl_samples(std::span<const double> part, const RegVarFunction& g, std::size_t grid_max) {
  std::vector<Sample> out;
  for (std::size_t k = 1; (std::size_t{1} << k) <= grid_max; ++k) {
    const std::size_t a = std::size_t{1} << (k - 1), b = std::size_t{1} << k;
    Sample smp;
    smp.n = static_cast<double>(b);
    smp.lo = std::numeric_limits<double>::infinity();
    smp.hi = -std::numeric_limits<double>::infinity();
    for (std::size_t j = a; j < b; ++j) {
      const double v = j < part.size() ? part[j] / g(static_cast<double>(j)) : 0.0;
      smp.lo = std::min(smp.lo, v);
      smp.hi = std::max(smp.hi, v);
      if (j == b - 1) smp.value = v;
    }
    out.push_back(smp);
  }
  return out;
}

WeylDetection weyl_detector(const SpectralSequence& s, const RegVarFunction& g, const LimitOptions& opts) {
  if (s.kind() == SpectrumKind::eigen_real_signed) {
    const std::size_t top = std::max(s.plus().size(), s.minus().size());
    return {estimate_limit(weyl_samples(s.plus(), g, top), opts), estimate_limit(weyl_samples(s.minus(), g, top), opts)};
  }
  const auto mod = s.moduli();
  return {estimate_limit(weyl_samples(mod, g, mod.size()), opts), std::nullopt};
}

MeasurabilityReport analyze(const SpectralSequence& s, const RegVarFunction& g, const LimitOptions& opts) {
  MeasurabilityReport rep;
  const KaramataPrimitive G(g);
  rep.tau = tau_functional(s, G, opts);
  if (rep.tau.verdict == Verdict::convergent) rep.nc_integral = rep.tau.extrapolated;
  if (s.kind() != SpectrumKind::eigen_complex) {
    auto w = weyl_detector(s, g, opts);
    rep.lambda_plus = std::move(w.plus);
    rep.lambda_minus = std::move(w.minus);
    rep.spectrally_measurable = rep.lambda_plus->verdict == Verdict::convergent &&
                                (!rep.lambda_minus || rep.lambda_minus->verdict == Verdict::convergent);
  }
  rep.commutator_flag = commutator_diagnostic(s, g).bounded;
  return rep;
}

std::vector<std::pair<double, double>> additivity_residual_curve(const SpectralSequence& s1,
                                                                 const SpectralSequence& s2,
                                                                 const SpectralSequence& s12,
                                                                 const KaramataPrimitive& G) {
  const std::size_t top = std::max({s1.size(), s2.size(), s12.size()});
  const auto a = prefix_sums(real_stream(s1), top);
  const auto b = prefix_sums(real_stream(s2), top);
  const auto c = prefix_sums(real_stream(s12), top);
  const auto prim = G.at_integers(top);
  std::vector<std::pair<double, double>> out;
  for (auto n : dyadic_grid(top, 1)) out.emplace_back(static_cast<double>(n), (c[n] - a[n] - b[n]) / prim[n]);
  return out;
}

LimitEstimate additivity_residual(const SpectralSequence& s1, const SpectralSequence& s2, const SpectralSequence& s12,
                                  const KaramataPrimitive& G, const LimitOptions& opts) {
  return estimate_limit(additivity_residual_curve(s1, s2, s12, G), opts);
}

CommutatorReport commutator_diagnostic(const SpectralSequence& s, const RegVarFunction& g) {
  CommutatorReport rep;
  const auto v = real_stream(s);
  const auto sums = prefix_sums(v, v.size());
  double run = 0.0;
  for (auto n : dyadic_grid(v.size(), 1)) {
    const double stat = std::abs(sums[n]) / (static_cast<double>(n) * g(static_cast<double>(n)));
    rep.statistic.emplace_back(static_cast<double>(n), stat);
    run = std::max(run, stat);
    rep.running_max.push_back(run);
  }
  const std::size_t m = rep.statistic.size();
  const bool all_zero = std::all_of(rep.statistic.begin(), rep.statistic.end(), [](auto& p) { return p.second == 0.0; });
  if (all_zero) {
    rep.bounded = true;
  } else if (m >= 3) {
    // an unbounded statistic sets a new record at every step; bounded noise
    // only occasionally does
    const auto& r = rep.running_max;
    rep.bounded = r[m - 1] <= 1.05 * r[m - 2] || r[m - 2] <= 1.05 * r[m - 3];
  }
  return rep;
}

bool PerturbationReport::holds(double slack) const {
  return std::all_of(margins.begin(), margins.end(), [slack](const auto& m) { return m.ok(slack); });
}

PerturbationReport perturbation_bound_check(const SpectralSequence& s, const SpectralSequence& t,
                                            const SpectralSequence& diff_singular, const RegVarFunction& g,
                                            std::size_t tail_window) {
  if (s.kind() != SpectrumKind::eigen_real_signed || t.kind() != SpectrumKind::eigen_real_signed)
    throw Error(ErrorKind::domain, "perturbation check expects signed eigenvalue sequences");
  PerturbationReport rep;
  rep.r = 1.0 / (std::abs(g.index()) + 1.0);
  const double dist = quotient_norm(singular_of(diff_singular), g, std::min(tail_window, diff_singular.size())).tail;
  const double rhs = std::pow(dist, rep.r);

  auto tail_range = [&](std::span<const double> part, std::size_t len) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t j = len - tail_window; j < len; ++j) {
      const double v = (j < part.size() ? part[j] : 0.0) / g(static_cast<double>(j));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return std::pair{lo, hi};
  };
  auto channel = [&](std::span<const double> ps, std::span<const double> pt, const char* sign) {
    const std::size_t len = std::max(ps.size(), pt.size());
    if (tail_window == 0 || tail_window > len)
      throw Error(ErrorKind::window_too_large, "tail window exceeds the " + std::string(sign) + " part");
    const auto [slo, shi] = tail_range(ps, len);
    const auto [tlo, thi] = tail_range(pt, len);
    rep.margins.push_back({std::string("upper") + sign, std::abs(std::pow(thi, rep.r) - std::pow(shi, rep.r)), rhs});
    rep.margins.push_back({std::string("lower") + sign, std::abs(std::pow(tlo, rep.r) - std::pow(slo, rep.r)), rhs});
  };
  channel(s.plus(), t.plus(), "+");
  channel(s.minus(), t.minus(), "-");
  return rep;
}

IndependenceReport g_independence_check(const SpectralSequence& s, const RegVarFunction& g1, const RegVarFunction& g2,
                                        const LimitOptions& opts) {
  IndependenceReport rep;
  auto dev = [&](int k) {
    const double t = std::ldexp(1.0, k);
    return std::abs(g1(t) / g2(t) - 1.0);
  };
  rep.ratio_deviation = dev(40);
  if (!(rep.ratio_deviation <= 2e-2) || !(rep.ratio_deviation <= dev(20) + 1e-12))
    throw Error(ErrorKind::not_asymptotically_equal,
                g1.name() + " / " + g2.name() + " deviates from 1 by " + std::to_string(rep.ratio_deviation) +
                    " at t=2^40");
  rep.first = analyze(s, g1, opts);
  rep.second = analyze(s, g2, opts);

  auto same_verdict = [](const std::optional<LimitEstimate>& a, const std::optional<LimitEstimate>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || a->verdict == b->verdict;
  };
  rep.verdicts_agree = rep.first.tau.verdict == rep.second.tau.verdict &&
                       same_verdict(rep.first.lambda_plus, rep.second.lambda_plus) &&
                       same_verdict(rep.first.lambda_minus, rep.second.lambda_minus);

  auto close = [](const LimitEstimate& a, const LimitEstimate& b) {
    const double allowed = a.band_width() + b.band_width() + 1e-12 * std::max(1.0, std::abs(a.extrapolated));
    return std::abs(a.extrapolated - b.extrapolated) <= allowed;
  };
  auto close_opt = [&](const std::optional<LimitEstimate>& a, const std::optional<LimitEstimate>& b) {
    return !a || !b || close(*a, *b);
  };
  rep.estimates_agree = close(rep.first.tau, rep.second.tau) &&
                        close_opt(rep.first.lambda_plus, rep.second.lambda_plus) &&
                        close_opt(rep.first.lambda_minus, rep.second.lambda_minus);
  return rep;
}

double nc_integral_from_weyl_law(double c, double p, double q) {
  if (!(c > 0) || !(p > 0) || !(q >= -1) || !std::isfinite(c) || !std::isfinite(p) || !std::isfinite(q))
    throw Error(ErrorKind::domain, "Weyl-law parameters need c > 0, p > 0, q >= -1");
  return c * std::pow(p, -q);
}

}  // namespace lorentz
