#pragma once

// Measurability diagnostics on finite spectral prefixes: the normalized
// partial sums tau_N = G(N)^{-1} sum_{j<N} lambda_j, the Weyl ratios
// g(j)^{-1} lambda_j^{+-}, additivity residuals and commutator statistics.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lorentz/limit.hpp"
#include "lorentz/rv.hpp"
#include "lorentz/spectra.hpp"

namespace lorentz {

/// tau_N on N = 2^k, k >= 1, N <= grid_max (default: the determined prefix,
/// see SpectralSequence::determined_prefix()).
LimitEstimate tau_functional(const SpectralSequence& s, const KaramataPrimitive& G, const LimitOptions& opts = {},
                             std::optional<std::size_t> grid_max = std::nullopt);

/// Raw tau_N at the given N.
std::vector<double> tau_values(const SpectralSequence& s, const KaramataPrimitive& G, const std::vector<std::size_t>& ns);

/// Weyl ratios g(j)^{-1} lambda_j^{+-}. Window k covers j in [2^{k-1}, 2^k);
/// its value is the ratio at j = 2^k - 1, its spread the range over the block.
/// Entries beyond a part's stored length count as zero; the grid runs to the
/// longer part. Singular and complex inputs produce the + channel only (on the
/// moduli).
struct WeylDetection {
  LimitEstimate plus;
  std::optional<LimitEstimate> minus;
};

WeylDetection weyl_detector(const SpectralSequence& s, const RegVarFunction& g, const LimitOptions& opts = {});

/// Samples of the Weyl ratio in one channel (the values underlying weyl_detector).
std::vector<Sample> weyl_samples(std::span<const double> part, const RegVarFunction& g, std::size_t grid_max);

struct MeasurabilityReport {
  LimitEstimate tau;
  std::optional<LimitEstimate> lambda_plus;
  std::optional<LimitEstimate> lambda_minus;
  std::optional<double> nc_integral;  // tau extrapolated, when convergent
  bool spectrally_measurable = false;
  bool commutator_flag = false;
};

MeasurabilityReport analyze(const SpectralSequence& s, const RegVarFunction& g, const LimitOptions& opts = {});

/// R_N / G(N) with R_N = S_N(S+T) - S_N(S) - S_N(T) on dyadic N up to the
/// longest prefix (missing entries count as zero).
LimitEstimate additivity_residual(const SpectralSequence& s1, const SpectralSequence& s2, const SpectralSequence& s12,
                                  const KaramataPrimitive& G, const LimitOptions& opts = {});
std::vector<std::pair<double, double>> additivity_residual_curve(const SpectralSequence& s1,
                                                                 const SpectralSequence& s2,
                                                                 const SpectralSequence& s12,
                                                                 const KaramataPrimitive& G);

struct CommutatorReport {
  std::vector<std::pair<double, double>> statistic;  // (N, |S_N| / (N g(N)))
  std::vector<double> running_max;
  /// The running maximum stops growing somewhere in the last three windows:
  /// at least one of its last two steps rises by no more than 5%.
  bool bounded = false;
};

CommutatorReport commutator_diagnostic(const SpectralSequence& s, const RegVarFunction& g);

/// Tail-window proxies for the r-convex perturbation estimates with
/// r = 1/(|rho| + 1): |X(T)^r - X(S)^r| <= ||T - S||^r for X the upper (tail
/// max) and lower (tail min) Weyl ratios of each sign.
struct PerturbationMargin {
  std::string name;  // upper+, lower+, upper-, lower-
  double lhs = 0.0;
  double rhs = 0.0;
  double margin() const noexcept { return rhs - lhs; }
  bool ok(double slack = 0.05) const noexcept { return margin() >= -slack * rhs; }
};

struct PerturbationReport {
  double r = 1.0;
  std::vector<PerturbationMargin> margins;
  bool holds(double slack = 0.05) const;
};

PerturbationReport perturbation_bound_check(const SpectralSequence& s, const SpectralSequence& t,
                                            const SpectralSequence& diff_singular, const RegVarFunction& g,
                                            std::size_t tail_window);

struct IndependenceReport {
  MeasurabilityReport first, second;
  double ratio_deviation = 0.0;  // |g1/g2 - 1| at t = 2^40
  bool verdicts_agree = false;
  bool estimates_agree = false;
};

/// Throws NotAsymptoticallyEqual unless g1/g2 -> 1 on the grid t = 2^k,
/// k = 20..40 (deviation at most 2e-2 and not growing).
IndependenceReport g_independence_check(const SpectralSequence& s, const RegVarFunction& g1,
                                        const RegVarFunction& g2, const LimitOptions& opts = {});

/// c p^{-q}: the integral of A^{-p} when N(A; lambda) ~ c lambda^{1/p} (log lambda)^q,
/// i.e. lambda_j(A^{-p}) ~ c p^{-q} j^{-1} (log j)^q. Requires c > 0, p > 0, q >= -1.
double nc_integral_from_weyl_law(double c, double p, double q);

}  // namespace lorentz
