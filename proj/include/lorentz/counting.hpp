#pragma once

// Counting functions N(lambda) = #{j : lambda_j > lambda} and their
// generalized inverses.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lorentz/limit.hpp"
#include "lorentz/rv.hpp"
#include "lorentz/spectra.hpp"

namespace lorentz {

enum class CountingKind { step, model };
enum class CountingPart { plus, minus, singular, modulus };

CountingPart parse_counting_part(std::string_view s);

class CountingFunction {
 public:
  /// Step data: distinct values in strictly decreasing order with their
  /// multiplicities.
  static CountingFunction from_runs(std::vector<double> values, std::vector<std::uint64_t> multiplicities,
                                    std::string name = "step");
  /// A non-increasing map on (0, inf).
  static CountingFunction model(std::function<double(double)> fn, std::string name);

  CountingKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  /// Throws PrefixExhausted below the smallest stored value of step data.
  double operator()(double lambda) const;

  /// #{j : lambda_j >= lambda}, the left limit N(lambda-). Step data only.
  double left_limit(double lambda) const;

  /// Smallest stored value (step), 0 for models.
  double floor() const noexcept;

  std::span<const double> step_values() const;
  /// cumulative()[i] = total multiplicity of step_values()[0..i].
  std::span<const std::uint64_t> cumulative() const;
  std::uint64_t total() const;

 private:
  struct Steps {
    std::vector<double> values;
    std::vector<std::uint64_t> cumulative;
  };
  CountingKind kind_ = CountingKind::model;
  std::string name_;
  std::shared_ptr<const Steps> steps_;
  std::function<double(double)> fn_;
};

CountingFunction counting_from_sequence(const SpectralSequence& s, CountingPart part);

/// lambda_j = sup{lambda > 0 : N(lambda) >= j + 1} for j < M. Step data is
/// expanded exactly; models are inverted by geometric bisection to 1e-12
/// relative width.
SpectralSequence sequence_from_counting(const CountingFunction& n, std::size_t m);

/// lambda_k = lambda_max 2^{-k}, k = 0, 1, ..., while lambda_k >= floor.
std::vector<double> lambda_grid(double lambda_max, double floor, int max_steps = 80);

/// Windowed limit of h(1/lambda)^{-1} N(lambda) along a decreasing grid. The
/// sample coordinate is 1/lambda.
LimitEstimate scaled_counting_limit(const CountingFunction& n, const RegVarFunction& h,
                                    const std::vector<double>& grid, const LimitOptions& opts = {});

/// Both sides of the equivalence between sequence and counting asymptotics,
/// evaluated over the index blocks [2^{k-1}, 2^k):
///   sequence side  h^{-1}(j+1) lambda_j          (block sup / block inf)
///   counting side  N(lambda)/h(1/lambda)         (sup / inf over the lambda
///                                                  range spanned by the block)
/// with h^{-1} the numerical inverse of h.
struct EquivalenceReport {
  double p = 0.0;
  LimitEstimate seq_sup, seq_inf;
  LimitEstimate count_sup, count_inf;
  std::vector<double> gap_sup, gap_inf;  // per window, |seq - count^{1/p}|
  /// |seq - count^{1/p}| / max(|seq|, tiny), on the extrapolated values when
  /// the side is convergent and on the last window otherwise.
  double rel_gap_sup = 0.0, rel_gap_inf = 0.0;
  bool degenerate = false;  // every entry zero

  /// Gaps non-increasing over the last three windows.
  bool gaps_shrinking() const;
};

EquivalenceReport equivalence_check(const SpectralSequence& s, const RegVarFunction& h,
                                    const LimitOptions& opts = {});

}  // namespace lorentz
