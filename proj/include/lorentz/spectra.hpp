#pragma once

// Finite prefixes of singular-value and eigenvalue sequences.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lorentz/rv.hpp"

namespace lorentz {

enum class SpectrumKind { singular, eigen_real_signed, eigen_complex };

std::string_view to_string(SpectrumKind kind) noexcept;

class SpectralSequence {
 public:
  /// Non-negative, non-increasing.
  static SpectralSequence singular(std::vector<double> mu);
  /// Positive and negative parts of a selfadjoint spectrum, each given as
  /// non-negative non-increasing magnitudes.
  static SpectralSequence signed_eigen(std::vector<double> plus, std::vector<double> minus);
  /// Non-increasing in modulus.
  static SpectralSequence complex_eigen(std::vector<std::complex<double>> lambda);

  SpectrumKind kind() const noexcept { return kind_; }
  /// Prefix length M (for the signed kind, both parts together).
  std::size_t size() const noexcept;

  std::span<const double> values() const;  // singular kind
  std::span<const double> plus() const;    // signed kind
  std::span<const double> minus() const;   // signed kind
  std::span<const std::complex<double>> complex_values() const;

  /// Real eigenvalues in one stream of non-increasing modulus. Signed parts
  /// are merged with positive-first tie breaking; singular values are returned
  /// as is. Not available for the complex kind.
  std::vector<double> merged() const;

  /// Length of the merged stream that cannot change if either signed part
  /// continued past its stored end: entries of modulus at least the larger of
  /// the two last stored magnitudes. size() for the other kinds, or when a
  /// part is empty.
  std::size_t determined_prefix() const;
  /// |lambda_j| (or mu_j), non-increasing.
  std::vector<double> moduli() const;

  /// Cumulative sums S_N = sum_{j<N} lambda_j for N = 0..M, with S_0 = 0.
  std::vector<std::complex<double>> partial_sums() const;
  std::vector<double> real_partial_sums() const;

  /// Multiplies every entry by c >= 0.
  SpectralSequence scaled(double c) const;

 private:
  SpectrumKind kind_ = SpectrumKind::singular;
  std::vector<double> a_;  // singular values, or positive part
  std::vector<double> b_;  // negative part
  std::vector<std::complex<double>> c_;
};

/// Singular values of a selfadjoint spectrum given by its signed parts.
SpectralSequence singular_of(const SpectralSequence& s);

/// max_{j<M} mu_j / g(j)
double quasi_norm_g(const SpectralSequence& s, const RegVarFunction& g);

/// max_{1<=N<=M} G(N)^{-1} sum_{j<N} mu_j
double lorentz_norm_G(const SpectralSequence& s, const KaramataPrimitive& G);

/// Finite-prefix proxies for a supremum / limsup of mu_j / g(j).
struct TailStatistic {
  double full = 0.0;                   // over the whole prefix
  double tail = 0.0;                   // over the final window
  std::optional<double> penultimate;   // over the window before it, when it fits
};

TailStatistic quotient_norm(const SpectralSequence& s, const RegVarFunction& g, std::size_t tail_window);

/// sum_{j<N} lambda_j; N = 0 gives 0.
std::complex<double> partial_sum(const SpectralSequence& s, std::size_t n);

struct InequalityReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double min_slack = 0.0;  // min over checks of (rhs - lhs); negative on violation
  std::string first_violation;

  bool holds() const noexcept { return violations == 0; }
};

/// mu_{j+k}(S+T) <= mu_j(S) + mu_k(T) for j+k < M, and
/// sum_{j<N} mu_j(S+T) <= sum_{j<N} mu_j(S) + sum_{j<N} mu_j(T) for N <= M.
InequalityReport check_fan(const SpectralSequence& s, const SpectralSequence& t, const SpectralSequence& sum,
                           double tolerance = 0.0);

/// sum_{j<N} |lambda_j| <= sum_{j<N} mu_j for every N up to the common prefix.
InequalityReport check_weyl_modulus(const SpectralSequence& eigen, const SpectralSequence& sing,
                                    double tolerance = 0.0);

/// lambda^+-_{j+k}(S+T) <= lambda^+-_j(S) + lambda^+-_k(T), entries beyond a
/// part's length counting as zero.
InequalityReport check_weyl_signed(const SpectralSequence& s, const SpectralSequence& t,
                                   const SpectralSequence& sum, double tolerance = 0.0);

/// CSV with header `index,value` (singular; complex values as `re+imj`) or
/// `index,lambda_plus,lambda_minus` (signed, empty cell past a part's end).
/// Doubles use the shortest round-trip representation.
void write_spectrum_csv(std::ostream& out, const SpectralSequence& s);
SpectralSequence read_spectrum_csv(std::istream& in, const std::string& source = "<stream>");

SpectralSequence load_spectrum_csv(const std::string& path);
void save_spectrum_csv(const std::string& path, const SpectralSequence& s);

std::string format_complex(std::complex<double> z);
std::complex<double> parse_complex(std::string_view s);

}  // namespace lorentz
