#pragma once

// Concrete spectra: the Riemann-von Mangoldt model, zeta-zero tables, the
// Podles sphere times a flat torus, Weyl-law constants and synthetic
// sequences with planted asymptotics.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lorentz/counting.hpp"
#include "lorentz/rv.hpp"
#include "lorentz/spectra.hpp"

namespace lorentz::models {

// --- Riemann-von Mangoldt ---------------------------------------------------

/// 2 (lambda/2pi) (log(lambda/2pi) - 1) for lambda > 2 pi e, 0 below.
double rvm_count(double lambda);

/// Compact-side counting mu -> rvm_count(1/mu).
CountingFunction rvm_counting();

/// Reciprocal eigenvalues of the model |D|, M >= 2 of them.
SpectralSequence zeta_rvm_sequence(std::size_t m);

// --- zeta zero tables ------------------------------------------------------

/// Ascending positive ordinates, one per line; '#' comments and blank lines
/// are skipped.
std::vector<double> read_zeros(std::istream& in, const std::string& source = "<stream>");

/// 1/gamma_k, each zero used twice, truncated to M entries.
SpectralSequence zeta_file_sequence(const std::string& path, std::size_t m);
SpectralSequence zeros_to_sequence(const std::vector<double>& zeros, std::size_t m);

// --- Podles sphere x torus ---------------------------------------------------

/// [x]_q = (q^x - q^{-x}) / (q - q^{-1}) for 0 < q < 1.
double q_number(double x, double q);

/// Number of representations n = a^2 + b^2 with (a, b) in Z^2.
std::uint64_t r2(std::uint64_t n);

/// r2(0..n_max) from a smallest-prime-factor sieve.
std::vector<std::uint32_t> r2_table(std::uint64_t n_max);

/// Aggregated spectrum of A = |D_q| (x) 1 + 1 (x) Delta_torus up to
/// lambda_max: distinct eigenvalues in ascending order with multiplicities.
/// The Dirac eigenvalue [l + 1/2]_q carries multiplicity 2l + 1.
struct AggregatedSpectrum {
  std::vector<double> values;
  std::vector<std::uint64_t> multiplicities;

  std::uint64_t total() const;
  /// #{eigenvalues < lambda}
  std::uint64_t count_below(double lambda) const;
};

AggregatedSpectrum podles_torus_spectrum(double q, double lambda_max);

/// Independent enumeration over (l, k1, k2) without lattice-count shortcuts,
/// aggregated to (value, multiplicity) ascending. Only for small lambda_max.
std::vector<std::pair<double, std::uint64_t>> podles_brute_force(double q, double lambda_max);

/// Compact-side step counting function of A^{-1}.
CountingFunction podles_counting(double q, double lambda_max);

/// lambda_j(A^{-1}), non-increasing. Throws Overflow when the expansion would
/// exceed max_entries.
SpectralSequence podles_torus_sequence(double q, double lambda_max, std::uint64_t max_entries = std::uint64_t{1} << 27);

// --- Weyl-law constants --------------------------------------------------

/// c(n, alpha); alpha = +inf selects the closed form (2 n^n / n!) (2 pi)^{-n} |B^n|.
double simon_constant(int n, double alpha);
/// The finite-alpha formula evaluated at 1/alpha = 0.
double simon_constant_limit_form(int n);

struct CuspConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};
CuspConstants cusp_constants(int n);

// --- synthetic sequences -------------------------------------------------

struct NoPerturbation {};
/// lambda_j (1 + a / log(j + 3))
struct SmallPerturbation {
  double a = 1.0;
};
/// lambda_j (1 + a cos(2 pi log2(j + 1) / period)), period in dyadic blocks.
struct Oscillation {
  double a = 0.5;
  double period = 8.0;
};
/// K extra entries of the given height, merged in.
struct FiniteRank {
  std::size_t k = 1;
  double height = 1.0;
};
using Perturbation = std::variant<NoPerturbation, SmallPerturbation, Oscillation, FiniteRank>;

/// `none`, `og:<a>`, `osc:<a>[;<period>]`, `finite:<K>;<height>`
Perturbation parse_perturbation(std::string_view s);
std::string describe(const Perturbation& p);

/// c g(j) with g = power_log(rho, q), modified per perturbation.
SpectralSequence planted_sequence(double c, double rho, double q, std::size_t m, const Perturbation& p = NoPerturbation{});
SpectralSequence planted_sequence(double c, const RegVarFunction& g, std::size_t m, const Perturbation& p = NoPerturbation{});

/// lambda^+_j = c_plus g(j) (perturbed), lambda^-_j = c_minus g(j), M entries each.
SpectralSequence planted_signed(double c_plus, double c_minus, const RegVarFunction& g, std::size_t m,
                                const Perturbation& p = NoPerturbation{});

/// lambda_j = g(j), sorted non-increasing (g may rise before monotone_from()).
SpectralSequence generator_sequence(const RegVarFunction& g, std::size_t m);

// --- specs -----------------------------------------------------------------

inline constexpr std::size_t default_prefix = std::size_t{1} << 20;

/// `zeta-rvm:<M>`, `zeta-file:<path>,<M>`, `podles:<q>,<lambda_max>`,
/// `planted:<c>,<rho>,<q>,<perturbation>[,<M>]`,
/// `planted-signed:<c+>,<c->,<rho>,<q>[,<M>]`, `generator:<gspec>,<M>`.
SpectralSequence build_model(std::string_view spec);

/// Writes the spectrum CSV of a model. Podles spectra are streamed from the
/// aggregated form instead of being materialized.
void write_model_csv(std::string_view spec, std::ostream& out);

/// `rvm`, `smalllam:<c>,<p>,<q>` (c lambda^{-p} |log lambda|^q below
/// exp(-u0) with u0 = max(1, 1 - q/p), where it is decreasing; zero above),
/// `podles:<q>,<lambda_max>`.
CountingFunction parse_counting_spec(std::string_view spec);

}  // namespace lorentz::models
