#pragma once

// Property suites over the whole library, plus the seeded building blocks the
// matrix harness and the acceptance run share.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lorentz/asymptotics.hpp"
#include "lorentz/counting.hpp"
#include "lorentz/spectra.hpp"

namespace lorentz::checks {

enum class Tier { small, full };
Tier parse_tier(std::string_view s);
std::string_view to_string(Tier t) noexcept;

struct Property {
  std::string name;
  bool pass = false;
  double margin = 0.0;  // observed slack; negative when violated
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  Tier tier = Tier::small;
  std::vector<Property> properties;
  double seconds = 0.0;

  bool pass() const;
};

/// rv, counting, spectra, asymptotics, harness, models
const std::vector<std::string>& suite_names();
/// Throws Error(parse) for an unknown suite.
SuiteReport run_suite(std::string_view suite, std::uint64_t seed, Tier tier);

// --- matrix harness ----------------------------------------------------------

/// Planted profile parameters drawn from a seed.
struct PlantSpec {
  double rho = -1.0;
  double q = 0.0;
  double c_plus = 1.0;
  double c_minus = 0.5;
};
PlantSpec draw_plant(std::uint64_t seed);

/// S and T planted with independent orthogonal frames, S + T eigensolved.
struct TripleOutcome {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  InequalityReport fan, weyl_modulus, weyl_signed;
  double trace_rel_error = 0.0;  // |sum lambda(S+T) - tr S - tr T| / (||S||_1 + ||T||_1)

  bool pass(double trace_tol = 1e-9) const;
};
TripleOutcome run_triple(std::uint64_t seed, std::size_t n);

struct AdditivityOutcome {
  std::uint64_t seed = 0;
  std::vector<std::pair<double, double>> residual;  // (N, |R_N| / G(N)) on N >= 32
  bool monotone = false;                            // strictly decreasing in N
  CommutatorReport commutator;
};
/// Two independent plants of the same profile, S + T eigensolved; the
/// commutator test conjugates S.
AdditivityOutcome additivity_outcome(const PlantSpec& p, std::size_t n, std::uint64_t seed);
/// additivity_outcome with the profile drawn from the seed.
AdditivityOutcome run_additivity(std::uint64_t seed, std::size_t n);

/// T = S + E with E a small independent planted matrix.
PerturbationReport run_perturbation(std::uint64_t seed, std::size_t n);

/// S planted, T = S + F where F has rank K and acts on the top eigenvectors of
/// the + (and, when odd seed, - ) part. Returns true when every Weyl window
/// with index k > ceil(log2 K) + 2 is identical for S and T.
struct FiniteRankOutcome {
  std::size_t k = 0;
  std::size_t first_checked_window = 0;
  std::size_t windows_checked = 0;
  bool unchanged = false;
};
FiniteRankOutcome run_finite_rank(std::uint64_t seed, std::size_t m);

// --- sequence / counting equivalence ------------------------------------------

/// Counting model N(lambda) = c h(1/lambda) (1 + a cos(2 pi log2(1/lambda) / 6))
/// with h(t) = t^p (log t)^q, inverted to a sequence of length M.
struct EquivalenceCase {
  double p = 1.0;
  double q = 0.0;
  double c = 0.5;
  double a = 0.0;  // oscillation amplitude; 0 for a regular law
};
struct EquivalenceOutcome {
  EquivalenceCase spec;
  EquivalenceReport report;
  double seconds = 0.0;
  bool agree(double rel = 0.02) const;
};
EquivalenceOutcome run_equivalence(const EquivalenceCase& c, std::size_t m);
/// The twelve cases p in {1/2, 1, 2} x q in {-1, 0, 1, 2}.
std::vector<EquivalenceCase> equivalence_cases();

}  // namespace lorentz::checks
