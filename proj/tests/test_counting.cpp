#include <doctest.h>

#include <cmath>

#include "lorentz/counting.hpp"
#include "lorentz/error.hpp"
#include "lorentz/models.hpp"
#include "lorentz/rv.hpp"

using namespace lorentz;

namespace {

SpectralSequence harmonic(std::size_t m) {
  std::vector<double> v(m);
  for (std::size_t j = 0; j < m; ++j) v[j] = 1.0 / (j + 1.0);
  return SpectralSequence::singular(v);
}

}  // namespace

TEST_CASE("step counting function") {
  const auto n = counting_from_sequence(harmonic(100), CountingPart::singular);
  CHECK(n(0.25) == 3);
  CHECK(n(1.0) == 0);
  CHECK(n(2.0) == 0);
  CHECK_THROWS_AS(n(1e-3), Error);

  const auto s = SpectralSequence::signed_eigen({3, 1}, {2});
  CHECK(counting_from_sequence(s, CountingPart::plus)(1.5) == 1);
  CHECK(counting_from_sequence(s, CountingPart::minus)(2.5) == 0);
  CHECK_THROWS_AS(counting_from_sequence(s, CountingPart::minus)(1.5), Error);
  CHECK(counting_from_sequence(s, CountingPart::modulus)(1.5) == 2);
}

TEST_CASE("sequence from counting: models") {
  const auto inv = sequence_from_counting(CountingFunction::model([](double l) { return 1.0 / l; }, "1/l"), 1000);
  // lambda_j = sup{lambda : N(lambda) >= j + 1}
  for (std::size_t j : {0u, 10u, 999u}) CHECK(inv.values()[j] == doctest::Approx(1.0 / (j + 1.0)).epsilon(1e-11));

  const auto sq = sequence_from_counting(CountingFunction::model([](double l) { return 1.0 / (l * l); }, "1/l^2"), 4096);
  for (std::size_t j : {1u, 100u, 4095u}) CHECK(sq.values()[j] == doctest::Approx(1 / std::sqrt(j + 1.0)).epsilon(1e-11));

  CHECK_THROWS_AS(sequence_from_counting(CountingFunction::model([](double l) { return l < 0.5 ? 3.0 : 0.0; }, "bounded"), 10),
                  Error);
}

TEST_CASE("step round trip is exact") {
  std::vector<double> v(60);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::ldexp(1.0, -static_cast<int>(j));
  const auto s = SpectralSequence::singular(v);
  const auto back = sequence_from_counting(counting_from_sequence(s, CountingPart::singular), v.size());
  CHECK(back.merged() == v);

  // repeated values survive too
  const auto r = SpectralSequence::singular({2, 2, 2, 1, 0.5, 0.5});
  CHECK(sequence_from_counting(counting_from_sequence(r, CountingPart::singular), 6).merged() == r.merged());
}

TEST_CASE("monotone evaluation") {
  const auto n = models::parse_counting_spec("smalllam:0.5,1,1");
  double prev = 0.0;
  for (double l : lambda_grid(0.3, 1e-12)) {
    const double v = n(l);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("scaled counting limit") {
  const auto n = counting_from_sequence(harmonic(1 << 16), CountingPart::singular);
  const auto est = scaled_counting_limit(n, make_power(1), lambda_grid(0.5, n.floor()), {RateHint::power});
  CHECK(est.estimate == doctest::Approx(1.0).epsilon(1e-3));

  // N(lambda) = lambda^{-1} |log lambda| against h = power_log(1,1) tends to 1
  const auto nl = CountingFunction::model([](double l) { return std::abs(std::log(l)) / l; }, "log");
  const auto e2 = scaled_counting_limit(nl, make_power_log(1, 1), lambda_grid(std::exp(-2.0), 1e-300, 1000));
  CHECK(e2.estimate == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("equivalence: harmonic sequence") {
  const auto rep = equivalence_check(harmonic(1 << 16), make_power(1));
  CHECK(rep.gap_sup.back() < 1e-9);
  CHECK(rep.gap_inf.back() < 1e-3);
  CHECK(rep.gaps_shrinking());
  CHECK(rep.seq_sup.estimate == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("equivalence: c j^{-1} log j") {
  const double c = 0.5;
  std::vector<double> v(1 << 20);
  // (j+2) keeps the sequence decreasing from the start
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = c * std::log(j + 3.0) / (j + 2.0);
  const auto rep = equivalence_check(SpectralSequence::singular(v), make_power_log(1, 1), {RateHint::log});
  CHECK(rep.gaps_shrinking());
  CHECK(rep.seq_sup.estimate == doctest::Approx(c).epsilon(0.1));
  CHECK(std::pow(rep.count_sup.estimate, 1.0) == doctest::Approx(c).epsilon(0.1));
}

TEST_CASE("equivalence: oscillating sequence") {
  // Plateaus lambda_j = 3^{-k} on [3^k, 3^{k+1}): non-increasing, with
  // (j+1) lambda_j sweeping [1, 3) on every plateau.
  std::vector<double> v;
  for (std::size_t a = 1; v.size() < (1u << 20); a *= 3) v.resize(std::min<std::size_t>(3 * a, 1u << 20), 1.0 / a);
  v[0] = 1.0;
  const auto rep = equivalence_check(SpectralSequence::singular(v), make_power(1));
  CHECK(rep.seq_sup.band_hi == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(rep.seq_inf.band_lo == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rep.count_sup.band_hi == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(rep.count_inf.band_lo == doctest::Approx(1.0).epsilon(1e-3));
}
