#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lorentz/asymptotics.hpp"
#include "lorentz/counting.hpp"
#include "lorentz/error.hpp"
#include "lorentz/models.hpp"
#include "lorentz/special.hpp"

using namespace lorentz;
using std::numbers::pi;

TEST_CASE("Riemann-von Mangoldt model") {
  CHECK(models::rvm_count(100) == doctest::Approx(2 * (100 / (2 * pi)) * (std::log(100 / (2 * pi)) - 1)).epsilon(1e-14));
  CHECK(models::rvm_count(100) == doctest::Approx(56.26).epsilon(1e-3));
  CHECK(models::rvm_count(10) == 0.0);

  const auto two = models::zeta_rvm_sequence(2);
  REQUIRE(two.size() == 2);
  // the two smallest model eigenvalues are where the count reaches 1 and 2
  for (std::size_t j = 0; j < 2; ++j) CHECK(models::rvm_count(1 / two.values()[j]) == doctest::Approx(j + 1.0).epsilon(1e-9));

  const auto s = models::zeta_rvm_sequence(1 << 16);
  const auto n = counting_from_sequence(s, CountingPart::singular);
  for (std::size_t j = 0; j < s.size(); j += 997) {
    const double mu = s.values()[j];
    CHECK(std::abs(n(mu) - models::rvm_count(1 / mu)) <= 1.0 + 1e-6);
  }
}

TEST_CASE("zeta zero files") {
  std::istringstream one("# first zero\n14.134725\n");
  const auto seq = models::zeros_to_sequence(models::read_zeros(one), 10);
  REQUIRE(seq.size() == 2);
  CHECK(seq.values()[0] == 1 / 14.134725);
  CHECK(seq.values()[1] == 1 / 14.134725);

  std::istringstream empty("# nothing\n\n");
  CHECK_THROWS_WITH_AS(models::read_zeros(empty), doctest::Contains("EmptyInput"), Error);
  std::istringstream desc("10.0\n9.0\n");
  CHECK_THROWS_WITH_AS(models::read_zeros(desc), doctest::Contains("NotAscending"), Error);
  std::istringstream bad("14.1\n21.0\nabc\n");
  CHECK_THROWS_WITH_AS(models::read_zeros(bad, "zeros.txt"), doctest::Contains("zeros.txt:3"), Error);
}

TEST_CASE("q-numbers") {
  CHECK(models::q_number(3, 0.999) == doctest::Approx(3.0).epsilon(1e-4));
  CHECK(models::q_number(1.5, 0.5) == doctest::Approx((std::pow(0.5, 1.5) - std::pow(0.5, -1.5)) / (0.5 - 2)).epsilon(1e-14));
  CHECK(models::q_number(1.5, 0.5) == doctest::Approx(1.64992).epsilon(1e-5));
  CHECK(models::q_number(1, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("r2 and the Gauss circle") {
  CHECK(models::r2(0) == 1);
  CHECK(models::r2(1) == 4);
  CHECK(models::r2(2) == 4);
  CHECK(models::r2(3) == 0);
  CHECK(models::r2(25) == 12);
  const int R = 100;
  const auto table = models::r2_table(R * R);
  std::uint64_t sum = 0, direct = 0;
  for (auto v : table) sum += v;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b) direct += a * a + b * b <= R * R;
  CHECK(sum == direct);
}

TEST_CASE("Podles x torus enumeration") {
  const auto agg = models::podles_torus_spectrum(0.5, 50);
  const auto brute = models::podles_brute_force(0.5, 50);
  REQUIRE(agg.values.size() == brute.size());
  for (std::size_t i = 0; i < brute.size(); ++i) {
    CHECK(agg.values[i] == brute[i].first);
    CHECK(agg.multiplicities[i] == brute[i].second);
  }
  // the smallest eigenvalue of A is [1]_q = 1 with torus k = 0 and l = 1/2
  CHECK(agg.values.front() == 1.0);
  CHECK(agg.multiplicities.front() == 2);
  const auto seq = models::podles_torus_sequence(0.5, 50);
  CHECK(seq.values()[0] == 1.0);
  CHECK(seq.size() == agg.total());
  CHECK_THROWS_AS(models::podles_torus_spectrum(1.5, 50), Error);
}

TEST_CASE("Weyl-law constants") {
  CHECK(models::simon_constant(2, INFINITY) == doctest::Approx(1 / pi).epsilon(1e-12));
  CHECK(models::simon_constant_limit_form(2) == doctest::Approx(1 / pi).epsilon(1e-12));
  CHECK(std::abs(models::simon_constant(2, 1000) - 1 / pi) <= 1e-3);
  CHECK_THROWS_AS(models::simon_constant(1, 1), Error);
  CHECK_THROWS_AS(models::simon_constant(2, -1), Error);
  // at n = 3 the finite-alpha constants approach the limit like 1/alpha
  const double lim = models::simon_constant(3, INFINITY);
  CHECK(models::simon_constant_limit_form(3) == doctest::Approx(lim).epsilon(1e-12));
  const double e1 = std::abs(models::simon_constant(3, 100) - lim), e2 = std::abs(models::simon_constant(3, 1000) - lim);
  CHECK(e2 < e1);
  CHECK(e1 / e2 == doctest::Approx(10).epsilon(0.1));

  const auto c2 = models::cusp_constants(2);
  CHECK(c2.c1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c2.c2 == doctest::Approx(2.0).epsilon(1e-12));
  const auto c3 = models::cusp_constants(3);
  CHECK(c3.c1 == doctest::Approx(2 * std::pow(2 * pi, -1.5) * 4 * pi / 3).epsilon(1e-12));
}

TEST_CASE("special functions") {
  CHECK(std::abs(special::gamma(0.5) - std::sqrt(pi)) <= 1e-12);
  double f = 1;
  for (int n = 1; n <= 20; ++n) {
    f *= n;
    CHECK(special::gamma(n + 1.0) == doctest::Approx(f).epsilon(1e-13));
  }
  CHECK(special::unit_ball_volume(2) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(special::unit_sphere_area(2) == doctest::Approx(2 * pi).epsilon(1e-14));
  CHECK(special::unit_ball_volume(3) == doctest::Approx(4 * pi / 3).epsilon(1e-14));
}

TEST_CASE("planted sequences") {
  const auto g = make_power_log(-1, 1);
  LimitOptions opts;
  opts.rate = RateHint::log2;
  const auto plain = weyl_detector(models::planted_sequence(1, g, 1 << 16), g, opts);
  CHECK(plain.plus.verdict == Verdict::convergent);
  CHECK(plain.plus.estimate == doctest::Approx(1.0));

  const auto og = models::planted_sequence(1, g, 1 << 20, models::SmallPerturbation{1.0});
  const auto rep = analyze(og, g, {RateHint::log});
  CHECK(rep.lambda_plus->extrapolated == doctest::Approx(1.0).epsilon(0.05));
  CHECK(rep.tau.extrapolated == doctest::Approx(1.0).epsilon(0.05));

  const auto osc = weyl_detector(models::planted_sequence(1, g, 1 << 20, models::Oscillation{0.5, 8}), g);
  CHECK(osc.plus.verdict == Verdict::divergent);
  CHECK(osc.plus.band_lo < 0.75);
  CHECK(osc.plus.band_hi > 1.25);

  const auto fr = models::planted_sequence(1, g, 1024, models::FiniteRank{5, 10.0});
  CHECK(fr.values()[0] == 10.0);
  CHECK(fr.values()[4] == 10.0);
  CHECK(fr.values()[5] == g(0));
}

TEST_CASE("model spec strings") {
  CHECK(models::build_model("generator:power-log:-1,1,1024").size() == 1024);
  CHECK(models::build_model("planted:2,-1,0,none,64").values()[0] == 2.0);
  CHECK(models::build_model("planted-signed:2,1,-1,0,64").kind() == SpectrumKind::eigen_real_signed);
  CHECK_THROWS_AS(models::build_model("podles:2,100"), Error);
  CHECK_THROWS_AS(models::build_model("nosuch:1"), Error);

  std::ostringstream out;
  models::write_model_csv("podles:0.5,100000", out);
  std::istringstream in(out.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "index,value");
  CHECK(first == "0,1");
}
