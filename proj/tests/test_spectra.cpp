#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lorentz/error.hpp"
#include "lorentz/rv.hpp"
#include "lorentz/spectra.hpp"

using namespace lorentz;

namespace {

std::vector<double> sample(const RegVarFunction& g, std::size_t m) {
  std::vector<double> v(m);
  for (std::size_t j = 0; j < m; ++j) v[j] = g(static_cast<double>(j));
  return v;
}

}  // namespace

TEST_CASE("sortedness is enforced") {
  CHECK_THROWS_AS(SpectralSequence::singular({1.0, 2.0}), Error);
  CHECK_THROWS_AS(SpectralSequence::singular({1.0, -0.5}), Error);
  CHECK_THROWS_AS(SpectralSequence::signed_eigen({1.0}, {0.5, 0.7}), Error);
  CHECK_NOTHROW(SpectralSequence::complex_eigen({{0, 2}, {1, 0}, {-0.5, 0}}));
}

TEST_CASE("quasi-norm") {
  const auto g = make_power_log(-1, 0);
  CHECK(quasi_norm_g(SpectralSequence::singular(sample(g, 1000)), g) == 1.0);
  CHECK(quasi_norm_g(SpectralSequence::singular({2, 1, 0, 0}), g) == 2.0);
  CHECK(quasi_norm_g(SpectralSequence::singular({0, 0, 0}), g) == 0.0);
}

TEST_CASE("Lorentz norm") {
  const auto g = make_power_log(-1, 0);
  const auto G = karamata_integral(g);
  CHECK(lorentz_norm_G(SpectralSequence::singular(sample(g, 10000)), G) == doctest::Approx(1 / std::log(2.0)).epsilon(1e-14));
  CHECK(lorentz_norm_G(SpectralSequence::singular({0, 0}), G) == 0.0);
  CHECK(lorentz_norm_G(SpectralSequence::singular({1, 0, 0, 0}), G) == doctest::Approx(1 / std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("quotient norm tail proxies") {
  const auto g = make_power_log(-0.5, 0);
  std::vector<double> mu(1 << 16);
  for (std::size_t j = 0; j < mu.size(); ++j) mu[j] = g(static_cast<double>(j)) + 1.0 / ((j + 1.0) * (j + 1.0));
  const auto q = quotient_norm(SpectralSequence::singular(mu), g, 1024);
  CHECK(q.tail == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE(q.penultimate.has_value());
  CHECK(q.tail < *q.penultimate);
  CHECK(q.full > q.tail);

  std::vector<double> fr(400, 0.0);
  for (std::size_t j = 0; j < 100; ++j) fr[j] = 1.0 / (j + 1.0);
  CHECK(quotient_norm(SpectralSequence::singular(fr), g, 200).tail == 0.0);

  // mu_j = g(j)(2 + (-1)^j) is not monotone; the equivalent monotone sequence
  // with the same limsup keeps 3 g(j) on even j and takes g-envelope steps.
  std::vector<double> alt(4096);
  for (std::size_t j = 0; j < alt.size(); ++j) alt[j] = 3.0 * g(static_cast<double>(j - j % 2));
  CHECK(quotient_norm(SpectralSequence::singular(alt), g, 512).tail == doctest::Approx(3.0).epsilon(1e-3));
  CHECK_THROWS_AS(quotient_norm(SpectralSequence::singular(alt), g, 5000), Error);
}

TEST_CASE("partial sums") {
  const auto s = SpectralSequence::singular({1, 0.5, 0.25, 0.125});
  CHECK(partial_sum(s, 0) == std::complex<double>(0));
  CHECK(partial_sum(s, 3).real() == 1.75);
  CHECK_THROWS_AS(partial_sum(s, 5), Error);

  const auto g = make_power_log(-1, 1);
  std::vector<double> part(512);
  for (std::size_t j = 0; j < part.size(); ++j) part[j] = g(2.0 * static_cast<double>(j));
  const auto sg = SpectralSequence::signed_eigen(part, part);
  for (std::size_t n = 0; n <= sg.size(); n += 2) REQUIRE(partial_sum(sg, n).real() == 0.0);
  CHECK(partial_sum(sg, 1).real() == part[0]);
}

TEST_CASE("signed merge is positive-first") {
  const auto s = SpectralSequence::signed_eigen({3, 1}, {3, 2});
  CHECK(s.merged() == std::vector<double>{3, -3, -2, 1});
  CHECK(s.moduli() == std::vector<double>{3, 3, 2, 1});
}

TEST_CASE("Fan inequalities") {
  const auto z = SpectralSequence::singular({0, 0, 0});
  CHECK(check_fan(z, z, z).holds());
  const auto g = make_power_log(-1, 0);
  const auto s = SpectralSequence::singular(sample(g, 64));
  const auto rep = check_fan(s, s, SpectralSequence::singular(std::vector<double>(64, 0.0)));
  CHECK(rep.holds());
  CHECK(rep.min_slack >= 0.0);
  // a sum larger than allowed is caught
  const auto bad = check_fan(s, z, SpectralSequence::singular({5, 0, 0}));
  CHECK_FALSE(bad.holds());
  CHECK_FALSE(bad.first_violation.empty());
}

TEST_CASE("Weyl modulus inequality") {
  const auto g = make_power_log(-1, 0);
  const auto v = sample(g, 32);
  std::vector<std::complex<double>> c(v.begin(), v.end());
  const auto rep = check_weyl_modulus(SpectralSequence::complex_eigen(c), SpectralSequence::singular(v));
  CHECK(rep.holds());
  CHECK(rep.min_slack == 0.0);
  const auto nil = check_weyl_modulus(SpectralSequence::complex_eigen({0.0, 0.0}), SpectralSequence::singular({1, 0}));
  CHECK(nil.holds());
  CHECK(nil.min_slack == 1.0);
}

TEST_CASE("homogeneity") {
  const auto g = make_power_log(-0.5, 1);
  const auto G = karamata_integral(g);
  const auto s = SpectralSequence::singular(sample(make_power_log(-0.7, 0), 2000));
  for (double c : {0.0, 0.3, 7.0}) {
    CHECK(quasi_norm_g(s.scaled(c), g) == doctest::Approx(c * quasi_norm_g(s, g)).epsilon(1e-14));
    CHECK(lorentz_norm_G(s.scaled(c), G) == doctest::Approx(c * lorentz_norm_G(s, G)).epsilon(1e-14));
  }
}

TEST_CASE("CSV round trip is bit exact") {
  auto roundtrip = [](const SpectralSequence& s) {
    std::ostringstream out;
    write_spectrum_csv(out, s);
    std::istringstream in(out.str());
    return read_spectrum_csv(in);
  };
  const auto sg = SpectralSequence::signed_eigen({1.0 / 3, 0.1, 1e-300}, {std::nextafter(1.0, 0.0)});
  const auto rs = roundtrip(sg);
  CHECK(rs.kind() == SpectrumKind::eigen_real_signed);
  CHECK(rs.merged() == sg.merged());
  const auto sv = SpectralSequence::singular({std::exp(1.0), std::sqrt(2.0), 0.0});
  CHECK(roundtrip(sv).merged() == sv.merged());
  const auto cv = SpectralSequence::complex_eigen({{0.3, -1.0 / 7}, {-0.1, 0.0}});
  const auto rc = roundtrip(cv);
  REQUIRE(rc.size() == 2);
  CHECK(rc.complex_values()[0] == cv.complex_values()[0]);
  CHECK(rc.complex_values()[1] == cv.complex_values()[1]);

  std::istringstream bad("index,value\n0,1\n1,abc\n");
  CHECK_THROWS_WITH_AS(read_spectrum_csv(bad, "x.csv"), doctest::Contains("x.csv:3"), Error);
}
