#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lorentz/asymptotics.hpp"
#include "lorentz/error.hpp"
#include "lorentz/matrix.hpp"

using namespace lorentz;

namespace {

SymmetricMatrix random_symmetric(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  SymmetricMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, rng.normal());
  return a;
}

}  // namespace

TEST_CASE("Jacobi: trivial spectra") {
  const auto id = jacobi_eigen(SymmetricMatrix::identity(3));
  CHECK(std::vector<double>(id.signed_spectrum.plus().begin(), id.signed_spectrum.plus().end()) == std::vector<double>{1, 1, 1});
  CHECK(id.signed_spectrum.minus().empty());

  const auto d = jacobi_eigen(SymmetricMatrix::diagonal({3, -2}));
  CHECK(d.signed_spectrum.plus()[0] == 3.0);
  CHECK(d.signed_spectrum.minus()[0] == 2.0);
  CHECK(d.singular.merged() == std::vector<double>{3, 2});
}

TEST_CASE("Jacobi: random 64 x 64") {
  const auto a = random_symmetric(64, 11);
  const auto e = jacobi_eigen(a, true);
  CHECK(reconstruction_residual(a, e) <= 1e-9 * a.frobenius());
  for (std::size_t k : {0u, 13u, 31u, 50u, 63u}) {
    const double lam = e.eigenvalues[k];
    CHECK(inverse_iteration(a, lam + 1e-7) == doctest::Approx(lam).epsilon(1e-8).scale(1.0));
  }
  double tr = 0.0;
  for (double x : e.eigenvalues) tr += x;
  CHECK(tr == doctest::Approx(a.trace()).epsilon(1e-10));
}

TEST_CASE("symmetry is enforced") {
  CHECK_THROWS_AS(SymmetricMatrix::from_dense(2, {1, 2, 3, 4}), Error);
  CHECK_THROWS_AS(SymmetricMatrix(600), Error);
}

TEST_CASE("planted profiles") {
  const auto g = make_power_log(-1, 0);
  const auto e = jacobi_eigen(plant_profile(g, 4, 1.0, 0.0, 7));
  REQUIRE(e.signed_spectrum.plus().size() == 4);
  for (std::size_t j = 0; j < 4; ++j) CHECK(e.signed_spectrum.plus()[j] == doctest::Approx(g(double(j))).epsilon(1e-12));

  CHECK(plant_profile(g, 32, 1.0, 0.5, 99) == plant_profile(g, 32, 1.0, 0.5, 99));
  CHECK_FALSE(plant_profile(g, 32, 1.0, 0.5, 99) == plant_profile(g, 32, 1.0, 0.5, 100));

  // signed plants are recovered by the Weyl detector
  const auto s = jacobi_eigen(plant_profile(g, 64, 1.5, 0.7, 3)).signed_spectrum;
  const auto w = weyl_detector(s, g, {RateHint::power});
  CHECK(w.plus.estimate == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(w.minus->estimate == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("commutator test") {
  const auto g = make_power_log(-1, 1);
  const auto t = plant_profile(g, 32, 1.0, 0.5, 5);
  const auto zero = commutator_test(t, Orthogonal::identity(32));
  CHECK(zero.size() == 0);
  CHECK(commutator_diagnostic(zero, g).bounded);

  // permuting a diagonal: differences of g-values whose sum telescopes
  std::vector<double> d(16);
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = g(double(j));
  std::vector<std::size_t> perm(16);
  for (std::size_t j = 0; j < 16; ++j) perm[j] = (j + 1) % 16;
  const auto c = commutator_test(SymmetricMatrix::diagonal(d), Orthogonal::permutation(perm));
  double total = 0.0;
  for (double x : c.merged()) total += x;
  CHECK(total == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

  const auto r = commutator_diagnostic(commutator_test(plant_profile(g, 128, 1.0, 0.5, 8), Orthogonal::random(128, 9)), g);
  CHECK(r.bounded);
}

TEST_CASE("matrix dump round trip") {
  const auto a = random_symmetric(9, 4);
  const std::string path = "matrix_dump_test.bin";
  dump_matrix(path, a);
  CHECK(load_matrix(path) == a);
  std::remove(path.c_str());
}
