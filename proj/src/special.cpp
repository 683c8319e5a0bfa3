#include "lorentz/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "lorentz/error.hpp"

namespace lorentz::special {
namespace {

constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double z) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
  return a;
}

}  // namespace

double gamma(double x) {
  using std::numbers::pi;
  if (x == std::floor(x) && x <= 0) throw Error(ErrorKind::domain, "gamma pole at non-positive integer");
  if (x < 0.5) return pi / (std::sin(pi * x) * gamma(1.0 - x));
  const double z = x - 1.0;
  const double t = z + kG + 0.5;
  return std::sqrt(2 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * lanczos_sum(z);
}

double lgamma(double x) {
  using std::numbers::pi;
  if (!(x > 0)) throw Error(ErrorKind::domain, "lgamma needs x > 0");
  if (x < 0.5) return std::log(pi / std::abs(std::sin(pi * x))) - lgamma(1.0 - x);
  const double z = x - 1.0;
  const double t = z + kG + 0.5;
  return 0.5 * std::log(2 * pi) + (z + 0.5) * std::log(t) - t + std::log(lanczos_sum(z));
}

double factorial(int n) {
  if (n < 0) throw Error(ErrorKind::domain, "factorial of a negative number");
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double unit_ball_volume(int n) {
  if (n < 1) throw Error(ErrorKind::domain, "dimension must be >= 1");
  return std::pow(std::numbers::pi, n / 2.0) / gamma(n / 2.0 + 1.0);
}

double unit_sphere_area(int n) {
  if (n < 1) throw Error(ErrorKind::domain, "dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, n / 2.0) / gamma(n / 2.0);
}

}  // namespace lorentz::special
