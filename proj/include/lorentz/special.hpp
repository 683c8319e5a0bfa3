#pragma once

namespace lorentz::special {

/// Gamma function via the Lanczos approximation (g = 7, nine terms) with
/// reflection below 1/2. Relative accuracy is better than 1e-13 on [0.5, 30].
double gamma(double x);
double lgamma(double x);

/// Volume of the unit ball in R^n: pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);
/// Surface area of the unit sphere S^{n-1}: 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

double factorial(int n);

}  // namespace lorentz::special
