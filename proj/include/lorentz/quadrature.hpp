#pragma once

#include <functional>

namespace lorentz::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b]. Intervals are
/// bisected until the Kronrod/Gauss discrepancy summed over all panels falls
/// below max(abs_tol, rel_tol * |integral|).
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-13, double abs_tol = 0.0, int max_depth = 40);

/// Single fixed 15-point Kronrod panel, no refinement.
double kronrod15(const std::function<double(double)>& f, double a, double b);

}  // namespace lorentz::quad
