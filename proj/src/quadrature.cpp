#include "lorentz/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace lorentz::quad {
namespace {

// Abscissae of the 15-point Kronrod rule on [-1, 1]; odd entries are the
// 7-point Gauss nodes.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate(const std::function<double(double)>& f, double a, double b, int depth) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWk[7];
  double gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXk[i];
    const double s = f(c - dx) + f(c + dx);
    kron += kWk[i] * s;
    if (i % 2 == 1) gauss += kWg[i / 2] * s;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h), depth};
}

}  // namespace

double kronrod15(const std::function<double(double)>& f, double a, double b) {
  return evaluate(f, a, b, 0).value;
}

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     double abs_tol, int max_depth) {
  Result out;
  if (a == b) return out;
  std::priority_queue<Panel> work;
  work.push(evaluate(f, a, b, 0));
  out.evaluations = 15;
  double total = work.top().value;
  double err = work.top().error;
  // Bounded number of refinements; each bisection adds 30 evaluations.
  for (int iter = 0; iter < 2000; ++iter) {
    if (err <= std::max(abs_tol, rel_tol * std::abs(total))) break;
    Panel worst = work.top();
    if (worst.depth >= max_depth) break;
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate(f, worst.a, mid, worst.depth + 1);
    Panel right = evaluate(f, mid, worst.b, worst.depth + 1);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
  }
  // Re-sum from the panels to shed accumulated cancellation in the running total.
  double value = 0.0, error = 0.0;
  while (!work.empty()) {
    value += work.top().value;
    error += work.top().error;
    work.pop();
  }
  out.value = value;
  out.error = error;
  return out;
}

}  // namespace lorentz::quad
