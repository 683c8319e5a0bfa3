#pragma once

// Regularly varying functions and their Karamata primitives.
//
// The canonical family is g(t) = (t+1)^rho * log(t+2)^q, which is positive and
// finite on all of [0, inf) while keeping the asymptotics of t^rho (log t)^q.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lorentz {

enum class RvFamily { power_log, pure_power, reciprocal, tabulated, composed };

class RegVarFunction;

namespace detail {
struct RvData;
}

struct PowerLogParams {
  double rho = 0.0;
  double q = 0.0;
};

class RegVarFunction {
 public:
  double operator()(double t) const { return eval(t); }
  double eval(double t) const;

  double index() const noexcept;
  double monotone_from() const noexcept;
  RvFamily family() const noexcept;
  const std::string& name() const noexcept;

  std::optional<PowerLogParams> power_log_params() const noexcept;
  /// Source function when family() == reciprocal.
  const RegVarFunction* reciprocal_source() const noexcept;

  explicit RegVarFunction(std::shared_ptr<const detail::RvData> data) : data_(std::move(data)) {}

 private:
  std::shared_ptr<const detail::RvData> data_;
};

RegVarFunction make_power_log(double rho, double q);

/// g(t) = t^rho with rho > 0. Vanishes at the origin, so it is only meant for
/// the counting-scale functions h of positive index.
RegVarFunction make_power(double rho);

/// Monotone piecewise-linear interpolation in (log(1+t), log g) coordinates.
/// Beyond the last node the function continues as a pure power of the
/// declared (or fitted) index.
RegVarFunction make_tabulated(std::vector<double> t, std::vector<double> g,
                              std::optional<double> index = std::nullopt);

RegVarFunction make_composed(std::function<double(double)> fn, double index, double monotone_from,
                             std::string name);

RegVarFunction scaled(const RegVarFunction& g, double factor);
/// t -> g(t + shift)
RegVarFunction shifted(const RegVarFunction& g, double shift);

/// h(t) = 1/g(t); index |rho|. Taking the reciprocal twice returns the source.
RegVarFunction reciprocal_rv(const RegVarFunction& g);

/// Asymptotic inverse of an RV_p function with p > 0. Closed forms are used
/// for the power-log family (p^{q/p} t^{1/p} log(t+2)^{-q/p}) and pure powers;
/// anything else goes through exact_inverse().
RegVarFunction asymptotic_inverse(const RegVarFunction& h);

/// Numerical inverse of h on [monotone_from, inf) by 80-step bisection,
/// continued linearly through the origin below h(monotone_from).
RegVarFunction exact_inverse(const RegVarFunction& h);

/// Parses `power-log:<rho>,<q>`, `power:<rho>`, `reciprocal:<spec>`,
/// `table:<path.csv>`, `scale:<c>,<spec>` and `shift:<b>,<spec>`.
RegVarFunction parse_rv_spec(std::string_view spec);

struct IndexCheckPoint {
  double t;
  double lambda;
  double error;      // |g(lambda t)/g(t) - lambda^rho|
  double tolerance;  // 5 max(|rho|, 1) / log t
};

struct IndexCheck {
  std::vector<IndexCheckPoint> points;
  bool within_tolerance = true;
  /// Error non-increasing over the final ten grid points, per lambda.
  bool final_decade_monotone = true;
};

IndexCheck verify_index(const RegVarFunction& g, const std::vector<double>& lambdas = {0.5, 2.0, 3.0},
                        int k_lo = 10, int k_hi = 40);

/// G(t) = int_0^t g(s) ds. Exact for power_log with q = 0; otherwise adaptive
/// Gauss-Kronrod over the panels [0,1], [1,2], [2,4], ... whose prefix
/// integrals are cached and shared between copies.
class KaramataPrimitive {
 public:
  explicit KaramataPrimitive(RegVarFunction g);

  double operator()(double t) const;
  const RegVarFunction& source() const noexcept { return g_; }
  bool exact() const noexcept { return exact_; }

  /// Closed-form large-t model when one is known for the source family.
  std::optional<double> asymptotic_model(double t) const;

  /// G(0), G(1), ..., G(M).
  std::vector<double> at_integers(std::size_t max_n) const;

 private:
  struct Cache;
  double panel_prefix(std::size_t panel) const;

  RegVarFunction g_;
  bool exact_ = false;
  std::shared_ptr<Cache> cache_;
};

KaramataPrimitive karamata_integral(const RegVarFunction& g);

/// t g(t) / G(t)
double karamata_ratio(const KaramataPrimitive& primitive, double t);

}  // namespace lorentz
