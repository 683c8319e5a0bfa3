#include "lorentz/rv.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <variant>

#include "lorentz/error.hpp"
#include "lorentz/quadrature.hpp"
#include "lorentz/text.hpp"

namespace lorentz {
namespace detail {

struct PowerLog {
  double rho, q;
};
struct PurePower {
  double rho;
};
struct Reciprocal {
  RegVarFunction source;
};
struct Tabulated {
  std::vector<double> x;  // log(1 + t)
  std::vector<double> y;  // log g(t)
  double tail_index;
};
struct Composed {
  std::function<double(double)> fn;
};

struct RvData {
  std::variant<PowerLog, PurePower, Reciprocal, Tabulated, Composed> body;
  double index = 0.0;
  double monotone_from = 0.0;
  std::string name;
};

}  // namespace detail

namespace {

using detail::RvData;

RegVarFunction wrap(RvData data) {
  return RegVarFunction(std::make_shared<const RvData>(std::move(data)));
}

int sign(double x) { return (x > 0) - (x < 0); }

// Geometric scan grid used to locate the start of the monotone regime.
std::vector<double> scan_grid() {
  std::vector<double> grid{0.0};
  for (int i = -40; i <= 240; ++i) grid.push_back(std::exp2(i / 4.0));
  return grid;
}

// First grid point after which fn moves in `direction` between every pair of
// consecutive grid points.
double scan_monotone_from(const std::function<double(double)>& fn, int direction) {
  if (direction == 0) return 0.0;
  const auto grid = scan_grid();
  double prev = fn(grid[0]);
  std::size_t last_bad = 0;
  bool any_bad = false;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = fn(grid[i]);
    if (std::isfinite(cur) && std::isfinite(prev) && direction * (cur - prev) < 0) {
      last_bad = i;
      any_bad = true;
    }
    prev = cur;
  }
  return any_bad ? grid[last_bad] : 0.0;
}

double power_log_monotone_from(double rho, double q) {
  const int direction = rho != 0.0 ? sign(rho) : sign(q);
  if (direction == 0) return 0.0;
  // Sign of d/dt log g, scaled by the positive factor (t+1)(t+2)log(t+2).
  const auto psi = [rho, q](double t) { return rho * (t + 2) * std::log(t + 2) + q * (t + 1); };
  const auto grid = scan_grid();
  std::size_t last_bad = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (direction * psi(grid[i]) < 0) last_bad = i;
  if (last_bad == grid.size()) return 0.0;
  if (last_bad + 1 == grid.size()) return grid.back();
  double lo = grid[last_bad], hi = grid[last_bad + 1];
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (direction * psi(mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

std::string num(double x) { return text::format_double(x); }

}  // namespace

double RegVarFunction::eval(double t) const {
  if (!(t >= 0.0)) throw Error(ErrorKind::domain, "RV function evaluated at t = " + num(t));
  return std::visit(
      [t](const auto& body) -> double {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, detail::PowerLog>) {
          const double base = std::pow(t + 1.0, body.rho);
          return body.q == 0.0 ? base : base * std::pow(std::log(t + 2.0), body.q);
        } else if constexpr (std::is_same_v<T, detail::PurePower>) {
          return std::pow(t, body.rho);
        } else if constexpr (std::is_same_v<T, detail::Reciprocal>) {
          return 1.0 / body.source.eval(t);
        } else if constexpr (std::is_same_v<T, detail::Tabulated>) {
          const double x = std::log1p(t);
          const auto& xs = body.x;
          const auto& ys = body.y;
          if (x >= xs.back()) return std::exp(ys.back() + body.tail_index * (x - xs.back()));
          std::size_t i = 0;
          if (x <= xs.front()) {
            i = 0;
          } else {
            i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
          }
          const double slope = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
          return std::exp(ys[i] + slope * (x - xs[i]));
        } else {
          return body.fn(t);
        }
      },
      data_->body);
}

double RegVarFunction::index() const noexcept { return data_->index; }
double RegVarFunction::monotone_from() const noexcept { return data_->monotone_from; }
const std::string& RegVarFunction::name() const noexcept { return data_->name; }

RvFamily RegVarFunction::family() const noexcept {
  switch (data_->body.index()) {
    case 0: return RvFamily::power_log;
    case 1: return RvFamily::pure_power;
    case 2: return RvFamily::reciprocal;
    case 3: return RvFamily::tabulated;
    default: return RvFamily::composed;
  }
}

std::optional<PowerLogParams> RegVarFunction::power_log_params() const noexcept {
  if (const auto* p = std::get_if<detail::PowerLog>(&data_->body)) return PowerLogParams{p->rho, p->q};
  return std::nullopt;
}

const RegVarFunction* RegVarFunction::reciprocal_source() const noexcept {
  if (const auto* r = std::get_if<detail::Reciprocal>(&data_->body)) return &r->source;
  return nullptr;
}

RegVarFunction make_power_log(double rho, double q) {
  RvData d;
  d.body = detail::PowerLog{rho, q};
  d.index = rho;
  d.monotone_from = power_log_monotone_from(rho, q);
  d.name = "power-log:" + num(rho) + "," + num(q);
  return wrap(std::move(d));
}

RegVarFunction make_power(double rho) {
  if (!(rho > 0)) throw Error(ErrorKind::domain, "pure power needs rho > 0, got " + num(rho));
  RvData d;
  d.body = detail::PurePower{rho};
  d.index = rho;
  d.name = "power:" + num(rho);
  return wrap(std::move(d));
}

RegVarFunction make_tabulated(std::vector<double> t, std::vector<double> g, std::optional<double> index) {
  if (t.size() != g.size() || t.size() < 2)
    throw Error(ErrorKind::domain, "table needs at least two (t, g) rows of equal length");
  detail::Tabulated tab;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] >= 0) || !(g[i] > 0)) throw Error(ErrorKind::domain, "table rows need t >= 0 and g > 0");
    if (i > 0 && !(t[i] > t[i - 1])) throw Error(ErrorKind::not_ascending, "table t column must increase");
    tab.x.push_back(std::log1p(t[i]));
    tab.y.push_back(std::log(g[i]));
  }
  const std::size_t n = tab.x.size();
  tab.tail_index = index.value_or((tab.y[n - 1] - tab.y[n - 2]) / (tab.x[n - 1] - tab.x[n - 2]));

  // Beyond which node the table moves monotonically in the index direction.
  const int direction = sign(tab.tail_index);
  double mono = 0.0;
  if (direction != 0)
    for (std::size_t i = 1; i < n; ++i)
      if (direction * (tab.y[i] - tab.y[i - 1]) < 0) mono = t[i];

  RvData d;
  d.index = tab.tail_index;
  d.monotone_from = mono;
  d.name = "table(" + std::to_string(n) + " rows)";
  d.body = std::move(tab);
  return wrap(std::move(d));
}

RegVarFunction make_composed(std::function<double(double)> fn, double index, double monotone_from,
                             std::string name) {
  RvData d;
  d.body = detail::Composed{std::move(fn)};
  d.index = index;
  d.monotone_from = monotone_from;
  d.name = std::move(name);
  return wrap(std::move(d));
}

RegVarFunction scaled(const RegVarFunction& g, double factor) {
  if (!(factor > 0)) throw Error(ErrorKind::domain, "scale factor must be positive");
  return make_composed([g, factor](double t) { return factor * g(t); }, g.index(), g.monotone_from(),
                       "scale:" + num(factor) + "," + g.name());
}

RegVarFunction shifted(const RegVarFunction& g, double shift) {
  if (!(shift >= 0)) throw Error(ErrorKind::domain, "shift must be non-negative");
  return make_composed([g, shift](double t) { return g(t + shift); }, g.index(),
                       std::max(0.0, g.monotone_from() - shift), "shift:" + num(shift) + "," + g.name());
}

RegVarFunction reciprocal_rv(const RegVarFunction& g) {
  if (const auto* src = g.reciprocal_source()) return *src;
  if (!(g.index() < 0))
    throw Error(ErrorKind::domain, "reciprocal_rv expects a negative index, got " + num(g.index()));
  RvData d;
  d.body = detail::Reciprocal{g};
  d.index = -g.index();
  d.monotone_from = g.monotone_from();
  d.name = "reciprocal:" + g.name();
  return wrap(std::move(d));
}

RegVarFunction exact_inverse(const RegVarFunction& h) {
  const double p = h.index();
  if (!(p > 0)) throw Error(ErrorKind::not_invertible, "index " + num(p) + " is not positive");
  const double t0 = h.monotone_from();
  const double h0 = h(t0);
  auto fn = [h, t0, h0, p](double y) -> double {
    if (y <= 0) return 0.0;
    if (y <= h0) return t0 * (y / h0);
    // Bracket around the pure-power guess, then Illinois regula falsi on
    // log h against log t, where the function is nearly linear with slope p.
    double guess = std::max({2.0 * t0, 1.0, std::pow(y, 1.0 / p)});
    if (!std::isfinite(guess)) throw Error(ErrorKind::overflow, "inverse bracket overflow");
    double lo, hi;
    if (h(guess) < y) {
      lo = guess;
      double factor = 2.0;
      hi = guess * factor;
      while (h(hi) < y) {
        lo = hi;
        factor *= factor;
        hi *= factor;
        if (!(hi < 1e300)) throw Error(ErrorKind::overflow, "inverse bracket overflow");
      }
    } else {
      hi = guess;
      lo = 0.5 * guess;
      while (lo > t0 && h(lo) >= y) {
        hi = lo;
        lo *= 0.5;
      }
      if (lo <= t0) lo = t0;
    }
    if (lo <= 0.0) {
      lo = hi;
      while (h(lo) >= y && lo > 1e-300) lo *= 0.5;
    }
    const double ly = std::log(y);
    double ua = std::log(lo), ub = std::log(hi);
    double fa = std::log(h(lo)) - ly, fb = std::log(h(hi)) - ly;
    if (fb == 0.0) return hi;
    int side = 0;
    for (int it = 0; it < 200 && ub - ua > 1e-15 * std::max(1.0, std::abs(ub)); ++it) {
      double uc = (fa == fb) ? 0.5 * (ua + ub) : ub - fb * (ub - ua) / (fb - fa);
      if (!(uc > ua && uc < ub)) uc = 0.5 * (ua + ub);
      const double fc = std::log(h(std::exp(uc))) - ly;
      if (fc == 0.0) return std::exp(uc);
      if (fc < 0) {
        ua = uc;
        fa = fc;
        if (side == -1) fb *= 0.5;
        side = -1;
      } else {
        ub = uc;
        fb = fc;
        if (side == 1) fa *= 0.5;
        side = 1;
      }
    }
    return std::exp(std::abs(fa) < std::abs(fb) ? ua : ub);
  };
  return make_composed(std::move(fn), 1.0 / p, 0.0, "inverse:" + h.name());
}

RegVarFunction asymptotic_inverse(const RegVarFunction& h) {
  const double p = h.index();
  if (!(p > 0)) throw Error(ErrorKind::not_invertible, "index " + num(p) + " is not positive");

  std::optional<PowerLogParams> params = h.power_log_params();
  if (!params) {
    if (const auto* src = h.reciprocal_source())
      if (auto sp = src->power_log_params()) params = PowerLogParams{-sp->rho, -sp->q};
  }
  if (params) {
    const double q = params->q;
    const double coef = std::pow(p, q / p);
    auto fn = [coef, p, q](double t) { return coef * std::pow(t, 1.0 / p) * std::pow(std::log(t + 2.0), -q / p); };
    const double mono = scan_monotone_from(fn, 1);
    return make_composed(fn, 1.0 / p, mono, "asym-inverse:" + h.name());
  }
  if (h.family() == RvFamily::pure_power)
    return make_composed([p](double t) { return std::pow(t, 1.0 / p); }, 1.0 / p, 0.0, "inverse:" + h.name());
  return exact_inverse(h);
}

namespace {

RegVarFunction load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open table '" + path + "'");
  std::vector<double> t, g;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = text::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto cols = text::split(s, ',');
    if (cols.size() != 2) throw Error(ErrorKind::parse, path + ":" + std::to_string(lineno) + ": expected two columns");
    if (lineno == 1 && text::trim(cols[0]) == "t") continue;
    try {
      t.push_back(text::parse_double(cols[0]));
      g.push_back(text::parse_double(cols[1]));
    } catch (const Error& e) {
      throw Error(ErrorKind::parse, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return make_tabulated(std::move(t), std::move(g));
}

}  // namespace

RegVarFunction parse_rv_spec(std::string_view spec) {
  const auto [head, rest] = text::split_head(text::trim(spec));
  const auto bad = [&](const std::string& why) {
    return Error(ErrorKind::parse, "rv spec '" + std::string(spec) + "': " + why);
  };
  if (head == "power-log") {
    const auto args = text::split(rest, ',');
    if (args.size() != 2) throw bad("expected power-log:<rho>,<q>");
    return make_power_log(text::parse_double(args[0]), text::parse_double(args[1]));
  }
  if (head == "power") return make_power(text::parse_double(rest));
  if (head == "reciprocal") return reciprocal_rv(parse_rv_spec(rest));
  if (head == "table") {
    if (rest.empty()) throw bad("missing path");
    return load_table(std::string(rest));
  }
  if (head == "scale" || head == "shift") {
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos) throw bad("expected " + std::string(head) + ":<x>,<spec>");
    const double x = text::parse_double(rest.substr(0, comma));
    const auto inner = parse_rv_spec(rest.substr(comma + 1));
    return head == "scale" ? scaled(inner, x) : shifted(inner, x);
  }
  throw bad("unknown family '" + std::string(head) + "'");
}

IndexCheck verify_index(const RegVarFunction& g, const std::vector<double>& lambdas, int k_lo, int k_hi) {
  IndexCheck out;
  const double rho = g.index();
  for (double lam : lambdas) {
    std::vector<double> errors;
    for (int k = k_lo; k <= k_hi; ++k) {
      const double t = std::exp2(k);
      const double err = std::abs(g(lam * t) / g(t) - std::pow(lam, rho));
      const double tol = 5.0 * std::max(std::abs(rho), 1.0) / std::log(t);
      out.points.push_back({t, lam, err, tol});
      if (err > tol) out.within_tolerance = false;
      errors.push_back(err);
    }
    const std::size_t n = errors.size();
    for (std::size_t i = n > 10 ? n - 10 : 1; i < n; ++i)
      if (errors[i] > errors[i - 1] * (1 + 1e-9) + 1e-15) out.final_decade_monotone = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Karamata primitive

struct KaramataPrimitive::Cache {
  mutable std::shared_mutex mutex;
  std::vector<double> prefix{0.0};  // prefix[k] = int_0^{edge(k)} g
};

namespace {

double panel_edge(std::size_t k) { return k == 0 ? 0.0 : std::ldexp(1.0, static_cast<int>(k) - 1); }

double integrate(const RegVarFunction& g, double a, double b) {
  const auto r = quad::gauss_kronrod([&g](double s) { return g(s); }, a, b, 1e-14, 0.0);
  return r.value;
}

// Five-point Gauss-Legendre on [a, a+1]; ample for the smooth tail panels.
double gauss5(const RegVarFunction& g, double a) {
  static constexpr double x[] = {0.0, 0.5384693101056831, 0.9061798459386640};
  static constexpr double w[] = {0.5688888888888889, 0.4786286704993665, 0.2369268850561891};
  const double c = a + 0.5;
  double s = w[0] * g(c);
  for (int i = 1; i < 3; ++i) s += w[i] * (g(c - 0.5 * x[i]) + g(c + 0.5 * x[i]));
  return 0.5 * s;
}

}  // namespace

KaramataPrimitive::KaramataPrimitive(RegVarFunction g) : g_(std::move(g)), cache_(std::make_shared<Cache>()) {
  if (auto p = g_.power_log_params(); p && p->q == 0.0) exact_ = true;
  if (g_.family() == RvFamily::pure_power) exact_ = true;
}

double KaramataPrimitive::panel_prefix(std::size_t panel) const {
  {
    std::shared_lock lock(cache_->mutex);
    if (panel < cache_->prefix.size()) return cache_->prefix[panel];
  }
  std::unique_lock lock(cache_->mutex);
  auto& prefix = cache_->prefix;
  while (prefix.size() <= panel) {
    const std::size_t k = prefix.size();
    const double next = prefix.back() + integrate(g_, panel_edge(k - 1), panel_edge(k));
    if (!std::isfinite(next)) throw Error(ErrorKind::non_integrable, "primitive overflow near t = " + num(panel_edge(k)));
    prefix.push_back(next);
  }
  return prefix[panel];
}

double KaramataPrimitive::operator()(double t) const {
  if (!(t >= 0.0)) throw Error(ErrorKind::domain, "G evaluated at t = " + num(t));
  if (t == 0.0) return 0.0;
  double value;
  if (exact_) {
    if (auto p = g_.power_log_params()) {
      const double a = p->rho + 1.0;
      value = a == 0.0 ? std::log1p(t) : std::expm1(a * std::log1p(t)) / a;
    } else {
      const double a = g_.index() + 1.0;
      value = std::pow(t, a) / a;
    }
  } else {
    const std::size_t k = t < 1.0 ? 0 : static_cast<std::size_t>(std::ilogb(t)) + 1;
    value = panel_prefix(k);
    if (t > panel_edge(k)) value += integrate(g_, panel_edge(k), t);
  }
  if (!std::isfinite(value)) throw Error(ErrorKind::non_integrable, "primitive overflow at t = " + num(t));
  return value;
}

std::optional<double> KaramataPrimitive::asymptotic_model(double t) const {
  const auto p = g_.power_log_params();
  if (!p || !(t > 1.0)) return std::nullopt;
  const double lt = std::log(t);
  if (p->rho == -1.0 && p->q > -1.0) return std::pow(lt, p->q + 1.0) / (p->q + 1.0);
  if (p->rho > -1.0) return std::pow(t, p->rho + 1.0) * std::pow(lt, p->q) / (p->rho + 1.0);
  return std::nullopt;
}

std::vector<double> KaramataPrimitive::at_integers(std::size_t max_n) const {
  std::vector<double> out(max_n + 1, 0.0);
  if (exact_) {
    for (std::size_t n = 1; n <= max_n; ++n) out[n] = (*this)(static_cast<double>(n));
    return out;
  }
  const bool smooth = g_.family() != RvFamily::tabulated;
  // Kahan-compensated running sum, re-anchored on the cached dyadic edges.
  double sum = 0.0, comp = 0.0;
  for (std::size_t n = 0; n < max_n; ++n) {
    const double a = static_cast<double>(n);
    const double piece = (smooth && n >= 64) ? gauss5(g_, a) : integrate(g_, a, a + 1.0);
    const double y = piece - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    const std::size_t m = n + 1;
    if ((m & (m - 1)) == 0) {
      const std::size_t k = static_cast<std::size_t>(std::countr_zero(m)) + 1;
      sum = panel_prefix(k);
      comp = 0.0;
    }
    out[m] = sum;
  }
  return out;
}

KaramataPrimitive karamata_integral(const RegVarFunction& g) { return KaramataPrimitive(g); }

double karamata_ratio(const KaramataPrimitive& primitive, double t) {
  if (!(t > 0)) throw Error(ErrorKind::domain, "karamata_ratio needs t > 0");
  return t * primitive.source()(t) / primitive(t);
}

}  // namespace lorentz
