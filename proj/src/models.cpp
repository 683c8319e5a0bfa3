#include "lorentz/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>

#include "lorentz/error.hpp"
#include "lorentz/special.hpp"
#include "lorentz/text.hpp"

namespace lorentz::models {

using std::numbers::pi;

// --- Riemann-von Mangoldt ---------------------------------------------------

double rvm_count(double lambda) {
  const double x = lambda / (2.0 * pi);
  if (!(x > std::numbers::e)) return 0.0;
  return 2.0 * x * (std::log(x) - 1.0);
}

CountingFunction rvm_counting() {
  return CountingFunction::model([](double mu) { return rvm_count(1.0 / mu); }, "rvm");
}

SpectralSequence zeta_rvm_sequence(std::size_t m) {
  if (m < 2) throw Error(ErrorKind::domain, "zeta-rvm needs M >= 2");
  return sequence_from_counting(rvm_counting(), m);
}

// --- zeta zero tables ------------------------------------------------------

std::vector<double> read_zeros(std::istream& in, const std::string& source) {
  std::vector<double> zeros;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = text::trim(s);
    if (s.empty()) continue;
    double v;
    try {
      v = text::parse_double(s);
    } catch (const Error& e) {
      throw Error(ErrorKind::parse, source + ":" + std::to_string(lineno) + ": '" + std::string(s) + "' is not a number");
    }
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::parse, source + ":" + std::to_string(lineno) + ": ordinate must be positive");
    if (!zeros.empty() && v < zeros.back())
      throw Error(ErrorKind::not_ascending, source + ":" + std::to_string(lineno) + ": " + text::format_double(v) +
                                                " follows " + text::format_double(zeros.back()));
    zeros.push_back(v);
  }
  if (zeros.empty()) throw Error(ErrorKind::empty_input, source + ": no zeros");
  return zeros;
}

SpectralSequence zeros_to_sequence(const std::vector<double>& zeros, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::domain, "M must be positive");
  std::vector<double> out;
  out.reserve(std::min(m, 2 * zeros.size()));
  for (double z : zeros) {
    for (int twice = 0; twice < 2 && out.size() < m; ++twice) out.push_back(1.0 / z);
    if (out.size() >= m) break;
  }
  return SpectralSequence::singular(std::move(out));
}

SpectralSequence zeta_file_sequence(const std::string& path, std::size_t m) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  return zeros_to_sequence(read_zeros(in, path), m);
}

// --- Podles sphere x torus ---------------------------------------------------

double q_number(double x, double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::domain, "q must lie in (0, 1)");
  // (q^x - q^-x)/(q - q^-1) = sinh(x log q) / sinh(log q)
  const double l = std::log(q);
  const double v = std::sinh(x * l) / std::sinh(l);
  if (!std::isfinite(v)) throw Error(ErrorKind::overflow, "q-number [" + text::format_double(x) + "]_q overflows");
  return v;
}

std::uint64_t r2(std::uint64_t n) {
  if (n == 0) return 1;
  std::uint64_t prod = 1;
  while (n % 2 == 0) n /= 2;
  for (std::uint64_t p = 3; p * p <= n; p += 2) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (p % 4 == 1)
      prod *= static_cast<std::uint64_t>(e + 1);
    else if (e % 2)
      return 0;
  }
  if (n > 1) {
    if (n % 4 == 1)
      prod *= 2;
    else
      return 0;
  }
  return 4 * prod;
}

std::vector<std::uint32_t> r2_table(std::uint64_t n_max) {
  std::vector<std::uint32_t> spf(n_max + 1, 0);
  for (std::uint64_t i = 2; i <= n_max; ++i) {
    if (spf[i]) continue;
    for (std::uint64_t j = i; j <= n_max; j += i)
      if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);
  }
  std::vector<std::uint32_t> out(n_max + 1, 0);
  out[0] = 1;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    std::uint64_t m = n, prod = 1;
    bool zero = false;
    while (m > 1) {
      const std::uint64_t p = spf[m];
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      if (p % 4 == 1)
        prod *= static_cast<std::uint64_t>(e + 1);
      else if (p % 4 == 3 && e % 2) {
        zero = true;
        break;
      }
    }
    out[n] = zero ? 0 : static_cast<std::uint32_t>(4 * prod);
  }
  return out;
}

std::uint64_t AggregatedSpectrum::total() const {
  std::uint64_t t = 0;
  for (auto m : multiplicities) t += m;
  return t;
}

std::uint64_t AggregatedSpectrum::count_below(double lambda) const {
  const auto it = std::lower_bound(values.begin(), values.end(), lambda);
  std::uint64_t t = 0;
  for (auto i = values.begin(); i != it; ++i) t += multiplicities[static_cast<std::size_t>(i - values.begin())];
  return t;
}

namespace {

void check_podles(double q, double lambda_max) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::domain, "Podles parameter q must lie in (0, 1)");
  if (!(lambda_max >= 1.0) || !std::isfinite(lambda_max))
    throw Error(ErrorKind::domain, "lambda_max must be at least [1]_q = 1");
}

std::vector<std::pair<double, std::uint64_t>> aggregate(std::vector<std::pair<double, std::uint64_t>> raw) {
  std::sort(raw.begin(), raw.end());
  std::vector<std::pair<double, std::uint64_t>> out;
  for (const auto& [v, m] : raw) {
    if (!out.empty() && out.back().first == v)
      out.back().second += m;
    else
      out.emplace_back(v, m);
  }
  return out;
}

}  // namespace

AggregatedSpectrum podles_torus_spectrum(double q, double lambda_max) {
  check_podles(q, lambda_max);
  const auto n_max = static_cast<std::uint64_t>(std::floor(lambda_max));
  const auto r2s = r2_table(n_max);
  std::vector<std::pair<double, std::uint64_t>> raw;
  // x = l + 1/2 runs over the positive integers; [x]_q increases with x.
  for (std::uint64_t x = 1;; ++x) {
    const double base = q_number(static_cast<double>(x), q);
    if (base > lambda_max) break;
    const std::uint64_t dirac_mult = 2 * x;  // 2l + 1
    for (std::uint64_t n = 0; n <= n_max; ++n) {
      const double v = base + static_cast<double>(n);
      if (v > lambda_max) break;
      if (r2s[n]) raw.emplace_back(v, dirac_mult * r2s[n]);
    }
  }
  AggregatedSpectrum out;
  for (const auto& [v, m] : aggregate(std::move(raw))) {
    out.values.push_back(v);
    out.multiplicities.push_back(m);
  }
  return out;
}

std::vector<std::pair<double, std::uint64_t>> podles_brute_force(double q, double lambda_max) {
  check_podles(q, lambda_max);
  const auto r = static_cast<long long>(std::floor(std::sqrt(lambda_max)));
  std::vector<std::pair<double, std::uint64_t>> raw;
  for (int twice_l = 1;; twice_l += 2) {
    const double l = 0.5 * twice_l;
    const double base = q_number(l + 0.5, q);
    if (base > lambda_max) break;
    for (long long k1 = -r; k1 <= r; ++k1)
      for (long long k2 = -r; k2 <= r; ++k2) {
        const double v = base + static_cast<double>(k1 * k1 + k2 * k2);
        if (v <= lambda_max) raw.emplace_back(v, static_cast<std::uint64_t>(twice_l + 1));
      }
  }
  return aggregate(std::move(raw));
}

CountingFunction podles_counting(double q, double lambda_max) {
  const auto spec = podles_torus_spectrum(q, lambda_max);
  std::vector<double> values;
  std::vector<std::uint64_t> mult;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const double v = 1.0 / spec.values[i];
    if (!values.empty() && values.back() == v)
      mult.back() += spec.multiplicities[i];
    else {
      values.push_back(v);
      mult.push_back(spec.multiplicities[i]);
    }
  }
  return CountingFunction::from_runs(std::move(values), std::move(mult), "podles");
}

SpectralSequence podles_torus_sequence(double q, double lambda_max, std::uint64_t max_entries) {
  const auto spec = podles_torus_spectrum(q, lambda_max);
  const auto total = spec.total();
  if (total > max_entries)
    throw Error(ErrorKind::overflow, "Podles spectrum up to " + text::format_double(lambda_max) + " has " +
                                         std::to_string(total) + " entries (limit " + std::to_string(max_entries) + ")");
  std::vector<double> out;
  out.reserve(total);
  for (std::size_t i = 0; i < spec.values.size(); ++i) out.insert(out.end(), spec.multiplicities[i], 1.0 / spec.values[i]);
  return SpectralSequence::singular(std::move(out));
}

// --- Weyl-law constants --------------------------------------------------

namespace {

double simon_formula(int n, double inv_alpha) {
  const double half = 0.5 * n;
  return std::pow(half + inv_alpha, n - 1) / special::factorial(n - 1) * std::pow(pi, -half) *
         special::gamma(inv_alpha + 1.0) / special::gamma(half + inv_alpha + 1.0);
}

}  // namespace

double simon_constant(int n, double alpha) {
  if (n < 2) throw Error(ErrorKind::domain, "c(n, alpha) needs n >= 2");
  if (!(alpha > 0.0)) throw Error(ErrorKind::domain, "c(n, alpha) needs alpha > 0");
  if (std::isinf(alpha))
    return 2.0 * std::pow(n, n) / special::factorial(n) * std::pow(2.0 * pi, -n) * special::unit_ball_volume(n);
  return simon_formula(n, 1.0 / alpha);
}

double simon_constant_limit_form(int n) {
  if (n < 2) throw Error(ErrorKind::domain, "c(n, alpha) needs n >= 2");
  return simon_formula(n, 0.0);
}

CuspConstants cusp_constants(int n) {
  if (n < 2) throw Error(ErrorKind::domain, "cusp constants need n >= 2");
  const double f = std::ldexp(1.0, n / 2) * std::pow(2.0 * pi, -0.5 * n);
  return {f * special::unit_ball_volume(n), f * special::unit_sphere_area(n)};
}

// --- synthetic sequences -------------------------------------------------

Perturbation parse_perturbation(std::string_view s) {
  s = text::trim(s);
  const auto [head, rest] = text::split_head(s);
  const auto args = text::split(rest, ';');
  auto bad = [&](const char* why) { return Error(ErrorKind::parse, "perturbation '" + std::string(s) + "': " + why); };
  if (head == "none") return NoPerturbation{};
  if (head == "og") {
    if (rest.empty()) return SmallPerturbation{};
    return SmallPerturbation{text::parse_double(rest)};
  }
  if (head == "osc") {
    Oscillation o;
    if (!rest.empty()) o.a = text::parse_double(args[0]);
    if (args.size() > 1) o.period = text::parse_double(args[1]);
    if (args.size() > 2) throw bad("expected osc:<a>[;<period>]");
    if (!(o.a >= 0.0 && o.a < 1.0) || !(o.period > 0.0)) throw bad("need 0 <= a < 1 and period > 0");
    return o;
  }
  if (head == "finite") {
    if (args.size() != 2) throw bad("expected finite:<K>;<height>");
    const auto k = text::parse_int(args[0]);
    if (k < 0) throw bad("K must be non-negative");
    return FiniteRank{static_cast<std::size_t>(k), text::parse_double(args[1])};
  }
  throw bad("unknown kind");
}

std::string describe(const Perturbation& p) {
  struct V {
    std::string operator()(const NoPerturbation&) const { return "none"; }
    std::string operator()(const SmallPerturbation& x) const { return "og:" + text::format_double(x.a); }
    std::string operator()(const Oscillation& x) const {
      return "osc:" + text::format_double(x.a) + ";" + text::format_double(x.period);
    }
    std::string operator()(const FiniteRank& x) const {
      return "finite:" + std::to_string(x.k) + ";" + text::format_double(x.height);
    }
  };
  return std::visit(V{}, p);
}

namespace {

std::vector<double> planted_values(double c, const RegVarFunction& g, std::size_t m, const Perturbation& p) {
  if (!(c > 0.0)) throw Error(ErrorKind::domain, "planted constant must be positive");
  if (m == 0) throw Error(ErrorKind::domain, "M must be positive");
  std::vector<double> v(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double jd = static_cast<double>(j);
    double f = 1.0;
    if (const auto* sp = std::get_if<SmallPerturbation>(&p)) f = 1.0 + sp->a / std::log(jd + 3.0);
    if (const auto* os = std::get_if<Oscillation>(&p)) f = 1.0 + os->a * std::cos(2.0 * pi * std::log2(jd + 1.0) / os->period);
    v[j] = c * g(jd) * f;
  }
  if (const auto* fr = std::get_if<FiniteRank>(&p)) {
    if (!(fr->height >= 0.0)) throw Error(ErrorKind::domain, "finite-rank height must be non-negative");
    v.insert(v.end(), fr->k, fr->height);
    std::sort(v.begin(), v.end(), std::greater<>());
    v.resize(m);
  }
  for (std::size_t j = 1; j < m; ++j)
    if (v[j] > v[j - 1])
      throw Error(ErrorKind::domain, "planted sequence (" + describe(p) + ") is not non-increasing at j=" +
                                         std::to_string(j) + "; lower the amplitude or lengthen the period");
  return v;
}

}  // namespace

SpectralSequence planted_sequence(double c, const RegVarFunction& g, std::size_t m, const Perturbation& p) {
  return SpectralSequence::singular(planted_values(c, g, m, p));
}

SpectralSequence planted_sequence(double c, double rho, double q, std::size_t m, const Perturbation& p) {
  return planted_sequence(c, make_power_log(rho, q), m, p);
}

SpectralSequence planted_signed(double c_plus, double c_minus, const RegVarFunction& g, std::size_t m,
                                const Perturbation& p) {
  std::vector<double> plus, minus;
  if (c_plus > 0.0) plus = planted_values(c_plus, g, m, p);
  if (c_minus > 0.0) minus = planted_values(c_minus, g, m, NoPerturbation{});
  if (!(c_plus >= 0.0) || !(c_minus >= 0.0)) throw Error(ErrorKind::domain, "planted constants must be non-negative");
  return SpectralSequence::signed_eigen(std::move(plus), std::move(minus));
}

SpectralSequence generator_sequence(const RegVarFunction& g, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::domain, "M must be positive");
  std::vector<double> v(m);
  for (std::size_t j = 0; j < m; ++j) v[j] = g(static_cast<double>(j));
  // g need only be monotone from g.monotone_from(); the few earlier values are
  // put in order, which cannot move any asymptotic statistic.
  std::sort(v.begin(), v.end(), std::greater<>());
  return SpectralSequence::singular(std::move(v));
}

// --- specs -----------------------------------------------------------------

namespace {

std::size_t parse_count(std::string_view s) {
  const auto v = text::parse_int(s);
  if (v <= 0) throw Error(ErrorKind::parse, "count must be positive: '" + std::string(s) + "'");
  return static_cast<std::size_t>(v);
}

struct PodlesArgs {
  double q, lambda_max;
};

PodlesArgs parse_podles(std::string_view rest) {
  const auto a = text::split(rest, ',');
  if (a.size() != 2) throw Error(ErrorKind::parse, "expected podles:<q>,<lambda_max>");
  return {text::parse_double(a[0]), text::parse_double(a[1])};
}

}  // namespace

SpectralSequence build_model(std::string_view spec) {
  const auto [head, rest] = text::split_head(text::trim(spec));
  try {
    if (head == "zeta-rvm") return zeta_rvm_sequence(parse_count(rest));
    if (head == "zeta-file") {
      const auto comma = rest.rfind(',');
      if (comma == std::string_view::npos) throw Error(ErrorKind::parse, "expected zeta-file:<path>,<M>");
      return zeta_file_sequence(std::string(rest.substr(0, comma)), parse_count(rest.substr(comma + 1)));
    }
    if (head == "podles") {
      const auto [q, lmax] = parse_podles(rest);
      return podles_torus_sequence(q, lmax);
    }
    if (head == "planted") {
      const auto a = text::split(rest, ',');
      if (a.size() < 3 || a.size() > 5) throw Error(ErrorKind::parse, "expected planted:<c>,<rho>,<q>[,<perturbation>[,<M>]]");
      const Perturbation p = a.size() > 3 ? parse_perturbation(a[3]) : Perturbation{NoPerturbation{}};
      const std::size_t m = a.size() > 4 ? parse_count(a[4]) : default_prefix;
      return planted_sequence(text::parse_double(a[0]), text::parse_double(a[1]), text::parse_double(a[2]), m, p);
    }
    if (head == "planted-signed") {
      const auto a = text::split(rest, ',');
      if (a.size() < 4 || a.size() > 5) throw Error(ErrorKind::parse, "expected planted-signed:<c+>,<c->,<rho>,<q>[,<M>]");
      const std::size_t m = a.size() > 4 ? parse_count(a[4]) : default_prefix;
      return planted_signed(text::parse_double(a[0]), text::parse_double(a[1]),
                            make_power_log(text::parse_double(a[2]), text::parse_double(a[3])), m);
    }
    if (head == "generator") {
      const auto comma = rest.rfind(',');
      if (comma == std::string_view::npos) throw Error(ErrorKind::parse, "expected generator:<gspec>,<M>");
      return generator_sequence(parse_rv_spec(rest.substr(0, comma)), parse_count(rest.substr(comma + 1)));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) throw Error(ErrorKind::parse, "model '" + std::string(spec) + "': " + e.what());
    throw;
  }
  throw Error(ErrorKind::parse, "unknown model '" + std::string(head) + "'");
}

void write_model_csv(std::string_view spec, std::ostream& out) {
  const auto [head, rest] = text::split_head(text::trim(spec));
  if (head != "podles") {
    write_spectrum_csv(out, build_model(spec));
    return;
  }
  const auto [q, lmax] = parse_podles(rest);
  const auto agg = podles_torus_spectrum(q, lmax);
  out << "index,value\n";
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < agg.values.size(); ++i) {
    const std::string v = text::format_double(1.0 / agg.values[i]);
    for (std::uint64_t r = 0; r < agg.multiplicities[i]; ++r) out << index++ << ',' << v << '\n';
  }
}

CountingFunction parse_counting_spec(std::string_view spec) {
  const auto [head, rest] = text::split_head(text::trim(spec));
  if (head == "rvm") return rvm_counting();
  if (head == "podles") {
    const auto [q, lmax] = parse_podles(rest);
    return podles_counting(q, lmax);
  }
  if (head == "smalllam") {
    const auto a = text::split(rest, ',');
    if (a.size() != 3) throw Error(ErrorKind::parse, "expected smalllam:<c>,<p>,<q>");
    const double c = text::parse_double(a[0]), p = text::parse_double(a[1]), q = text::parse_double(a[2]);
    if (!(c > 0) || !(p > 0)) throw Error(ErrorKind::domain, "smalllam needs c > 0 and p > 0");
    const double cut = std::exp(-std::max(1.0, 1.0 - q / p));
    return CountingFunction::model(
        [c, p, q, cut](double lam) {
          if (lam >= cut) return 0.0;
          const double u = -std::log(lam);
          return c * std::exp(p * u) * std::pow(u, q);
        },
        std::string(spec));
  }
  throw Error(ErrorKind::parse, "unknown counting model '" + std::string(head) + "'");
}

}  // namespace lorentz::models
