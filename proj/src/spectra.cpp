#include "lorentz/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lorentz/error.hpp"
#include "lorentz/text.hpp"

namespace lorentz {

std::string_view to_string(SpectrumKind kind) noexcept {
  switch (kind) {
    case SpectrumKind::singular: return "singular";
    case SpectrumKind::eigen_real_signed: return "eigen_real_signed";
    case SpectrumKind::eigen_complex: return "eigen_complex";
  }
  return "?";
}

namespace {

void require_sorted(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0) || !std::isfinite(v[i]))
      throw Error(ErrorKind::domain, std::string(what) + " entry " + std::to_string(i) + " is not a finite non-negative number");
    if (i > 0 && v[i] > v[i - 1])
      throw Error(ErrorKind::domain, std::string(what) + " is not non-increasing at index " + std::to_string(i));
  }
}

void require_kind(const SpectralSequence& s, SpectrumKind kind, const char* op) {
  if (s.kind() != kind)
    throw Error(ErrorKind::domain, std::string(op) + " expects a " + std::string(to_string(kind)) + " sequence");
}

std::string describe(const char* lhs, double l, double r) {
  std::ostringstream os;
  os << lhs << ": " << text::format_double(l) << " > " << text::format_double(r);
  return os.str();
}

// The label is only built for the first violation.
template <class Label>
void record(InequalityReport& rep, double lhs, double rhs, double tolerance, Label&& label) {
  ++rep.checked;
  const double slack = rhs - lhs;
  if (rep.checked == 1 || slack < rep.min_slack) rep.min_slack = slack;
  if (lhs > rhs + tolerance) {
    if (rep.violations == 0) rep.first_violation = describe(std::string(label()).c_str(), lhs, rhs);
    ++rep.violations;
  }
}

}  // namespace

SpectralSequence SpectralSequence::singular(std::vector<double> mu) {
  require_sorted(mu, "singular sequence");
  SpectralSequence s;
  s.kind_ = SpectrumKind::singular;
  s.a_ = std::move(mu);
  return s;
}

SpectralSequence SpectralSequence::signed_eigen(std::vector<double> plus, std::vector<double> minus) {
  require_sorted(plus, "positive part");
  require_sorted(minus, "negative part");
  SpectralSequence s;
  s.kind_ = SpectrumKind::eigen_real_signed;
  s.a_ = std::move(plus);
  s.b_ = std::move(minus);
  return s;
}

SpectralSequence SpectralSequence::complex_eigen(std::vector<std::complex<double>> lambda) {
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!std::isfinite(lambda[i].real()) || !std::isfinite(lambda[i].imag()))
      throw Error(ErrorKind::domain, "eigenvalue " + std::to_string(i) + " is not finite");
    if (i > 0 && std::abs(lambda[i]) > std::abs(lambda[i - 1]))
      throw Error(ErrorKind::domain, "eigenvalues not ordered by modulus at index " + std::to_string(i));
  }
  SpectralSequence s;
  s.kind_ = SpectrumKind::eigen_complex;
  s.c_ = std::move(lambda);
  return s;
}

std::size_t SpectralSequence::size() const noexcept {
  switch (kind_) {
    case SpectrumKind::singular: return a_.size();
    case SpectrumKind::eigen_real_signed: return a_.size() + b_.size();
    case SpectrumKind::eigen_complex: return c_.size();
  }
  return 0;
}

std::span<const double> SpectralSequence::values() const {
  require_kind(*this, SpectrumKind::singular, "values()");
  return a_;
}
std::span<const double> SpectralSequence::plus() const {
  require_kind(*this, SpectrumKind::eigen_real_signed, "plus()");
  return a_;
}
std::span<const double> SpectralSequence::minus() const {
  require_kind(*this, SpectrumKind::eigen_real_signed, "minus()");
  return b_;
}
std::span<const std::complex<double>> SpectralSequence::complex_values() const {
  require_kind(*this, SpectrumKind::eigen_complex, "complex_values()");
  return c_;
}

std::vector<double> SpectralSequence::merged() const {
  if (kind_ == SpectrumKind::singular) return a_;
  if (kind_ == SpectrumKind::eigen_complex) throw Error(ErrorKind::domain, "merged() is defined for real spectra only");
  std::vector<double> out;
  out.reserve(a_.size() + b_.size());
  std::size_t i = 0, j = 0;
  while (i < a_.size() || j < b_.size()) {
    if (j == b_.size() || (i < a_.size() && a_[i] >= b_[j]))
      out.push_back(a_[i++]);
    else
      out.push_back(-b_[j++]);
  }
  return out;
}

std::size_t SpectralSequence::determined_prefix() const {
  if (kind_ != SpectrumKind::eigen_real_signed || a_.empty() || b_.empty()) return size();
  const double floor = std::max(a_.back(), b_.back());
  auto count = [floor](const std::vector<double>& v) {
    return static_cast<std::size_t>(std::partition_point(v.begin(), v.end(), [floor](double x) { return x >= floor; }) -
                                    v.begin());
  };
  return count(a_) + count(b_);
}

std::vector<double> SpectralSequence::moduli() const {
  if (kind_ == SpectrumKind::eigen_complex) {
    std::vector<double> out(c_.size());
    std::transform(c_.begin(), c_.end(), out.begin(), [](auto z) { return std::abs(z); });
    return out;
  }
  auto m = merged();
  for (auto& x : m) x = std::abs(x);
  return m;
}

std::vector<std::complex<double>> SpectralSequence::partial_sums() const {
  std::vector<std::complex<double>> out{0.0};
  if (kind_ == SpectrumKind::eigen_complex) {
    out.reserve(c_.size() + 1);
    for (auto z : c_) out.push_back(out.back() + z);
    return out;
  }
  for (double x : real_partial_sums()) out.emplace_back(x);
  out.erase(out.begin());
  return out;
}

std::vector<double> SpectralSequence::real_partial_sums() const {
  if (kind_ == SpectrumKind::eigen_complex) {
    std::vector<double> out{0.0};
    for (auto z : c_) out.push_back(out.back() + z.real());
    return out;
  }
  const auto m = merged();
  std::vector<double> out(m.size() + 1, 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) out[i + 1] = out[i] + m[i];
  return out;
}

SpectralSequence SpectralSequence::scaled(double c) const {
  if (!(c >= 0)) throw Error(ErrorKind::domain, "scale factor must be non-negative");
  SpectralSequence s = *this;
  for (auto& x : s.a_) x *= c;
  for (auto& x : s.b_) x *= c;
  for (auto& z : s.c_) z *= c;
  return s;
}

SpectralSequence singular_of(const SpectralSequence& s) {
  if (s.kind() == SpectrumKind::singular) return s;
  if (s.kind() == SpectrumKind::eigen_complex)
    throw Error(ErrorKind::domain, "singular values of a non-normal spectrum are not determined by its eigenvalues");
  return SpectralSequence::singular(s.moduli());
}

double quasi_norm_g(const SpectralSequence& s, const RegVarFunction& g) {
  require_kind(s, SpectrumKind::singular, "quasi_norm_g");
  double best = 0.0;
  const auto mu = s.values();
  for (std::size_t j = 0; j < mu.size(); ++j) best = std::max(best, mu[j] / g(static_cast<double>(j)));
  return best;
}

double lorentz_norm_G(const SpectralSequence& s, const KaramataPrimitive& G) {
  require_kind(s, SpectrumKind::singular, "lorentz_norm_G");
  const auto mu = s.values();
  const auto prim = G.at_integers(mu.size());
  double best = 0.0, sum = 0.0;
  for (std::size_t n = 1; n <= mu.size(); ++n) {
    sum += mu[n - 1];
    best = std::max(best, sum / prim[n]);
  }
  return best;
}

TailStatistic quotient_norm(const SpectralSequence& s, const RegVarFunction& g, std::size_t tail_window) {
  require_kind(s, SpectrumKind::singular, "quotient_norm");
  const auto mu = s.values();
  const std::size_t m = mu.size();
  if (tail_window == 0 || tail_window > m)
    throw Error(ErrorKind::window_too_large,
                "tail window " + std::to_string(tail_window) + " does not fit a prefix of length " + std::to_string(m));
  auto window_max = [&](std::size_t lo, std::size_t hi) {
    double best = 0.0;
    for (std::size_t j = lo; j < hi; ++j) best = std::max(best, mu[j] / g(static_cast<double>(j)));
    return best;
  };
  TailStatistic out;
  out.full = window_max(0, m);
  out.tail = window_max(m - tail_window, m);
  if (2 * tail_window <= m) out.penultimate = window_max(m - 2 * tail_window, m - tail_window);
  return out;
}

std::complex<double> partial_sum(const SpectralSequence& s, std::size_t n) {
  if (n > s.size())
    throw Error(ErrorKind::prefix_exceeded,
                "partial sum of " + std::to_string(n) + " terms from a prefix of " + std::to_string(s.size()));
  if (n == 0) return 0.0;
  if (s.kind() == SpectrumKind::eigen_complex) {
    std::complex<double> sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += s.complex_values()[j];
    return sum;
  }
  const auto m = s.merged();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += m[j];
  return sum;
}

InequalityReport check_fan(const SpectralSequence& s, const SpectralSequence& t, const SpectralSequence& sum,
                           double tolerance) {
  const auto a = s.moduli(), b = t.moduli(), c = sum.moduli();
  const std::size_t m = c.size();
  auto at = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? v[i] : 0.0; };
  InequalityReport rep;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; j + k < m; ++k)
      record(rep, c[j + k], at(a, j) + at(b, k), tolerance, [&] {
        return "mu_" + std::to_string(j + k) + "(S+T) vs mu_" + std::to_string(j) + "(S)+mu_" + std::to_string(k) + "(T)";
      });
  double sc = 0.0, sa = 0.0, sb = 0.0;
  for (std::size_t n = 0; n < m; ++n) {
    sc += c[n];
    sa += at(a, n);
    sb += at(b, n);
    record(rep, sc, sa + sb, tolerance, [&] { return "partial sum N=" + std::to_string(n + 1); });
  }
  return rep;
}

InequalityReport check_weyl_modulus(const SpectralSequence& eigen, const SpectralSequence& sing, double tolerance) {
  const auto lam = eigen.moduli();
  const auto mu = sing.moduli();
  const std::size_t m = std::min(lam.size(), mu.size());
  InequalityReport rep;
  double sl = 0.0, sm = 0.0;
  for (std::size_t n = 0; n < m; ++n) {
    sl += lam[n];
    sm += mu[n];
    record(rep, sl, sm, tolerance, [&] { return "Weyl N=" + std::to_string(n + 1); });
  }
  return rep;
}

InequalityReport check_weyl_signed(const SpectralSequence& s, const SpectralSequence& t, const SpectralSequence& sum,
                                   double tolerance) {
  require_kind(s, SpectrumKind::eigen_real_signed, "check_weyl_signed");
  require_kind(t, SpectrumKind::eigen_real_signed, "check_weyl_signed");
  require_kind(sum, SpectrumKind::eigen_real_signed, "check_weyl_signed");
  InequalityReport rep;
  auto at = [](std::span<const double> v, std::size_t i) { return i < v.size() ? v[i] : 0.0; };
  auto run = [&](std::span<const double> a, std::span<const double> b, std::span<const double> c, const char* tag) {
    for (std::size_t j = 0; j < c.size(); ++j)
      for (std::size_t k = 0; j + k < c.size(); ++k)
        record(rep, c[j + k], at(a, j) + at(b, k), tolerance, [&] {
          return std::string(tag) + "_" + std::to_string(j + k) + "(S+T) vs " + std::to_string(j) + "," + std::to_string(k);
        });
  };
  run(s.plus(), t.plus(), sum.plus(), "lambda+");
  run(s.minus(), t.minus(), sum.minus(), "lambda-");
  return rep;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_complex(std::complex<double> z) {
  std::string re = text::format_double(z.real());
  std::string im = text::format_double(z.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return re + im + "j";
}

std::complex<double> parse_complex(std::string_view s) {
  s = text::trim(s);
  if (s.empty()) throw Error(ErrorKind::parse, "empty complex value");
  if (s.back() != 'j') return {text::parse_double(s), 0.0};
  s.remove_suffix(1);
  // The imaginary part starts at the last sign that is not an exponent sign.
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      return {text::parse_double(s.substr(0, i)), text::parse_double(s.substr(i))};
    }
  }
  return {0.0, text::parse_double(s)};
}

void write_spectrum_csv(std::ostream& out, const SpectralSequence& s) {
  switch (s.kind()) {
    case SpectrumKind::singular: {
      out << "index,value\n";
      const auto v = s.values();
      for (std::size_t i = 0; i < v.size(); ++i) out << i << ',' << text::format_double(v[i]) << '\n';
      break;
    }
    case SpectrumKind::eigen_complex: {
      out << "index,value\n";
      const auto v = s.complex_values();
      for (std::size_t i = 0; i < v.size(); ++i) out << i << ',' << format_complex(v[i]) << '\n';
      break;
    }
    case SpectrumKind::eigen_real_signed: {
      out << "index,lambda_plus,lambda_minus\n";
      const auto p = s.plus(), m = s.minus();
      for (std::size_t i = 0; i < std::max(p.size(), m.size()); ++i) {
        out << i << ',';
        if (i < p.size()) out << text::format_double(p[i]);
        out << ',';
        if (i < m.size()) out << text::format_double(m[i]);
        out << '\n';
      }
      break;
    }
  }
}

SpectralSequence read_spectrum_csv(std::istream& in, const std::string& source) {
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    return Error(ErrorKind::parse, source + ":" + std::to_string(lineno) + ": " + why);
  };
  std::string header;
  while (header.empty() && std::getline(in, line)) {
    ++lineno;
    header = std::string(text::trim(line));
  }
  if (header.empty()) throw Error(ErrorKind::empty_input, source + ": no header");
  const bool is_signed = header == "index,lambda_plus,lambda_minus";
  if (!is_signed && header != "index,value") throw fail("unrecognised header '" + header + "'");

  std::vector<double> plus, minus;
  std::vector<std::complex<double>> values;
  bool any_complex = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = text::trim(line);
    if (s.empty()) continue;
    const auto cols = text::split(s, ',');
    try {
      if (is_signed) {
        if (cols.size() != 3) throw fail("expected 3 columns");
        if (!text::trim(cols[1]).empty()) plus.push_back(text::parse_double(cols[1]));
        if (!text::trim(cols[2]).empty()) minus.push_back(text::parse_double(cols[2]));
      } else {
        if (cols.size() != 2) throw fail("expected 2 columns");
        const auto z = parse_complex(cols[1]);
        if (text::trim(cols[1]).back() == 'j') any_complex = true;
        values.push_back(z);
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::parse && std::string(e.what()).find(source) != std::string::npos) throw;
      throw fail(e.what());
    }
  }
  if (is_signed) return SpectralSequence::signed_eigen(std::move(plus), std::move(minus));
  if (any_complex) return SpectralSequence::complex_eigen(std::move(values));
  std::vector<double> mu(values.size());
  std::transform(values.begin(), values.end(), mu.begin(), [](auto z) { return z.real(); });
  return SpectralSequence::singular(std::move(mu));
}

SpectralSequence load_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  return read_spectrum_csv(in, path);
}

void save_spectrum_csv(const std::string& path, const SpectralSequence& s) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  write_spectrum_csv(out, s);
}

}  // namespace lorentz
