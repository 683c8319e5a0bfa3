// lorentz: analyze spectra, export models, run the property suites.
//
// Exit codes: 0 success, 1 property/inequality failure (check, harness),
// 2 operational error (I/O, parse, domain).

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lorentz/asymptotics.hpp"
#include "lorentz/checks.hpp"
#include "lorentz/counting.hpp"
#include "lorentz/error.hpp"
#include "lorentz/limit.hpp"
#include "lorentz/models.hpp"
#include "lorentz/rv.hpp"
#include "lorentz/spectra.hpp"
#include "lorentz/text.hpp"

using json = nlohmann::ordered_json;
using namespace lorentz;

namespace {

constexpr int exit_failed = 1;
constexpr int exit_error = 2;

// Writes to a file, or stdout when the path is empty or "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void close(const std::string& path) {
    if (!file_.is_open()) return;
    file_.close();
    if (!file_) throw Error(ErrorKind::io, "short write to '" + path + "'");
  }

 private:
  std::ofstream file_;
};

json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

json to_json(const LimitEstimate& e) {
  json w = json::array();
  for (auto [n, v] : e.windows) w.push_back({number(n), number(v)});
  return {{"windows", w},
          {"estimate", number(e.estimate)},
          {"band", {number(e.band_lo), number(e.band_hi)}},
          {"verdict", std::string(to_string(e.verdict))},
          {"extrapolated", number(e.extrapolated)},
          {"tolerance", number(e.tolerance)}};
}

json to_json(const MeasurabilityReport& r) {
  json j;
  j["tau"] = to_json(r.tau);
  j["lambda_plus"] = r.lambda_plus ? to_json(*r.lambda_plus) : json(nullptr);
  j["lambda_minus"] = r.lambda_minus ? to_json(*r.lambda_minus) : json(nullptr);
  j["nc_integral"] = r.nc_integral ? number(*r.nc_integral) : json(nullptr);
  j["spectrally_measurable"] = r.spectrally_measurable;
  j["commutator_flag"] = r.commutator_flag;
  return j;
}

// First n entries of the merged stream, keeping the spectrum kind.
SpectralSequence truncate(const SpectralSequence& s, std::size_t n) {
  if (n >= s.size()) return s;
  switch (s.kind()) {
    case SpectrumKind::singular: {
      auto v = s.values();
      return SpectralSequence::singular({v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)});
    }
    case SpectrumKind::eigen_complex: {
      auto v = s.complex_values();
      return SpectralSequence::complex_eigen({v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)});
    }
    case SpectrumKind::eigen_real_signed: break;
  }
  std::vector<double> plus, minus;
  const auto m = s.merged();
  for (std::size_t j = 0; j < n; ++j) (m[j] >= 0 ? plus : minus).push_back(std::abs(m[j]));
  return SpectralSequence::signed_eigen(std::move(plus), std::move(minus));
}

// --- counting CSV: `lambda,count` with count = N(lambda) cumulative ----------

void write_counting_csv(std::ostream& out, const CountingFunction& n) {
  out << "lambda,count\n";
  const auto v = n.step_values();
  const auto c = n.cumulative();
  for (std::size_t i = 0; i < v.size(); ++i) out << text::format_double(v[i]) << ',' << c[i] << '\n';
}

CountingFunction read_counting_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::vector<double> values;
  std::vector<std::uint64_t> mult;
  std::uint64_t prev = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (lineno == 1 && t == "lambda,count") continue;
    const auto f = text::split(t, ',');
    const auto where = path + ":" + std::to_string(lineno);
    if (f.size() != 2) throw Error(ErrorKind::parse, where + ": expected `lambda,count`");
    double lam = 0.0;
    long long cnt = 0;
    try {
      lam = text::parse_double(f[0]);
      cnt = text::parse_int(f[1]);
    } catch (const Error& e) {
      throw Error(ErrorKind::parse, where + ": " + e.what());
    }
    if (cnt <= 0 || static_cast<std::uint64_t>(cnt) <= prev)
      throw Error(ErrorKind::parse, where + ": counts must increase strictly");
    values.push_back(lam);
    mult.push_back(static_cast<std::uint64_t>(cnt) - prev);
    prev = static_cast<std::uint64_t>(cnt);
  }
  return CountingFunction::from_runs(std::move(values), std::move(mult), path);
}

// --- subcommands -------------------------------------------------------------

struct AnalyzeArgs {
  std::string model, input, g, rate = "log", out, csv;
  std::optional<double> tolerance;
  std::size_t windows = 4;
  std::size_t max_n = 0;
};

int cmd_analyze(const AnalyzeArgs& a) {
  const auto g = parse_rv_spec(a.g);
  LimitOptions opts;
  opts.rate = parse_rate_hint(a.rate);
  opts.tolerance = a.tolerance;
  opts.trailing = a.windows;

  auto s = a.model.empty() ? load_spectrum_csv(a.input) : models::build_model(a.model);
  if (a.max_n > 0) s = truncate(s, a.max_n);
  const auto rep = analyze(s, g, opts);

  Sink sink(a.out);
  sink.out() << to_json(rep).dump(2) << '\n';
  sink.close(a.out);

  if (!a.csv.empty()) {
    Sink c(a.csv);
    auto& out = c.out();
    out << "N,tau,lambda_plus_ratio,lambda_minus_ratio\n";
    auto ratio_at = [](const std::optional<LimitEstimate>& e, double n) -> std::string {
      if (!e) return "";
      for (auto [wn, v] : e->windows)
        if (wn == n) return text::format_double(v);
      return "";
    };
    for (auto [n, tau] : rep.tau.windows)
      out << static_cast<std::uint64_t>(n) << ',' << text::format_double(tau) << ',' << ratio_at(rep.lambda_plus, n)
          << ',' << ratio_at(rep.lambda_minus, n) << '\n';
    c.close(a.csv);
  }
  return 0;
}

int cmd_model(const std::string& spec, const std::string& out) {
  Sink sink(out);
  models::write_model_csv(spec, sink.out());
  sink.close(out);
  return 0;
}

struct ConvertArgs {
  std::string to, input, counting, part = "modulus", out;
  std::size_t m = 0;
};

int cmd_convert(const ConvertArgs& a) {
  Sink sink(a.out);
  if (a.to == "counting") {
    if (a.input.empty()) throw Error(ErrorKind::parse, "convert --to counting needs --input <spectrum.csv>");
    write_counting_csv(sink.out(), counting_from_sequence(load_spectrum_csv(a.input), parse_counting_part(a.part)));
  } else if (a.to == "sequence") {
    if (a.input.empty() == a.counting.empty())
      throw Error(ErrorKind::parse, "convert --to sequence needs exactly one of --input <counting.csv> or --counting <spec>");
    const auto n = a.input.empty() ? models::parse_counting_spec(a.counting) : read_counting_csv(a.input);
    std::size_t m = a.m;
    if (m == 0) {
      if (n.kind() != CountingKind::step) throw Error(ErrorKind::parse, "--m is required for model counting functions");
      m = static_cast<std::size_t>(n.total());
    }
    write_spectrum_csv(sink.out(), sequence_from_counting(n, m));
  } else {
    throw Error(ErrorKind::parse, "--to must be `counting` or `sequence`");
  }
  sink.close(a.out);
  return 0;
}

struct HarnessArgs {
  std::uint64_t from = 0, to = 9;
  std::vector<std::size_t> sizes{16, 64};
  std::string out;
};

int cmd_harness(const HarnessArgs& a) {
  if (a.to < a.from) throw Error(ErrorKind::domain, "empty seed range");
  json rows = json::array();
  std::size_t failures = 0;
  for (auto n : a.sizes) {
    for (std::uint64_t seed = a.from; seed <= a.to; ++seed) {
      const auto t = checks::run_triple(seed, n);
      const bool ok = t.pass();
      failures += !ok;
      rows.push_back({{"seed", seed},
                      {"n", n},
                      {"fan_violations", t.fan.violations},
                      {"weyl_modulus_violations", t.weyl_modulus.violations},
                      {"weyl_signed_violations", t.weyl_signed.violations},
                      {"trace_rel_error", number(t.trace_rel_error)},
                      {"pass", ok}});
    }
  }
  Sink sink(a.out);
  sink.out() << json{{"triples", rows}, {"failures", failures}}.dump(2) << '\n';
  sink.close(a.out);
  return failures == 0 ? 0 : exit_failed;
}

int cmd_constants(const std::string& family, int n, const std::string& alpha) {
  char buf[64];
  if (family == "simon") {
    const double al = text::parse_double(alpha);
    std::snprintf(buf, sizeof buf, "%.12g", models::simon_constant(n, al));
    std::cout << "simon n=" << n << " alpha=" << alpha << " c=" << buf << '\n';
  } else if (family == "cusp") {
    const auto c = models::cusp_constants(n);
    std::snprintf(buf, sizeof buf, "c1=%.12g c2=%.12g", c.c1, c.c2);
    std::cout << "cusp n=" << n << ' ' << buf << '\n';
  } else {
    throw Error(ErrorKind::parse, "unknown constant family '" + family + "' (simon, cusp)");
  }
  return 0;
}

int cmd_check(const std::string& suite, std::uint64_t seed, const std::string& tier_name, const std::string& out) {
  const auto tier = checks::parse_tier(tier_name);
  std::vector<std::string> names;
  if (suite == "all") {
    names = checks::suite_names();
  } else {
    names.push_back(suite);
  }
  json suites = json::array();
  bool all_pass = true;
  for (const auto& name : names) {
    const auto rep = checks::run_suite(name, seed, tier);
    all_pass = all_pass && rep.pass();
    json props = json::array();
    for (const auto& p : rep.properties)
      props.push_back({{"name", p.name}, {"pass", p.pass}, {"margin", number(p.margin)}, {"detail", p.detail}});
    suites.push_back({{"suite", rep.suite},
                      {"seed", rep.seed},
                      {"tier", std::string(checks::to_string(rep.tier))},
                      {"pass", rep.pass()},
                      {"properties", props}});
    // timing goes to stderr so the JSON stays reproducible
    std::fprintf(stderr, "%-12s %s %.2fs\n", rep.suite.c_str(), rep.pass() ? "PASS" : "FAIL", rep.seconds);
  }
  Sink sink(out);
  sink.out() << json{{"suites", suites}, {"pass", all_pass}}.dump(2) << '\n';
  sink.close(out);
  return all_pass ? 0 : exit_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dixmier-trace diagnostics on weak Lorentz ideals"};
  app.require_subcommand(1);

  AnalyzeArgs aa;
  auto* analyze_cmd = app.add_subcommand("analyze", "measurability report for a spectrum");
  auto* src = analyze_cmd->add_option("--model", aa.model, "model spec, e.g. generator:power-log:-1,0,1048576");
  analyze_cmd->add_option("--input", aa.input, "spectrum CSV")->excludes(src);
  analyze_cmd->add_option("--g", aa.g, "scale function, e.g. power-log:-1,1")->required();
  analyze_cmd->add_option("--rate", aa.rate, "convergence rate hint: power, log, log2")->capture_default_str();
  analyze_cmd->add_option("--tolerance", aa.tolerance, "override the rate's default tolerance");
  analyze_cmd->add_option("--windows", aa.windows, "trailing windows W")->capture_default_str()->check(CLI::Range(3, 64));
  analyze_cmd->add_option("--max-n", aa.max_n, "use only the first N entries");
  analyze_cmd->add_option("--out", aa.out, "report JSON (default stdout)");
  analyze_cmd->add_option("--csv", aa.csv, "curve CSV N,tau,lambda_plus_ratio,lambda_minus_ratio");

  std::string model_spec, model_out;
  auto* model_cmd = app.add_subcommand("model", "write a model spectrum as CSV");
  model_cmd->add_option("spec", model_spec, "model spec")->required();
  model_cmd->add_option("--out", model_out, "CSV path (default stdout)");

  ConvertArgs ca;
  auto* convert_cmd = app.add_subcommand("convert", "counting function <-> sequence");
  convert_cmd->add_option("--to", ca.to, "counting or sequence")->required();
  convert_cmd->add_option("--input", ca.input, "spectrum CSV (to counting) or counting CSV (to sequence)");
  convert_cmd->add_option("--counting", ca.counting, "counting spec: rvm, smalllam:<c>,<p>,<q>, podles:<q>,<lambda_max>");
  convert_cmd->add_option("--part", ca.part, "plus, minus, singular, modulus")->capture_default_str();
  convert_cmd->add_option("--m", ca.m, "sequence length");
  convert_cmd->add_option("--out", ca.out, "CSV path (default stdout)");

  HarnessArgs ha;
  auto* harness_cmd = app.add_subcommand("harness", "Fan/Weyl/trace checks on seeded matrix triples");
  harness_cmd->add_option("--from", ha.from, "first seed")->capture_default_str();
  harness_cmd->add_option("--to", ha.to, "last seed")->capture_default_str();
  harness_cmd->add_option("--n", ha.sizes, "matrix orders")->capture_default_str()->check(CLI::Range(2, 512));
  harness_cmd->add_option("--out", ha.out, "JSON path (default stdout)");

  std::string family, alpha = "inf";
  int cn = 2;
  auto* constants_cmd = app.add_subcommand("constants", "Weyl-law constants");
  constants_cmd->add_option("family", family, "simon or cusp")->required();
  constants_cmd->add_option("--n", cn, "dimension")->capture_default_str();
  constants_cmd->add_option("--alpha", alpha, "potential exponent (simon), inf allowed")->capture_default_str();

  std::string suite = "all", tier = "small", check_out;
  std::uint64_t seed = 0;
  auto* check_cmd = app.add_subcommand("check", "run property suites");
  check_cmd->add_option("--suite", suite, "rv, counting, spectra, asymptotics, harness, models or all")->capture_default_str();
  check_cmd->add_option("--seed", seed, "seed")->capture_default_str();
  check_cmd->add_option("--tier", tier, "small or full")->capture_default_str();
  check_cmd->add_option("--out", check_out, "JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_error;
  }

  try {
    if (*analyze_cmd) {
      if (aa.model.empty() && aa.input.empty()) throw Error(ErrorKind::parse, "analyze needs --model or --input");
      return cmd_analyze(aa);
    }
    if (*model_cmd) return cmd_model(model_spec, model_out);
    if (*convert_cmd) return cmd_convert(ca);
    if (*harness_cmd) return cmd_harness(ha);
    if (*constants_cmd) return cmd_constants(family, cn, alpha);
    if (*check_cmd) return cmd_check(suite, seed, tier, check_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
  return exit_error;
}
