#include "glissando/cli/app.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "glissando/cli/cache.hpp"
#include "glissando/cli/serialize.hpp"
#include "glissando/divisors.hpp"
#include "glissando/errors.hpp"
#include "glissando/verify.hpp"

namespace glissando::cli {

namespace {

struct CacheMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Range {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

Range parse_range(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const auto colon = s.find(':');
    if (colon == std::string::npos) {
      const std::int64_t v = std::stoll(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return {v, v};
    }
    const std::string a = s.substr(0, colon), b = s.substr(colon + 1);
    Range r{std::stoll(a, &pos), 0};
    if (pos != a.size()) throw std::invalid_argument(s);
    r.hi = std::stoll(b, &pos);
    if (pos != b.size()) throw std::invalid_argument(s);
    if (r.hi < r.lo) throw std::invalid_argument(s);
    return r;
  } catch (const std::exception&) {
    throw ParameterError("--" + what + " expects N or A:B with A <= B (got '" + s + "')");
  }
}

std::vector<std::uint64_t> parse_list(const std::string& s, const std::string& what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(item, &pos);
      if (pos != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::uint64_t>(v));
    } catch (const std::exception&) {
      throw ParameterError("--" + what + " expects a comma-separated list of integers");
    }
  }
  if (out.empty()) throw ParameterError("--" + what + " is empty");
  return out;
}

struct Options {
  std::string p = "2";
  std::string q;
  std::string k;
  std::string m = "0";
  std::string n;
  std::string format = "text";
  std::string mode = "exact";
  std::optional<std::size_t> precision;
  std::string cutoff;
  std::string cache_dir;
  bool no_cache = false;
  bool verify_cache = false;
  unsigned jobs = 0;
  std::string out_file;
  std::string dump_file;
  std::string target;
  bool verbose = false;
};

Params params_of(const Options& o) {
  const auto ps = parse_list(o.p, "p");
  if (ps.size() != 1) throw ParameterError("--p takes a single prime here");
  const std::uint64_t p = ps[0];
  if (!is_prime(p)) throw ParameterError("p must be prime (got " + std::to_string(p) + ")");
  std::uint64_t q = p;
  if (!o.q.empty()) q = parse_list(o.q, "q").at(0);
  return Params::make(p, q);
}

unsigned jobs_of(const Options& o) {
  if (o.jobs > 0) return o.jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t precision_of(const Options& o) {
  if (o.mode == "exact") return kExact;
  if (o.mode != "truncated") throw ParameterError("--mode must be exact or truncated");
  if (!o.precision) throw ParameterError("--mode truncated requires --precision N");
  if (*o.precision == 0) throw ParameterError("--precision must be at least 1");
  return *o.precision;
}

SeriesSource source_of(const Options& o) {
  if (o.no_cache) return compute_u_series;
  std::filesystem::path dir = o.cache_dir.empty() ? default_cache_dir() : std::filesystem::path(o.cache_dir);
  if (dir.empty()) return compute_u_series;
  auto cache = std::make_shared<ResultCache>(dir);
  const bool verify = o.verify_cache;
  return [cache, verify](const Params& params, int k, std::size_t precision) {
    if (auto hit = cache->load(params, k, precision)) {
      if (verify && !(*hit == compute_u_series(params, k, precision)))
        throw CacheMismatch("cache entry " + cache->entry_path(params, k, precision).string() +
                            " differs from recomputation");
      return *hit;
    }
    CharSeries s = compute_u_series(params, k, precision);
    try {
      cache->store(params, k, precision, s);
    } catch (const std::exception&) {
      // An unwritable cache only costs recomputation.
    }
    return s;
  };
}

void write_rows_text(std::ostream& out, const std::vector<SlopeTableRow>& rows) {
  if (rows.size() == 1) {
    out << rows[0].to_string() << '\n';
    return;
  }
  for (const auto& r : rows) out << r.k << ": " << r.to_string() << '\n';
}

void write_rows_csv(std::ostream& out, const std::vector<SlopeTableRow>& rows) {
  out << "k,slope,multiplicity\n";
  for (const auto& r : rows)
    for (const auto& e : r.entries) out << r.k << ',' << e.slope.to_string() << ',' << e.width << '\n';
}

void write_rows_json(std::ostream& out, const std::vector<SlopeTableRow>& rows,
                     const Params& params, std::size_t precision,
                     const std::optional<Slope>& cutoff) {
  json jrows = json::array();
  for (const auto& r : rows) {
    json segs = json::array();
    for (const auto& e : r.entries) segs.push_back({{"slope", e.slope.to_string()}, {"width", e.width}});
    jrows.push_back({{"k", r.k}, {"dim", r.k - 1}, {"segments", std::move(segs)}});
  }
  json j = {{"p", params.p},
            {"q", params.q},
            {"mode", precision == kExact ? "exact" : "truncated"},
            {"precision", precision == kExact ? json(nullptr) : json(precision)},
            {"rows", std::move(jrows)}};
  if (cutoff) j["cutoff"] = cutoff->to_string();
  out << j.dump(2) << '\n';
}

void check_format(const std::string& f, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (f == a) return;
  throw ParameterError("unsupported --format '" + f + "'");
}

int cmd_slopes(const Options& o, std::ostream& out) {
  check_format(o.format, {"text", "csv", "json"});
  const Params params = params_of(o);
  if (o.k.empty()) throw ParameterError("--k is required");
  const Range kr = parse_range(o.k, "k");
  const std::size_t precision = precision_of(o);
  std::optional<Slope> cutoff;
  if (!o.cutoff.empty()) cutoff = Slope::parse(o.cutoff);

  SeriesStore store(params, precision, source_of(o));
  std::vector<SlopeTableRow> rows;
  const int lo = static_cast<int>(kr.lo), hi = static_cast<int>(kr.hi);
  if (precision == kExact) {
    rows = slope_table(store, lo, hi, jobs_of(o));
    if (cutoff)
      for (auto& r : rows)
        std::erase_if(r.entries, [&](const SlopeSegment& s) { return !(s.slope < *cutoff); });
  } else {
    rows = slope_table_below(store, lo, hi, cutoff.value_or(Slope::infinity()), jobs_of(o));
  }

  if (o.format == "csv")
    write_rows_csv(out, rows);
  else if (o.format == "json")
    write_rows_json(out, rows, params, precision, cutoff);
  else
    write_rows_text(out, rows);
  return kOk;
}

int cmd_matrix(const Options& o, std::ostream& out) {
  check_format(o.format, {"text", "json"});
  const Params params = params_of(o);
  if (o.k.empty()) throw ParameterError("--k is required");
  const Range kr = parse_range(o.k, "k");
  if (kr.lo != kr.hi) throw ParameterError("matrix takes a single --k");
  const UMatrix u = build_u_matrix(params, static_cast<int>(kr.lo));
  if (!o.dump_file.empty()) {
    std::ofstream f(o.dump_file);
    f << to_json(u).dump() << '\n';
    if (!f) throw ParameterError("cannot write " + o.dump_file);
  }
  if (o.format == "json")
    out << to_json(u).dump() << '\n';
  else
    out << to_text(u);
  return kOk;
}

int cmd_series(const Options& o, std::ostream& out) {
  const Params params = params_of(o);
  const Range kr = parse_range(o.k, "k");
  if (kr.lo != kr.hi) throw ParameterError("series takes a single --k");
  const std::size_t precision = precision_of(o);
  SeriesStore store(params, precision, source_of(o));
  const int k = static_cast<int>(kr.lo);
  out << to_json(*store.series(k), params, k).dump() << '\n';
  return kOk;
}

int cmd_divisors(const Options& o, std::ostream& out) {
  check_format(o.format, {"text", "json"});
  const Params params = params_of(o);
  const Range kr = parse_range(o.k, "k");
  if (kr.lo != kr.hi) throw ParameterError("divisors takes a single --k");
  const UMatrix u = build_u_matrix(params, static_cast<int>(kr.lo));
  const std::size_t n = o.precision.value_or(default_divisor_precision(u.entries));
  if (n == 0) throw ParameterError("--precision must be at least 1");
  const DivisorList d = elementary_divisors(u.entries, n);
  if (o.format == "json") {
    out << to_json(d).dump() << '\n';
  } else {
    for (std::size_t i = 0; i < d.values.size(); ++i) out << (i ? ", " : "") << d.values[i].to_string();
    out << '\n';
  }
  return kOk;
}

int cmd_periodicity(const Options& o, std::ostream& out) {
  check_format(o.format, {"text", "json"});
  const Params params = params_of(o);
  const Range kr = parse_range(o.k, "k");
  const Range nr = parse_range(o.n.empty() ? "1" : o.n, "n");
  if (nr.lo != nr.hi || nr.lo < 1) throw ParameterError("--n must be a single positive integer");
  SeriesStore store(params, kExact, source_of(o));
  const PeriodReport r = explore_periodicity(store, static_cast<unsigned>(nr.lo),
                                             static_cast<int>(kr.lo), static_cast<int>(kr.hi),
                                             jobs_of(o));
  if (o.format == "json")
    out << to_json(r).dump(2) << '\n';
  else
    out << r.to_string();
  return kOk;
}

void print_sweep(std::ostream& out, const SweepReport& r, bool notes) {
  out << (r.ok() ? "[PASS] " : "[FAIL] ") << r.target << ": " << r.checks << " checks";
  if (!r.failures.empty()) out << ", " << r.failures.size() << " failures";
  if (!r.warnings.empty()) out << ", " << r.warnings.size() << " warnings";
  out << '\n';
  for (const auto& f : r.failures) out << "  counterexample: " << f << '\n';
  for (const auto& w : r.warnings) out << "  warning: " << w << '\n';
  if (notes)
    for (const auto& n : r.notes) out << "  " << n << '\n';
}

int cmd_verify(const Options& o, std::ostream& out) {
  static const std::vector<std::string> kTargets = {
      "glissando", "ordinary", "divisors",     "block",        "perturbation",
      "window",    "gouvea-mazur", "lemma-num", "observations", "all"};
  if (std::find(kTargets.begin(), kTargets.end(), o.target) == kTargets.end())
    throw ParameterError("unknown verify target '" + o.target + "'");
  check_format(o.format, {"text", "json"});

  std::vector<SweepReport> reports;
  const bool all = o.target == "all";
  const Range mr = parse_range(o.m, "m");
  if (mr.lo < 0) throw ParameterError("--m must be non-negative");

  if (o.target == "lemma-num" || all) {
    const Range nr = parse_range(o.n.empty() ? "2:10000" : o.n, "n");
    if (nr.lo < 2) throw ParameterError("--n must start at 2 or more");
    const auto primes = o.target == "lemma-num" && o.p == "2" && o.q.empty()
                            ? std::vector<std::uint64_t>{2, 3, 5}
                            : parse_list(o.p, "p");
    reports.push_back(sweep_lemma_num(primes, static_cast<unsigned>(std::max<std::int64_t>(1, mr.lo)),
                                      static_cast<unsigned>(std::max<std::int64_t>(1, mr.hi)),
                                      static_cast<std::uint64_t>(nr.lo),
                                      static_cast<std::uint64_t>(nr.hi)));
  }
  if (o.target != "lemma-num") {
    const Params params = params_of(o);
    if (o.k.empty()) throw ParameterError("--k is required");
    const Range kr = parse_range(o.k, "k");
    Grid grid{params, static_cast<int>(kr.lo), static_cast<int>(kr.hi),
              static_cast<unsigned>(mr.lo), static_cast<unsigned>(mr.hi), jobs_of(o)};
    SeriesStore store(params, kExact, source_of(o));
    using Sweep = SweepReport (*)(SeriesStore&, const Grid&);
    const std::vector<std::pair<std::string, Sweep>> sweeps = {
        {"glissando", sweep_glissando},       {"ordinary", sweep_ordinary},
        {"divisors", sweep_divisors},         {"block", sweep_block},
        {"perturbation", sweep_perturbation}, {"window", sweep_window},
        {"gouvea-mazur", sweep_gouvea_mazur}, {"observations", sweep_observations}};
    for (const auto& [name, fn] : sweeps)
      if (all || o.target == name) reports.push_back(fn(store, grid));
  }

  bool ok = true;
  for (const auto& r : reports) ok = ok && r.ok();
  std::ostringstream text;
  for (const auto& r : reports) print_sweep(text, r, o.verbose);
  text << (ok ? "OK" : "FALSIFIED") << '\n';

  if (o.format == "json") {
    json j = json::array();
    for (const auto& r : reports) j.push_back(to_json(r));
    out << json{{"ok", ok}, {"reports", j}}.dump(2) << '\n';
  } else {
    out << text.str();
  }
  if (!o.out_file.empty()) {
    std::ofstream f(o.out_file);
    for (const auto& r : reports) print_sweep(f, r, true);
    f << (ok ? "OK" : "FALSIFIED") << '\n';
    if (!f) throw ParameterError("cannot write " + o.out_file);
  }
  return ok ? kOk : kFalsified;
}

void add_field_options(CLI::App* sub, Options& o) {
  sub->add_option("--p", o.p, "prime characteristic")->capture_default_str();
  sub->add_option("--q", o.q, "field size q = p^e (default p)");
}

void add_cache_options(CLI::App* sub, Options& o) {
  sub->add_option("--cache-dir", o.cache_dir,
                  std::string("result cache directory (default $") + kCacheEnvVar +
                      " or the per-user data directory)");
  sub->add_flag("--no-cache", o.no_cache, "do not read or write the result cache");
  sub->add_flag("--verify-cache", o.verify_cache, "recompute cache hits and compare");
  sub->add_option("--jobs", o.jobs, "worker threads (default: hardware concurrency)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Slopes of the U-operator on Drinfeld cuspforms of level Gamma_1(t)", "glissando"};
  app.require_subcommand(1);

  auto* slopes = app.add_subcommand("slopes", "print slope multisets of U^(k)");
  add_field_options(slopes, o);
  slopes->add_option("--k", o.k, "weight k or range A:B")->required();
  slopes->add_option("--format", o.format, "text, csv or json")->capture_default_str();
  slopes->add_option("--mode", o.mode, "exact or truncated")->capture_default_str();
  slopes->add_option("--precision", o.precision, "t-adic precision N for truncated mode");
  slopes->add_option("--cutoff", o.cutoff, "only report slopes below this value (a/b)");
  add_cache_options(slopes, o);

  auto* verify = app.add_subcommand("verify", "machine-check the statements over a grid");
  verify->add_option("target", o.target,
                     "glissando, ordinary, divisors, block, perturbation, window, gouvea-mazur, "
                     "lemma-num, observations or all")
      ->required();
  add_field_options(verify, o);
  verify->add_option("--k", o.k, "weight range A:B");
  verify->add_option("--m", o.m, "exponent range A:B")->capture_default_str();
  verify->add_option("--n", o.n, "coefficient index range for lemma-num (default 2:10000)");
  verify->add_option("--format", o.format, "text or json")->capture_default_str();
  verify->add_option("--out", o.out_file, "also write the full report (with margins) here");
  verify->add_flag("--verbose", o.verbose, "print per-case notes such as perturbation margins");
  add_cache_options(verify, o);

  auto* matrix = app.add_subcommand("matrix", "print the matrix U^(k)");
  add_field_options(matrix, o);
  matrix->add_option("--k", o.k, "weight k")->required();
  matrix->add_option("--format", o.format, "text or json")->capture_default_str();
  matrix->add_option("--dump", o.dump_file, "also write the JSON form to this file");

  auto* series = app.add_subcommand("series", "print P^(k)(X) = det(I - X U^(k)) as JSON");
  add_field_options(series, o);
  series->add_option("--k", o.k, "weight k")->required();
  series->add_option("--mode", o.mode, "exact or truncated")->capture_default_str();
  series->add_option("--precision", o.precision, "t-adic precision N for truncated mode");
  add_cache_options(series, o);

  auto* divisors = app.add_subcommand("divisors", "elementary divisors of U^(k) over F_p[[t]]");
  add_field_options(divisors, o);
  divisors->add_option("--k", o.k, "weight k")->required();
  divisors->add_option("--precision", o.precision, "t-adic precision (default 2*dim+8)");
  divisors->add_option("--format", o.format, "text or json")->capture_default_str();

  auto* period = app.add_subcommand("periodicity", "n-th smallest finite slope across weights");
  add_field_options(period, o);
  period->add_option("--n", o.n, "slope index, 1 = smallest")->required();
  period->add_option("--k", o.k, "weight range A:B")->required();
  period->add_option("--format", o.format, "text or json")->capture_default_str();
  add_cache_options(period, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kBadParams;
  }

  try {
    if (slopes->parsed()) return cmd_slopes(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (matrix->parsed()) return cmd_matrix(o, out);
    if (series->parsed()) return cmd_series(o, out);
    if (divisors->parsed()) return cmd_divisors(o, out);
    if (period->parsed()) return cmd_periodicity(o, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kBadParams;
  } catch (const PrecisionError& e) {
    err << "error: " << e.what() << "\nsuggested precision: " << e.suggested_precision() << '\n';
    return kPrecision;
  } catch (const VerificationFailure& e) {
    err << "FALSIFIED: " << e.what() << '\n';
    return kFalsified;
  } catch (const CacheMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kFalsified;
  }
  return kBadParams;
}

}  // namespace glissando::cli
