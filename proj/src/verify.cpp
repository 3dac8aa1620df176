#include "glissando/verify.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <set>
#include <sstream>
#include <thread>

#include "glissando/divisors.hpp"
#include "glissando/errors.hpp"

namespace glissando {

CharSeries compute_u_series(const Params& params, int k, std::size_t precision) {
  return char_series(build_u_matrix(params, k).entries, precision);
}

SeriesStore::SeriesStore(Params params, std::size_t precision, SeriesSource source)
    : params_(params), precision_(precision), source_(std::move(source)) {
  if (!source_) source_ = compute_u_series;
}

std::shared_ptr<const UMatrix> SeriesStore::matrix(int k) {
  {
    std::lock_guard lock(mu_);
    if (auto it = matrices_.find(k); it != matrices_.end()) return it->second;
  }
  auto u = std::make_shared<const UMatrix>(build_u_matrix(params_, k));
  std::lock_guard lock(mu_);
  return matrices_.emplace(k, std::move(u)).first->second;
}

std::shared_ptr<const CharSeries> SeriesStore::series(int k) {
  {
    std::lock_guard lock(mu_);
    if (auto it = series_.find(k); it != series_.end()) return it->second;
  }
  auto s = std::make_shared<const CharSeries>(source_(params_, k, precision_));
  std::lock_guard lock(mu_);
  return series_.emplace(k, std::move(s)).first->second;
}

std::shared_ptr<const NewtonPolygon> SeriesStore::polygon(int k) {
  {
    std::lock_guard lock(mu_);
    if (auto it = polygons_.find(k); it != polygons_.end()) return it->second;
  }
  auto poly = std::make_shared<const NewtonPolygon>(newton_polygon(*series(k)));
  std::lock_guard lock(mu_);
  return polygons_.emplace(k, std::move(poly)).first->second;
}

void SeriesStore::prefetch(const std::vector<int>& ks, unsigned jobs) {
  parallel_for(ks.size(), jobs, [&](std::size_t i) { series(ks[i]); });
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  for (unsigned t = 0; t < n; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string SlopeTableRow::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) os << ", ";
    os << entries[i].slope.to_string() << '^' << entries[i].width;
  }
  return os.str();
}

namespace {

std::vector<int> range(int lo, int hi) {
  std::vector<int> ks;
  for (int k = lo; k <= hi; ++k) ks.push_back(k);
  return ks;
}

void check_range(int k_min, int k_max) {
  if (k_min < 2 || k_max < k_min)
    throw ParameterError("need 2 <= k_min <= k_max (got " + std::to_string(k_min) + ":" +
                         std::to_string(k_max) + ")");
}

int shifted_weight(const Params& params, int k, unsigned m) {
  return k + static_cast<int>(checked_pow(params.p, m));
}

std::string where(const Params& params, int k) {
  return "p=" + std::to_string(params.p) + " q=" + std::to_string(params.q) +
         " k=" + std::to_string(k);
}

std::string where(const Params& params, int k, unsigned m) {
  return where(params, k) + " m=" + std::to_string(m);
}

// Runs per-job sweeps and merges them in job order.
template <class Job>
SweepReport run_jobs(const std::string& target, std::size_t count, unsigned jobs, Job&& job) {
  std::vector<SweepReport> parts(count);
  parallel_for(count, jobs, [&](std::size_t i) { parts[i] = job(i); });
  SweepReport out;
  out.target = target;
  for (auto& part : parts) out.merge(std::move(part));
  return out;
}

std::vector<std::pair<int, unsigned>> km_pairs(const Grid& g, unsigned m_floor) {
  std::vector<std::pair<int, unsigned>> out;
  for (int k = g.k_min; k <= g.k_max; ++k)
    for (unsigned m = std::max(g.m_min, m_floor); m <= g.m_max; ++m) out.emplace_back(k, m);
  return out;
}

}  // namespace

std::vector<SlopeTableRow> slope_table(SeriesStore& store, int k_min, int k_max, unsigned jobs) {
  check_range(k_min, k_max);
  const auto ks = range(k_min, k_max);
  std::vector<SlopeTableRow> rows(ks.size());
  parallel_for(ks.size(), jobs, [&](std::size_t i) {
    rows[i] = SlopeTableRow{ks[i], store.polygon(ks[i])->segments};
  });
  return rows;
}

std::vector<SlopeTableRow> slope_table(const Params& params, int k_min, int k_max) {
  SeriesStore store(params);
  return slope_table(store, k_min, k_max);
}

std::vector<SlopeTableRow> slope_table_below(SeriesStore& store, int k_min, int k_max,
                                             const Slope& cutoff, unsigned jobs) {
  check_range(k_min, k_max);
  const auto ks = range(k_min, k_max);
  std::vector<SlopeTableRow> rows(ks.size());
  parallel_for(ks.size(), jobs, [&](std::size_t i) {
    rows[i] = SlopeTableRow{ks[i], newton_polygon(*store.series(ks[i]), cutoff).below(cutoff)};
  });
  return rows;
}

void GMReport::merge(const GMReport& other) {
  verdicts.insert(verdicts.end(), other.verdicts.begin(), other.verdicts.end());
  counterexamples.insert(counterexamples.end(), other.counterexamples.begin(),
                         other.counterexamples.end());
  excluded.insert(excluded.end(), other.excluded.begin(), other.excluded.end());
  k_min = std::min(k_min, other.k_min);
  k_max = std::max(k_max, other.k_max);
}

GMReport check_gouvea_mazur(SeriesStore& store, int k, unsigned m, const AlphaPolicy& policy) {
  check_range(k, k);
  const Params& params = store.params();
  const auto a = store.polygon(k);
  const auto b = store.polygon(shifted_weight(params, k, m));

  std::set<Rational> candidates;
  if (policy.fixed) {
    candidates.insert(policy.fixed->begin(), policy.fixed->end());
  } else {
    for (const auto* poly : {a.get(), b.get()})
      for (const auto& s : poly->segments)
        if (!s.slope.is_infinite()) candidates.insert(s.slope.rational());
  }

  GMReport rep{params, m, k, k, {}, {}, {}};
  for (const Rational& alpha : candidates) {
    GMVerdict v{k, alpha, slope_multiplicity(*a, alpha), slope_multiplicity(*b, alpha)};
    const bool in_hypotheses =
        alpha >= Rational(0) && alpha <= Rational(static_cast<std::int64_t>(m)) &&
        alpha < Rational(k - 1);
    if (!in_hypotheses) {
      rep.excluded.push_back(v);
      continue;
    }
    rep.verdicts.push_back(v);
    if (!v.ok()) rep.counterexamples.push_back(v);
  }
  return rep;
}

GMReport check_gouvea_mazur(const Params& params, int k, unsigned m, const AlphaPolicy& policy) {
  SeriesStore store(params);
  return check_gouvea_mazur(store, k, m, policy);
}

bool check_theorem_intro_form(SeriesStore& store, int k1, int k2, unsigned m) {
  if (k1 < 2 || k2 < 2) throw ParameterError("weights must be at least 2");
  const auto pm = static_cast<int>(checked_pow(store.params().p, m));
  if ((k2 - k1) % pm != 0) throw ParameterError("weights must agree modulo p^m");
  const int lo = std::min(k1, k2), hi = std::max(k1, k2);
  if (lo == hi) return true;

  for (int k = lo; k < hi; k += pm)
    if (!check_gouvea_mazur(store, k, m).ok()) return false;

  const auto a = store.polygon(lo);
  const auto b = store.polygon(hi);
  std::set<Rational> candidates;
  for (const auto* poly : {a.get(), b.get()})
    for (const auto& s : poly->segments)
      if (!s.slope.is_infinite()) candidates.insert(s.slope.rational());
  for (const Rational& alpha : candidates) {
    if (alpha > Rational(static_cast<std::int64_t>(m)) || !(alpha < Rational(lo - 1))) continue;
    if (slope_multiplicity(*a, alpha) != slope_multiplicity(*b, alpha)) return false;
  }
  return true;
}

bool check_theorem_intro_form(const Params& params, int k1, int k2, unsigned m) {
  SeriesStore store(params);
  return check_theorem_intro_form(store, k1, k2, m);
}

std::vector<std::optional<SlopeSegment>> PeriodReport::cycle() const {
  std::vector<std::optional<SlopeSegment>> out;
  if (!period) return out;
  for (int i = 0; i < *period && i < static_cast<int>(entries.size()); ++i)
    out.push_back(entries[static_cast<std::size_t>(i)].slope);
  return out;
}

std::string PeriodReport::to_string() const {
  std::ostringstream os;
  os << "slope #" << n << " for p=" << params.p << " q=" << params.q << ", k=" << k_min << ".."
     << k_max << '\n';
  for (const auto& e : entries) {
    os << "  k=" << e.k << ": ";
    if (e.slope)
      os << e.slope->slope.to_string() << '^' << e.slope->width;
    else
      os << "absent";
    os << '\n';
  }
  if (all_absent) {
    os << "all entries absent\n";
  } else if (period) {
    os << "observed period: " << *period << "\ncycle:";
    for (const auto& c : cycle())
      os << ' ' << (c ? c->slope.to_string() + "^" + std::to_string(c->width) : "absent");
    os << '\n';
  } else {
    os << "no period <= " << (k_max - k_min + 1) / 2 << " observed\n";
  }
  return os.str();
}

PeriodReport explore_periodicity(SeriesStore& store, unsigned n, int k_min, int k_max,
                                 unsigned jobs) {
  if (n < 1) throw ParameterError("slope index n must be at least 1");
  check_range(k_min, k_max);
  PeriodReport rep;
  rep.params = store.params();
  rep.n = n;
  rep.k_min = k_min;
  rep.k_max = k_max;
  const auto ks = range(k_min, k_max);
  rep.entries.resize(ks.size());
  parallel_for(ks.size(), jobs, [&](std::size_t i) {
    const auto poly = store.polygon(ks[i]);
    std::vector<SlopeSegment> finite;
    for (const auto& s : poly->segments)
      if (!s.slope.is_infinite()) finite.push_back(s);
    rep.entries[i].k = ks[i];
    if (finite.size() >= n) rep.entries[i].slope = finite[n - 1];
  });

  rep.all_absent = std::all_of(rep.entries.begin(), rep.entries.end(),
                               [](const PeriodEntry& e) { return !e.slope; });
  if (rep.all_absent) return rep;
  const std::size_t window = rep.entries.size();
  for (std::size_t period = 1; period <= window / 2; period *= store.params().p) {
    bool consistent = true;
    for (std::size_t i = 0; i + period < window && consistent; ++i)
      consistent = rep.entries[i].slope == rep.entries[i + period].slope;
    if (consistent) {
      rep.period = static_cast<int>(period);
      break;
    }
  }
  return rep;
}

bool same_cycle(const std::vector<std::optional<SlopeSegment>>& a,
                const std::vector<std::optional<SlopeSegment>>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  for (std::size_t shift = 0; shift < a.size(); ++shift) {
    bool eq = true;
    for (std::size_t i = 0; i < a.size() && eq; ++i) eq = a[(i + shift) % a.size()] == b[i];
    if (eq) return true;
  }
  return false;
}

void SweepReport::merge(SweepReport other) {
  checks += other.checks;
  auto append = [](std::vector<std::string>& dst, std::vector<std::string>& src) {
    dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
  };
  append(failures, other.failures);
  append(warnings, other.warnings);
  append(notes, other.notes);
}

SweepReport sweep_glissando(SeriesStore& store, const Grid& grid) {
  check_range(grid.k_min, grid.k_max);
  const auto ks = range(grid.k_min, grid.k_max);
  return run_jobs("glissando", ks.size(), grid.jobs, [&](std::size_t i) {
    SweepReport r;
    const int k = ks[i];
    const auto u = store.matrix(k);
    r.checks += 3;
    if (!is_glissando(u->entries)) r.failures.push_back(where(store.params(), k) + ": not glissando");
    if (!satisfies_sparsity(*u))
      r.failures.push_back(where(store.params(), k) + ": entry off the (q-1)-stride pattern");
    if (u->entries(0, 0) != FpPoly::one(store.params().p))
      r.failures.push_back(where(store.params(), k) + ": U_00 = " + u->entries(0, 0).to_string());
    return r;
  });
}

SweepReport sweep_ordinary(SeriesStore& store, const Grid& grid) {
  check_range(grid.k_min, grid.k_max);
  const auto ks = range(grid.k_min, grid.k_max);
  return run_jobs("ordinary", ks.size(), grid.jobs, [&](std::size_t i) {
    SweepReport r;
    const int k = ks[i];
    const Params& params = store.params();
    const auto s = store.series(k);
    const auto poly = store.polygon(k);
    r.checks += 3;
    if (slope_multiplicity(*poly, Slope(0)) != 1)
      r.failures.push_back(where(params, k) + ": d(k,0) = " +
                           std::to_string(slope_multiplicity(*poly, Slope(0))));
    if (s->coeff(1).coeff(0) != params.p - 1)
      r.failures.push_back(where(params, k) + ": a_1 mod t = " +
                           std::to_string(s->coeff(1).coeff(0)) + ", expected -1");
    for (std::size_t n = 0; n <= s->dim; ++n) {
      const auto bound = static_cast<std::int64_t>(n * (n > 0 ? n - 1 : 0) / 2);
      if (s->coeff(n).valuation() < Valuation(bound))
        r.failures.push_back(where(params, k) + ": v_t(a_" + std::to_string(n) + ") < " +
                             std::to_string(bound));
    }
    return r;
  });
}

SweepReport sweep_divisors(SeriesStore& store, const Grid& grid) {
  check_range(grid.k_min, grid.k_max);
  const auto ks = range(grid.k_min, grid.k_max);
  return run_jobs("divisors", ks.size(), grid.jobs, [&](std::size_t i) {
    SweepReport r;
    r.checks = 1;
    if (!check_divisor_bound(store.matrix(ks[i])->entries))
      r.failures.push_back(where(store.params(), ks[i]) + ": elementary divisor s_l < l-1");
    return r;
  });
}

SweepReport sweep_block(SeriesStore& store, const Grid& grid) {
  check_range(grid.k_min, grid.k_max);
  const auto pairs = km_pairs(grid, 1);
  return run_jobs("block", pairs.size(), grid.jobs, [&](std::size_t i) {
    SweepReport r;
    const auto [k, m] = pairs[i];
    const BlockReport b = verify_block_congruence(
        *store.matrix(k), *store.matrix(shifted_weight(store.params(), k, m)), m);
    r.checks = 1;
    if (!b.ok()) r.failures.push_back(b.describe_failures());
    if (!is_glissando(b.d_prime)) r.failures.push_back(where(store.params(), k, m) + ": D' not glissando");
    return r;
  });
}

namespace {

CharSeries tilde_for(SeriesStore& store, int k, unsigned m) {
  const BlockReport b = verify_block_congruence(
      *store.matrix(k), *store.matrix(shifted_weight(store.params(), k, m)), m);
  if (!b.ok()) throw VerificationFailure(b.describe_failures());
  return tilde_series(*store.series(k), b);
}

}  // namespace

SweepReport sweep_perturbation(SeriesStore& store, const Grid& grid) {
  check_range(grid.k_min, grid.k_max);
  const auto pairs = km_pairs(grid, 1);
  return run_jobs("perturbation", pairs.size(), grid.jobs, [&](std::size_t i) {
    SweepReport r;
    const auto [k, m] = pairs[i];
    const CharSeries tilde = tilde_for(store, k, m);
    const PerturbReport rep = check_perturbation(
        store.params(), k, m, *store.series(shifted_weight(store.params(), k, m)), tilde);
    Valuation min_margin = Valuation::infinity();
    for (const auto& e : rep.entries) {
      ++r.checks;
      min_margin = std::min(min_margin, e.margin());
      if (!e.ok())
        r.failures.push_back(where(store.params(), k, m) + ": v_t(a_" + std::to_string(e.n) +
                             " - a~_" + std::to_string(e.n) + ") = " + e.difference.to_string() +
                             " < " + std::to_string(e.bound));
    }
    r.notes.push_back(where(store.params(), k, m) + ": min margin " + min_margin.to_string());
    return r;
  });
}

SweepReport sweep_window(SeriesStore& store, const Grid& grid) {
  check_range(grid.k_min, grid.k_max);
  const auto pairs = km_pairs(grid, 1);
  return run_jobs("window", pairs.size(), grid.jobs, [&](std::size_t i) {
    SweepReport r;
    const auto [k, m] = pairs[i];
    const NewtonPolygon tilde = newton_polygon(tilde_for(store, k, m));
    r.checks = 1;
    if (!window_agreement(tilde, *store.polygon(k), Slope(k - 1)))
      r.failures.push_back(where(store.params(), k, m) + ": P~ polygon " + tilde.to_string() +
                           " differs from " + store.polygon(k)->to_string() + " below slope " +
                           std::to_string(k - 1));
    return r;
  });
}

SweepReport sweep_gouvea_mazur(SeriesStore& store, const Grid& grid) {
  check_range(grid.k_min, grid.k_max);
  const auto pairs = km_pairs(grid, 0);
  std::vector<int> ks;
  for (const auto& [k, m] : pairs) {
    ks.push_back(k);
    ks.push_back(shifted_weight(store.params(), k, m));
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  store.prefetch(ks, grid.jobs);
  return run_jobs("gouvea-mazur", pairs.size(), grid.jobs, [&](std::size_t i) {
    SweepReport r;
    const auto [k, m] = pairs[i];
    const GMReport rep = check_gouvea_mazur(store, k, m);
    r.checks = rep.verdicts.size();
    for (const auto& v : rep.counterexamples)
      r.failures.push_back(where(store.params(), k, m) + ": d(k," + v.alpha.to_string() + ") = " +
                           std::to_string(v.d_k) + " but d(k+p^m," + v.alpha.to_string() +
                           ") = " + std::to_string(v.d_shifted));
    return r;
  });
}

SweepReport sweep_observations(SeriesStore& store, const Grid& grid) {
  check_range(grid.k_min, grid.k_max);
  const auto ks = range(grid.k_min, grid.k_max);
  return run_jobs("observations", ks.size(), grid.jobs, [&](std::size_t i) {
    SweepReport r;
    const int k = ks[i];
    const std::int64_t max_den = store.params().p == 2 ? 2 : 1;
    for (const auto& s : store.polygon(k)->segments) {
      if (s.slope.is_infinite()) continue;
      r.checks += 2;
      if (!(s.slope.rational() < Rational(k - 1)))
        r.warnings.push_back(where(store.params(), k) + ": finite slope " + s.slope.to_string() +
                             " >= k-1");
      if (s.slope.rational().den() > max_den)
        r.warnings.push_back(where(store.params(), k) + ": slope " + s.slope.to_string() +
                             " has denominator > " + std::to_string(max_den));
    }
    return r;
  });
}

SweepReport sweep_lemma_num(const std::vector<std::uint64_t>& primes, unsigned m_min,
                            unsigned m_max, std::uint64_t n_min, std::uint64_t n_max) {
  if (m_min < 1 || n_min < 2) throw ParameterError("lemma-num needs m >= 1 and n >= 2");
  SweepReport r;
  r.target = "lemma-num";
  for (std::uint64_t p : primes) {
    if (!is_prime(p)) throw ParameterError("p must be prime (got " + std::to_string(p) + ")");
    for (unsigned m = m_min; m <= m_max; ++m)
      for (std::uint64_t n = n_min; n <= n_max; ++n) {
        ++r.checks;
        if (!check_lemma_num(p, m, n))
          r.failures.push_back("p=" + std::to_string(p) + " m=" + std::to_string(m) +
                               " n=" + std::to_string(n) + ": inequality fails");
      }
  }
  return r;
}

}  // namespace glissando
