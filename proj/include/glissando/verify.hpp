#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "glissando/charpoly.hpp"
#include "glissando/field.hpp"
#include "glissando/newton.hpp"
#include "glissando/umatrix.hpp"

namespace glissando {

/// Computes (or loads) P^(k) for given parameters and precision.
using SeriesSource = std::function<CharSeries(const Params&, int k, std::size_t precision)>;

/// Direct computation from the U-matrix.
CharSeries compute_u_series(const Params& params, int k, std::size_t precision);

/// Memoized U-matrices, series and polygons for one (p, q) and precision.
/// Safe to share across worker threads.
class SeriesStore {
 public:
  explicit SeriesStore(Params params, std::size_t precision = kExact, SeriesSource source = {});

  const Params& params() const noexcept { return params_; }
  std::size_t precision() const noexcept { return precision_; }

  std::shared_ptr<const UMatrix> matrix(int k);
  std::shared_ptr<const CharSeries> series(int k);
  /// Full polygon; needs an exact store.
  std::shared_ptr<const NewtonPolygon> polygon(int k);
  /// Computes series for every k using `jobs` worker threads.
  void prefetch(const std::vector<int>& ks, unsigned jobs);

 private:
  Params params_;
  std::size_t precision_;
  SeriesSource source_;
  std::mutex mu_;
  std::map<int, std::shared_ptr<const UMatrix>> matrices_;
  std::map<int, std::shared_ptr<const CharSeries>> series_;
  std::map<int, std::shared_ptr<const NewtonPolygon>> polygons_;
};

/// Runs fn(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

struct SlopeTableRow {
  int k = 2;
  std::vector<SlopeSegment> entries;  // finite slopes ascending, then +infinity

  std::string to_string() const;
  friend bool operator==(const SlopeTableRow&, const SlopeTableRow&) = default;
};

/// Slope multisets of U^(k) for k_min <= k <= k_max.
std::vector<SlopeTableRow> slope_table(SeriesStore& store, int k_min, int k_max,
                                       unsigned jobs = 1);
std::vector<SlopeTableRow> slope_table(const Params& params, int k_min, int k_max);

/// Truncated-mode table: only slopes < cutoff, each certified.
std::vector<SlopeTableRow> slope_table_below(SeriesStore& store, int k_min, int k_max,
                                             const Slope& cutoff, unsigned jobs = 1);

struct GMVerdict {
  int k = 2;
  Rational alpha;
  std::int64_t d_k = 0;
  std::int64_t d_shifted = 0;  // d(k + p^m, alpha)

  bool ok() const noexcept { return d_k == d_shifted; }
};

/// Candidate slopes: the union of polygon slopes (default), or a fixed list.
struct AlphaPolicy {
  std::optional<std::vector<Rational>> fixed;
};

struct GMReport {
  Params params;
  unsigned m = 0;
  int k_min = 2;
  int k_max = 2;
  std::vector<GMVerdict> verdicts;
  std::vector<GMVerdict> counterexamples;
  /// Slopes seen but outside alpha <= m, alpha < k-1; not asserted.
  std::vector<GMVerdict> excluded;

  bool ok() const noexcept { return counterexamples.empty(); }
  void merge(const GMReport& other);
};

/// d(k + p^m, alpha) == d(k, alpha) for every candidate alpha <= m, alpha < k-1.
GMReport check_gouvea_mazur(SeriesStore& store, int k, unsigned m, const AlphaPolicy& policy = {});
GMReport check_gouvea_mazur(const Params& params, int k, unsigned m,
                            const AlphaPolicy& policy = {});

/// k1 == k2 mod p^m; verifies d(k1, alpha) == d(k2, alpha) for alpha <= m,
/// alpha < min(k1, k2) - 1, both directly and along the chain of p^m steps.
bool check_theorem_intro_form(SeriesStore& store, int k1, int k2, unsigned m);
bool check_theorem_intro_form(const Params& params, int k1, int k2, unsigned m);

struct PeriodEntry {
  int k = 2;
  std::optional<SlopeSegment> slope;  // n-th smallest finite slope, absent if too few

  friend bool operator==(const PeriodEntry&, const PeriodEntry&) = default;
};

struct PeriodReport {
  Params params;
  unsigned n = 1;
  int k_min = 2;
  int k_max = 2;
  std::vector<PeriodEntry> entries;
  /// Smallest power of p, at most half the window, under which the observed
  /// sequence repeats; empty when none is observed or every entry is absent.
  std::optional<int> period;
  bool all_absent = false;

  /// One period of observations, starting at k_min.
  std::vector<std::optional<SlopeSegment>> cycle() const;
  std::string to_string() const;
};

/// n counts distinct finite slopes from the smallest (n = 1 is slope 0).
PeriodReport explore_periodicity(SeriesStore& store, unsigned n, int k_min, int k_max,
                                 unsigned jobs = 1);

/// a is a cyclic rotation of b.
bool same_cycle(const std::vector<std::optional<SlopeSegment>>& a,
                const std::vector<std::optional<SlopeSegment>>& b);

/// Outcome of one verification target over a grid.
struct SweepReport {
  std::string target;
  std::size_t checks = 0;
  std::vector<std::string> failures;  // hard: falsify a proved statement
  std::vector<std::string> warnings;  // empirical observations that did not hold
  std::vector<std::string> notes;

  bool ok() const noexcept { return failures.empty(); }
  void merge(SweepReport other);
};

struct Grid {
  Params params;
  int k_min = 2;
  int k_max = 2;
  unsigned m_min = 0;
  unsigned m_max = 0;
  unsigned jobs = 1;
};

/// U^(k) is glissando, has the (q-1)-stride sparsity pattern, and U_00 = 1.
SweepReport sweep_glissando(SeriesStore& store, const Grid& grid);
/// d(k, 0) = 1 and a_1 == -1 mod t; v_t(a_n) >= n(n-1)/2.
SweepReport sweep_ordinary(SeriesStore& store, const Grid& grid);
/// s_l >= l-1 for the elementary divisors of U^(k).
SweepReport sweep_divisors(SeriesStore& store, const Grid& grid);
/// Block congruence and glissando witnesses, m >= 1.
SweepReport sweep_block(SeriesStore& store, const Grid& grid);
/// Coefficient perturbation bound, m >= 1; logs the minimal margin per (k, m).
SweepReport sweep_perturbation(SeriesStore& store, const Grid& grid);
/// Polygons of P~ and P^(k) agree below slope k-1, m >= 1.
SweepReport sweep_window(SeriesStore& store, const Grid& grid);
/// d(k + p^m, alpha) = d(k, alpha) over the grid.
SweepReport sweep_gouvea_mazur(SeriesStore& store, const Grid& grid);
/// Finite slopes < k-1 and small denominators; warnings only.
SweepReport sweep_observations(SeriesStore& store, const Grid& grid);
/// p^m + sum min{l-1, p^m} > m(n-1) for all listed p, m in [m_min, m_max], n in [n_min, n_max].
SweepReport sweep_lemma_num(const std::vector<std::uint64_t>& primes, unsigned m_min,
                            unsigned m_max, std::uint64_t n_min, std::uint64_t n_max);

}  // namespace glissando
