#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "glissando/field.hpp"
#include "glissando/matrix.hpp"
#include "glissando/poly.hpp"
#include "glissando/umatrix.hpp"

namespace glissando {

/// det(I - X M) = sum_n coeffs[n] X^n with coeffs[n] in F_p[t].
///
/// `precision == kExact` means every coefficient is exact. Otherwise each
/// coefficient is known modulo t^precision and valuations at or above the
/// precision are floors. `degree_bound` caps deg_t of every coefficient of
/// the exact series, so any precision above it is exact.
struct CharSeries {
  std::uint32_t p = 2;
  std::size_t dim = 0;
  std::size_t precision = kExact;
  std::size_t degree_bound = 0;
  std::vector<FpPoly> coeffs;  // size dim + 1

  bool exact() const noexcept { return precision == kExact; }
  /// Coefficient of X^n; zero for n > dim.
  FpPoly coeff(std::size_t n) const { return n < coeffs.size() ? coeffs[n] : FpPoly(p); }
  /// Largest n with a nonzero coefficient.
  std::size_t x_degree() const noexcept;
  SeriesValuation valuation(std::size_t n) const;

  friend bool operator==(const CharSeries&, const CharSeries&) = default;
};

/// Product of two series in F_p[t][X]; dims add.
CharSeries multiply(const CharSeries& a, const CharSeries& b);

/// det(I - X M) by the division-free Berkowitz recurrence. Strongly connected
/// components of the sparsity graph are processed separately and multiplied.
/// Pass a finite precision to work modulo t^precision.
CharSeries char_series(const PolyMatrix& m, std::size_t precision = kExact);

/// Upper bound for deg_t of every coefficient of det(I - X M).
std::size_t char_series_degree_bound(const PolyMatrix& m);

/// char_series of t^l M, after checking v_t(p_n) >= l n + n(n-1)/2 and that
/// every finite Newton slope is at least l. M must be glissando.
CharSeries scaled_char_series(const PolyMatrix& m, std::size_t l);

/// P~(X) = P^(k)(X) det(I - t^(k-1) X D'), padded to dimension k+p^m-1.
CharSeries tilde_series(const Params& params, int k, unsigned m);
CharSeries tilde_series(const CharSeries& pk, const BlockReport& block);

/// p^m + sum_{l=1}^{n-1} min{l-1, p^m}.
std::int64_t perturbation_bound(std::uint64_t pm, std::size_t n);

struct PerturbEntry {
  std::size_t n = 0;
  Valuation difference = Valuation::infinity();  // v_t(a_n^(k+p^m) - a~_n)
  std::int64_t bound = 0;

  bool ok() const noexcept { return difference >= Valuation(bound); }
  /// difference - bound, +infinity when the coefficients agree exactly.
  Valuation margin() const;
};

struct PerturbReport {
  Params params;
  int k = 2;
  unsigned m = 1;
  std::vector<PerturbEntry> entries;

  bool ok() const noexcept;
};

PerturbReport check_perturbation(const Params& params, int k, unsigned m);
/// `large` is P^(k+p^m); `tilde` is P~. Both must be exact.
PerturbReport check_perturbation(const Params& params, int k, unsigned m, const CharSeries& large,
                                 const CharSeries& tilde);

/// p^m + sum_{l=1}^{n-1} min{l-1, p^m} > m(n-1).
bool check_lemma_num(std::uint64_t p, unsigned m, std::uint64_t n);

}  // namespace glissando
