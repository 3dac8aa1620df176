#include "glissando/divisors.hpp"

#include <algorithm>
#include <optional>

#include "glissando/charpoly.hpp"
#include "glissando/errors.hpp"

namespace glissando {

std::string DivisorValue::to_string() const {
  switch (kind) {
    case Kind::Finite: return std::to_string(value);
    case Kind::Floor: return ">=" + std::to_string(value);
    case Kind::Infinite: return "inf";
  }
  return "?";
}

std::size_t default_divisor_precision(const PolyMatrix& m) {
  return 2 * std::max(m.rows(), m.cols()) + 8;
}

std::size_t exact_divisor_precision(const PolyMatrix& m) {
  // Every nonzero minor has degree at most the smaller of the row-degree and
  // column-degree sums, which bounds the sum of the finite exponents.
  return char_series_degree_bound(m) + 1;
}

DivisorList elementary_divisors(const PolyMatrix& m, std::size_t precision) {
  if (precision == 0) throw ParameterError("divisor precision must be at least 1");
  DivisorList out{m.rows(), m.cols(), precision, {}};
  const std::size_t r = std::min(m.rows(), m.cols());
  const bool floors_are_infinite = precision > char_series_degree_bound(m);

  std::vector<TruncatedSeries> w;
  w.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w.emplace_back(m(i, j), precision);
  auto at = [&](std::size_t i, std::size_t j) -> TruncatedSeries& { return w[i * m.cols() + j]; };

  std::vector<std::size_t> rows(m.rows()), cols(m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;

  while (out.values.size() < r) {
    std::optional<std::pair<std::size_t, std::size_t>> piv;  // positions in rows/cols
    std::int64_t best = 0;
    for (std::size_t cj = 0; cj < cols.size(); ++cj)
      for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        const SeriesValuation v = at(rows[ri], cols[cj]).valuation();
        if (!v.exact) continue;
        if (!piv || v.value < best) {
          piv = {ri, cj};
          best = v.value;
        }
      }
    if (!piv) break;

    const std::size_t pr = rows[piv->first], pc = cols[piv->second];
    const auto v = static_cast<std::size_t>(best);
    const TruncatedSeries unit_inv = at(pr, pc).divided_by_t_power(v).inverse();
    for (std::size_t i : rows) {
      if (i == pr) continue;
      const TruncatedSeries& a = at(i, pc);
      if (a.value().is_zero()) continue;
      const TruncatedSeries f = a.divided_by_t_power(v) * unit_inv;
      for (std::size_t j : cols) {
        if (j == pc || at(pr, j).value().is_zero()) continue;
        at(i, j) = at(i, j) - f * at(pr, j);
      }
    }
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(piv->first));
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(piv->second));
    out.values.push_back(DivisorValue::finite(best));
  }
  while (out.values.size() < r)
    out.values.push_back(floors_are_infinite
                             ? DivisorValue::infinite()
                             : DivisorValue::floor(static_cast<std::int64_t>(precision)));
  return out;
}

bool check_divisor_bound(const PolyMatrix& m, std::size_t precision) {
  if (!is_glissando(m)) throw ParameterError("divisor bound check needs a glissando matrix");
  std::size_t n = precision == 0 ? default_divisor_precision(m) : precision;
  for (;;) {
    const DivisorList d = elementary_divisors(m, n);
    bool undecided = false;
    for (std::size_t l = 1; l <= d.values.size(); ++l) {
      const DivisorValue& s = d.values[l - 1];
      const auto need = static_cast<std::int64_t>(l) - 1;
      if (s.at_least(need)) continue;
      if (s.kind == DivisorValue::Kind::Floor) {
        undecided = true;
        continue;
      }
      return false;
    }
    if (!undecided) return true;
    n *= 2;
  }
}

}  // namespace glissando
