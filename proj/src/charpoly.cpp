#include "glissando/charpoly.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "glissando/errors.hpp"
#include "glissando/newton.hpp"

namespace glissando {

namespace {

struct SparseEntry {
  std::size_t col;
  const FpPoly* value;
};

// Coefficients c_0..c_n of det(I - X A) over F_p[t] mod t^prec.
//
// Berkowitz: with A_r the leading r x r block, a = A[r-1][r-1], R the row
// and S the column bordering A_{r-1}, the series of A_r is T_r(X) times the
// series of A_{r-1} truncated at X^(r+1), where
//   T_r = 1 - a X - sum_{i>=0} (R A_{r-1}^i S) X^(i+2).
std::vector<FpPoly> berkowitz(const PolyMatrix& a, std::size_t prec) {
  const std::size_t n = a.rows();
  const std::uint32_t p = a.p();
  const FpPoly zero(p);

  std::vector<std::vector<SparseEntry>> rows(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!a(i, j).is_zero()) rows[i].push_back({j, &a(i, j)});

  auto mul = [prec](const FpPoly& f, const FpPoly& g) { return mul_mod(f, g, prec); };

  std::vector<FpPoly> c{FpPoly::one(p).truncated(prec)};
  for (std::size_t r = 1; r <= n; ++r) {
    const std::size_t idx = r - 1;
    std::vector<FpPoly> tcol(r + 1, zero);
    tcol[0] = FpPoly::one(p).truncated(prec);
    tcol[1] = -a(idx, idx).truncated(prec);

    if (r >= 2) {
      std::vector<FpPoly> v(idx, zero);
      bool any = false;
      for (std::size_t i = 0; i < idx; ++i) {
        v[i] = a(i, idx).truncated(prec);
        any = any || !v[i].is_zero();
      }
      for (std::size_t s = 0; s + 2 <= r && any; ++s) {
        FpPoly acc(p);
        for (const auto& e : rows[idx]) {
          if (e.col >= idx) break;
          if (!v[e.col].is_zero()) acc += mul(*e.value, v[e.col]);
        }
        tcol[s + 2] = -acc;
        if (s + 2 == r) break;
        std::vector<FpPoly> w(idx, zero);
        any = false;
        for (std::size_t i = 0; i < idx; ++i) {
          for (const auto& e : rows[i]) {
            if (e.col >= idx) break;
            if (!v[e.col].is_zero()) w[i] += mul(*e.value, v[e.col]);
          }
          any = any || !w[i].is_zero();
        }
        v = std::move(w);
      }
    }

    std::vector<FpPoly> next(r + 1, zero);
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j].is_zero()) continue;
      for (std::size_t i = j; i <= r; ++i)
        if (!tcol[i - j].is_zero()) next[i] += mul(tcol[i - j], c[j]);
    }
    c = std::move(next);
  }
  return c;
}

// Strongly connected components of the graph i -> j for nonzero a(i, j),
// in an order that makes the permuted matrix block triangular.
std::vector<std::vector<std::size_t>> components(const PolyMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !a(i, j).is_zero()) adj[i].push_back(j);

  constexpr std::size_t kUnset = SIZE_MAX;
  std::vector<std::size_t> index(n, kUnset), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;

  // Iterative Tarjan; frames hold (vertex, next edge position).
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos < adj[v].size()) {
        std::size_t w = adj[v][pos++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
    }
  }
  return out;
}

}  // namespace

std::size_t CharSeries::x_degree() const noexcept {
  for (std::size_t n = coeffs.size(); n-- > 0;)
    if (!coeffs[n].is_zero()) return n;
  return 0;
}

SeriesValuation CharSeries::valuation(std::size_t n) const {
  const FpPoly c = coeff(n);
  if (exact()) {
    Valuation v = c.valuation();
    if (v.is_infinite()) return {INT64_MAX, true};
    return {v.value(), true};
  }
  return TruncatedSeries(c, precision).valuation();
}

CharSeries multiply(const CharSeries& a, const CharSeries& b) {
  if (a.p != b.p) throw ParameterError("series over different prime fields");
  CharSeries r;
  r.p = a.p;
  r.dim = a.dim + b.dim;
  r.precision = std::min(a.precision, b.precision);
  r.degree_bound = a.degree_bound + b.degree_bound;
  if (!r.exact() && r.precision > r.degree_bound) r.precision = kExact;
  r.coeffs.assign(r.dim + 1, FpPoly(r.p));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.coeffs.size(); ++j)
      if (!b.coeffs[j].is_zero()) r.coeffs[i + j] += mul_mod(a.coeffs[i], b.coeffs[j], r.precision);
  }
  return r;
}

std::size_t char_series_degree_bound(const PolyMatrix& m) {
  std::size_t by_cols = 0, by_rows = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::int64_t d = -1;
    for (std::size_t i = 0; i < m.rows(); ++i) d = std::max(d, m(i, j).degree());
    if (d > 0) by_cols += static_cast<std::size_t>(d);
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::int64_t d = -1;
    for (std::size_t j = 0; j < m.cols(); ++j) d = std::max(d, m(i, j).degree());
    if (d > 0) by_rows += static_cast<std::size_t>(d);
  }
  return std::min(by_cols, by_rows);
}

CharSeries char_series(const PolyMatrix& m, std::size_t precision) {
  if (!m.is_square())
    throw ParameterError("char_series needs a square matrix (got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()) + ")");
  if (precision == 0) throw ParameterError("precision must be at least 1");

  CharSeries out;
  out.p = m.p();
  out.dim = m.rows();
  out.degree_bound = char_series_degree_bound(m);
  // Precision above every possible degree is exact arithmetic.
  out.precision = precision > out.degree_bound ? kExact : precision;
  out.coeffs.assign(out.dim + 1, FpPoly(out.p));
  out.coeffs[0] = FpPoly::one(out.p);

  for (const auto& comp : components(m)) {
    PolyMatrix sub(comp.size(), comp.size(), m.p());
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (std::size_t j = 0; j < comp.size(); ++j) sub(i, j) = m(comp[i], comp[j]);
    std::vector<FpPoly> part = berkowitz(sub, out.precision);
    // Multiply into the running product, keeping X-degree <= dim.
    std::vector<FpPoly> acc(out.dim + 1, FpPoly(out.p));
    for (std::size_t i = 0; i <= out.dim; ++i) {
      if (out.coeffs[i].is_zero()) continue;
      for (std::size_t j = 0; j < part.size() && i + j <= out.dim; ++j)
        if (!part[j].is_zero()) acc[i + j] += mul_mod(out.coeffs[i], part[j], out.precision);
    }
    out.coeffs = std::move(acc);
  }
  return out;
}

CharSeries scaled_char_series(const PolyMatrix& m, std::size_t l) {
  if (!is_glissando(m)) throw ParameterError("scaled_char_series needs a glissando matrix");
  CharSeries s = char_series(m.shifted(l));
  for (std::size_t n = 0; n <= s.dim; ++n) {
    const Valuation v = s.coeffs[n].valuation();
    const auto bound = static_cast<std::int64_t>(n == 0 ? 0 : l * n + n * (n - 1) / 2);
    if (v < Valuation(bound)) {
      std::ostringstream os;
      os << "valuation bound fails: v_t(p_" << n << ") = " << v.to_string() << " < " << bound
         << " for l=" << l;
      throw VerificationFailure(os.str());
    }
  }
  const NewtonPolygon poly = newton_polygon(s);
  for (const auto& seg : poly.segments)
    if (!seg.slope.is_infinite() && seg.slope.rational() < Rational(static_cast<std::int64_t>(l)))
      throw VerificationFailure("Newton slope " + seg.slope.to_string() + " below l=" +
                                std::to_string(l));
  return s;
}

CharSeries tilde_series(const Params& params, int k, unsigned m) {
  BlockReport block = verify_block_congruence(params, k, m);
  if (!block.ok()) throw VerificationFailure(block.describe_failures());
  return tilde_series(char_series(build_u_matrix(params, k).entries), block);
}

CharSeries tilde_series(const CharSeries& pk, const BlockReport& block) {
  if (!block.ok()) throw VerificationFailure(block.describe_failures());
  CharSeries factor;
  if (block.middle_empty()) {
    factor.p = pk.p;
    factor.coeffs = {FpPoly::one(pk.p)};
  } else {
    factor = char_series(block.d_prime.shifted(static_cast<std::size_t>(block.k - 1)), pk.precision);
  }
  CharSeries r = multiply(pk, factor);
  // Pad to the dimension of U^(k+p^m).
  const std::size_t dim = static_cast<std::size_t>(block.k) + block.pm - 1;
  r.dim = dim;
  r.coeffs.resize(dim + 1, FpPoly(pk.p));
  return r;
}

std::int64_t perturbation_bound(std::uint64_t pm, std::size_t n) {
  auto bound = static_cast<std::int64_t>(pm);
  for (std::size_t l = 1; l + 1 <= n; ++l)
    bound += static_cast<std::int64_t>(std::min<std::uint64_t>(l - 1, pm));
  return bound;
}

Valuation PerturbEntry::margin() const {
  if (difference.is_infinite()) return Valuation::infinity();
  return Valuation(difference.value() - bound);
}

bool PerturbReport::ok() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](const PerturbEntry& e) { return e.ok(); });
}

PerturbReport check_perturbation(const Params& params, int k, unsigned m) {
  const std::uint64_t pm = checked_pow(params.p, m);
  const UMatrix small = build_u_matrix(params, k);
  const UMatrix large = build_u_matrix(params, k + static_cast<int>(pm));
  BlockReport block = verify_block_congruence(small, large, m);
  if (!block.ok()) throw VerificationFailure(block.describe_failures());
  return check_perturbation(params, k, m, char_series(large.entries),
                            tilde_series(char_series(small.entries), block));
}

PerturbReport check_perturbation(const Params& params, int k, unsigned m, const CharSeries& large,
                                 const CharSeries& tilde) {
  if (!large.exact() || !tilde.exact())
    throw ParameterError("perturbation check needs exact series");
  const std::uint64_t pm = checked_pow(params.p, m);
  const std::size_t top = static_cast<std::size_t>(k) + pm - 1;
  PerturbReport rep{params, k, m, {}};
  for (std::size_t n = 0; n <= top; ++n) {
    PerturbEntry e;
    e.n = n;
    e.difference = (large.coeff(n) - tilde.coeff(n)).valuation();
    e.bound = perturbation_bound(pm, n);
    rep.entries.push_back(e);
  }
  return rep;
}

bool check_lemma_num(std::uint64_t p, unsigned m, std::uint64_t n) {
  const std::uint64_t pm = checked_pow(p, m);
  // Closed form of the running sum of min{l-1, p^m} for l = 1..n-1.
  std::uint64_t sum;
  if (n >= 2 && n - 2 >= pm)
    sum = pm * (pm + 1) / 2 + pm * (n - 2 - pm);
  else
    sum = n >= 2 ? (n - 1) * (n - 2) / 2 : 0;
  return pm + sum > static_cast<std::uint64_t>(m) * (n - 1);
}

}  // namespace glissando
