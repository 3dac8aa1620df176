#include "glissando/umatrix.hpp"

#include <algorithm>
#include <sstream>

#include "glissando/errors.hpp"

namespace glissando {

UMatrix build_u_matrix(const Params& params, int k) {
  if (k < 2) throw ParameterError("weight k must be at least 2 (got " + std::to_string(k) + ")");
  PrimeField field(params.p);
  const std::size_t n = static_cast<std::size_t>(k) - 1;
  const std::int64_t top = k - 2;
  const std::uint64_t stride = params.q - 1;
  UMatrix u{params, k, PolyMatrix(n, n, params.p)};

  for (std::size_t j = 0; j < n; ++j) {
    const auto sj = static_cast<std::int64_t>(j);
    // (-t)^j C(k-2-j, j) on the diagonal.
    std::uint32_t diag = field.binom(top - sj, sj);
    if (j % 2 == 1) diag = field.neg(diag);
    u.entries(j, j) = FpPoly::monomial(params.p, diag, j);

    // h != 0 with i = j + h(q-1) in [0, k-2]:
    //   -t^j { C(k-2-i, -h(q-1)) + (-1)^(j+1) C(k-2-i, j) }.
    for (std::size_t i = j % stride; i < n; i += stride) {
      if (i == j) continue;
      const auto si = static_cast<std::int64_t>(i);
      std::uint32_t first = field.binom(top - si, sj - si);
      std::uint32_t second = field.binom(top - si, sj);
      if (j % 2 == 0) second = field.neg(second);
      const std::uint32_t c = field.neg(field.add(first, second));
      u.entries(i, j) = FpPoly::monomial(params.p, c, j);
    }
  }
  return u;
}

bool satisfies_sparsity(const UMatrix& u) {
  const std::uint64_t stride = u.params.q - 1;
  for (std::size_t i = 0; i < u.dim(); ++i)
    for (std::size_t j = 0; j < u.dim(); ++j)
      if (i != j && (i > j ? i - j : j - i) % stride != 0 && !u.entries(i, j).is_zero())
        return false;
  return true;
}

std::string BlockReport::describe_failures() const {
  std::ostringstream os;
  for (const auto& f : failures)
    os << "p=" << params.p << " q=" << params.q << " k=" << k << " m=" << m << ": " << f.condition
       << " mismatch at (" << f.row << ',' << f.col << ")" << (f.detail.empty() ? "" : ": ")
       << f.detail << '\n';
  return os.str();
}

BlockReport verify_block_congruence(const Params& params, int k, unsigned m) {
  if (m < 1) throw ParameterError("m must be at least 1");
  const auto pm = static_cast<int>(checked_pow(params.p, m));
  return verify_block_congruence(build_u_matrix(params, k), build_u_matrix(params, k + pm), m);
}

BlockReport verify_block_congruence(const UMatrix& small, const UMatrix& large, unsigned m) {
  if (m < 1) throw ParameterError("m must be at least 1");
  const Params& params = small.params;
  const std::size_t pm = checked_pow(params.p, m);
  if (!(large.params == params) || large.k != small.k + static_cast<int>(pm))
    throw ParameterError("block congruence needs U^(k) and U^(k+p^m) over the same field");

  BlockReport rep;
  rep.params = params;
  rep.k = small.k;
  rep.m = m;
  rep.pm = pm;

  const std::size_t n = small.dim();  // k-1
  const std::size_t big = large.dim();  // k+p^m-1
  const PolyMatrix& L = large.entries;
  const PolyMatrix& S = small.entries;
  auto mod = [pm](const FpPoly& f) { return f.truncated(pm); };

  // Top-left block agrees with U^(k).
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (mod(L(i, j)) != mod(S(i, j)))
        rep.failures.push_back({"top-left", i, j,
                                L(i, j).to_string() + " vs " + S(i, j).to_string()});
  // Top rows vanish to the right of column k-2.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = n; j < big; ++j)
      if (!mod(L(i, j)).is_zero()) rep.failures.push_back({"top-right", i, j, L(i, j).to_string()});
  // Rightmost k-1 columns vanish in every row.
  for (std::size_t i = n; i < big; ++i)
    for (std::size_t j = std::max(n, pm); j < big; ++j)
      if (!mod(L(i, j)).is_zero()) rep.failures.push_back({"right", i, j, L(i, j).to_string()});

  rep.c = L.block(n, 0, pm, n);
  if (!is_glissando(rep.c)) rep.failures.push_back({"C-glissando", n, 0, ""});

  const std::size_t middle = pm >= n + 1 ? pm - n : 0;  // p^m - k + 1 when k <= p^m
  rep.d = PolyMatrix(pm, middle, params.p);
  for (std::size_t i = 0; i < pm; ++i)
    for (std::size_t j = 0; j < middle; ++j) {
      const FpPoly& e = L(n + i, n + j);
      if (!e.is_zero() && e.valuation() < Valuation(static_cast<std::int64_t>(n))) {
        rep.failures.push_back({"D-divisibility", n + i, n + j, e.to_string()});
        continue;
      }
      std::vector<std::uint32_t> c(e.coeffs().begin() + static_cast<std::ptrdiff_t>(std::min(n, e.coeffs().size())),
                                   e.coeffs().end());
      rep.d(i, j) = FpPoly(params.p, std::move(c));
    }
  if (!is_glissando(rep.d)) rep.failures.push_back({"D-glissando", n, n, ""});
  rep.d_prime = rep.d.block(0, 0, middle, middle);

  rep.v = PolyMatrix(big, big, params.p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rep.v(i, j) = S(i, j);
  for (std::size_t i = 0; i < pm; ++i) {
    for (std::size_t j = 0; j < n; ++j) rep.v(n + i, j) = rep.c(i, j);
    for (std::size_t j = 0; j < middle; ++j) rep.v(n + i, n + j) = rep.d(i, j).shifted(n);
  }
  return rep;
}

}  // namespace glissando
