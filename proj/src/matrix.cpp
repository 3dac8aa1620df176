#include "glissando/matrix.hpp"

#include "glissando/errors.hpp"

namespace glissando {

PolyMatrix PolyMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                             std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw ParameterError("matrix block out of range");
  PolyMatrix b(nr, nc, p_);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

PolyMatrix PolyMatrix::truncated(std::size_t n) const {
  PolyMatrix r(*this);
  for (auto& e : r.data_) e = e.truncated(n);
  return r;
}

PolyMatrix PolyMatrix::shifted(std::size_t s) const {
  PolyMatrix r(*this);
  for (auto& e : r.data_) e = e.shifted(s);
  return r;
}

bool PolyMatrix::is_zero() const {
  for (const auto& e : data_)
    if (!e.is_zero()) return false;
  return true;
}

bool is_glissando(const PolyMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const FpPoly& e = m(i, j);
      if (e.is_zero()) continue;
      if (!e.is_monomial() || e.degree() != static_cast<std::int64_t>(j)) return false;
    }
  return true;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols() != b.rows() || a.p() != b.p())
    throw ParameterError("matrix product shape or field mismatch");
  PolyMatrix r(a.rows(), b.cols(), a.p());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      if (a(i, l).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!b(l, j).is_zero()) r(i, j) += a(i, l) * b(l, j);
    }
  return r;
}

}  // namespace glissando
