#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "glissando/poly.hpp"

namespace glissando {

/// Dense row-major matrix of polynomials over a fixed F_p.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols, std::uint32_t p)
      : rows_(rows), cols_(cols), p_(p), data_(rows * cols, FpPoly(p)) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  std::uint32_t p() const noexcept { return p_; }

  FpPoly& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const FpPoly& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  /// Copy of the block [r0, r0+nr) x [c0, c0+nc).
  PolyMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  /// Every entry reduced modulo t^n.
  PolyMatrix truncated(std::size_t n) const;
  /// Every entry multiplied by t^s.
  PolyMatrix shifted(std::size_t s) const;
  bool is_zero() const;

  friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint32_t p_ = 2;
  std::vector<FpPoly> data_;
};

/// True iff every entry in column j is zero or c*t^j with c nonzero.
bool is_glissando(const PolyMatrix& m);

/// Matrix product over F_p[t].
PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);

}  // namespace glissando
