#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "glissando/field.hpp"
#include "glissando/matrix.hpp"

namespace glissando {

/// Matrix of U on weight-k cuspforms of level Gamma_1(t) in the basis
/// c_0, ..., c_{k-2}. Entry (i, j) is the coefficient of c_i in U(c_j).
struct UMatrix {
  Params params;
  int k = 2;
  PolyMatrix entries;

  std::size_t dim() const noexcept { return entries.rows(); }
};

/// Evaluates the explicit formula for U(c_j) column by column.
/// Throws ParameterError if k < 2.
UMatrix build_u_matrix(const Params& params, int k);

/// One failed congruence check in a block comparison.
struct BlockMismatch {
  std::string condition;  // "top-left", "top-right", "right", "C-glissando", "D-divisibility", "D-glissando"
  std::size_t row = 0;
  std::size_t col = 0;
  std::string detail;
};

/// Witnesses for the lower block-triangular approximation of U^(k+p^m)
/// modulo t^(p^m).
struct BlockReport {
  Params params;
  int k = 2;
  unsigned m = 1;
  std::size_t pm = 0;  // p^m
  std::vector<BlockMismatch> failures;
  PolyMatrix c;        // p^m x (k-1)
  PolyMatrix d;        // p^m x (p^m-k+1), empty when p^m <= k-1
  PolyMatrix d_prime;  // upper square block of d, empty when p^m <= k-1
  PolyMatrix v;        // the block approximation itself, (k+p^m-1) square

  bool ok() const noexcept { return failures.empty(); }
  bool middle_empty() const noexcept { return d.cols() == 0; }
  std::string describe_failures() const;
};

/// Compares U^(k+p^m) against U^(k) modulo t^(p^m) and extracts C, D, D'.
BlockReport verify_block_congruence(const Params& params, int k, unsigned m);

/// Same, reusing already-built matrices.
BlockReport verify_block_congruence(const UMatrix& small, const UMatrix& large, unsigned m);

/// Nonzero entries only on the diagonal or where i == j mod (q-1).
bool satisfies_sparsity(const UMatrix& u);

}  // namespace glissando
