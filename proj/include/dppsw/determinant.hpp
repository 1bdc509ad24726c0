#pragma once

#include <vector>

#include "dppsw/signed_log.hpp"

namespace dppsw {

/// Row-major dense square matrix, small (n <= 32).
struct SmallMatrix {
  int n = 0;
  std::vector<double> a;  // n*n, row-major

  explicit SmallMatrix(int size) : n(size), a(size * size, 0.0) {}
  double& operator()(int i, int j) { return a[i * n + j]; }
  double operator()(int i, int j) const { return a[i * n + j]; }
};

/// Determinant by partially pivoted elimination, result as SignedLog so the
/// pivot product cannot overflow. Singular matrices return sign 0.
/// Throws std::invalid_argument for n > 32 or non-finite entries.
SignedLog det_small(SmallMatrix m);

/// Determinant of a matrix whose entries are given in signed-log form
/// (entries like e^{nu_j x_k} overflow doubles long before the determinant
/// does). Each row is scaled down by its max magnitude before elimination.
SignedLog det_small_log(int n, const std::vector<SignedLog>& entries_rowmajor);

}  // namespace dppsw
