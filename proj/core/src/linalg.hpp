#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

namespace octk::detail {

/// Solves the n x n system A x = b in place by Gaussian elimination with
/// partial pivoting. Returns false when A is numerically singular.
template <std::size_t N>
bool solve_dense(std::array<std::array<double, N>, N> a, std::array<double, N> b, int n,
                 std::array<double, N>& x) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-300) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return true;
}

}  // namespace octk::detail
