#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "flatlift/error.hpp"

namespace flatlift::detail {

// Fraction-free (Bareiss) row reduction of an integer matrix, with the identity
// carried alongside so that rows reducing to zero yield integer left-kernel
// vectors. Intermediate entries are minors of the bordered matrix; boundary
// matrices of crowns are totally unimodular, so they stay in {-1, 0, +1}.
struct RowReduction {
  int rank = 0;
  std::vector<std::vector<std::int64_t>> left_kernel;  // content-1, sign-normalized
};

inline RowReduction integer_row_reduce(const std::vector<std::vector<std::int64_t>>& mat,
                                       int rows, int cols) {
  const int width = cols + rows;
  std::vector<std::vector<std::int64_t>> w(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) {
    w[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(width), 0);
    for (int j = 0; j < cols; ++j)
      w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    w[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols + i)] = 1;
  }

  std::int64_t prev_pivot = 1;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot_row = -1;
    for (int i = rank; i < rows; ++i)
      if (w[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
        pivot_row = i;
        break;
      }
    if (pivot_row < 0) continue;
    std::swap(w[static_cast<std::size_t>(rank)], w[static_cast<std::size_t>(pivot_row)]);
    const std::int64_t piv = w[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
    for (int i = rank + 1; i < rows; ++i) {
      const std::int64_t head = w[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
      if (head == 0 && prev_pivot == 1) continue;
      for (int j = 0; j < width; ++j) {
        __int128 val = static_cast<__int128>(piv) *
                           w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                       static_cast<__int128>(head) *
                           w[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)];
        val /= prev_pivot;  // exact by Sylvester's identity
        require(val <= INT64_MAX && val >= INT64_MIN, Errc::internal_check_failed,
                "integer elimination overflow");
        w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            static_cast<std::int64_t>(val);
      }
    }
    prev_pivot = piv;
    ++rank;
  }

  RowReduction out;
  out.rank = rank;
  for (int i = rank; i < rows; ++i) {
    std::vector<std::int64_t> v(w[static_cast<std::size_t>(i)].begin() + cols,
                                w[static_cast<std::size_t>(i)].end());
    std::int64_t g = 0;
    for (std::int64_t x : v) g = std::gcd(g, x < 0 ? -x : x);
    if (g > 1)
      for (auto& x : v) x /= g;
    for (std::int64_t x : v) {
      if (x == 0) continue;
      if (x < 0)
        for (auto& y : v) y = -y;
      break;
    }
    out.left_kernel.push_back(std::move(v));
  }
  return out;
}

}  // namespace flatlift::detail
