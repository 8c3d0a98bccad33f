#pragma once

// Dense tableau simplex for  max c.x  s.t.  A x <= b, x >= 0  with b >= 0,
// so the slack basis is feasible. Bland's rule, hence no cycling. Works for
// double and for exact rationals.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "xhogkit/core/error.hpp"

namespace xhogkit::fourier_lp {

template <class Num>
struct SimplexResult {
  Num value{};
  std::vector<Num> x;
  int iterations = 0;
};

template <class Num>
SimplexResult<Num> simplex_maximize(const std::vector<std::vector<Num>>& A, const std::vector<Num>& b,
                                    const std::vector<Num>& c, const Num& eps, int max_iterations = 100000) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  detail::require<DimensionMismatch>(b.size() == m, "simplex: rhs length mismatch");
  for (const auto& row : A) detail::require<DimensionMismatch>(row.size() == n, "simplex: ragged constraint matrix");
  for (const auto& bi : b) detail::require<UsageError>(!(bi < Num(0)), "simplex: rhs must be nonnegative");

  // Columns: n structural, m slack, then rhs.
  const std::size_t W = n + m + 1;
  std::vector<std::vector<Num>> T(m + 1, std::vector<Num>(W, Num(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = Num(1);
    T[i][W - 1] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) T[m][j] = -c[j];  // objective row holds reduced costs, negated

  SimplexResult<Num> res;
  for (;;) {
    std::size_t enter = W;
    for (std::size_t j = 0; j + 1 < W; ++j)
      if (T[m][j] < -eps) {
        enter = j;
        break;
      }
    if (enter == W) break;
    detail::require<NumericalError>(res.iterations < max_iterations, "simplex: iteration limit reached");

    std::size_t leave = m;
    Num best{};
    for (std::size_t i = 0; i < m; ++i) {
      if (!(T[i][enter] > eps)) continue;
      const Num ratio = T[i][W - 1] / T[i][enter];
      if (leave == m || ratio < best || (!(best < ratio) && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) throw NumericalError("simplex: objective is unbounded (column " + std::to_string(enter) + ")");

    const Num piv = T[leave][enter];
    for (auto& v : T[leave]) v = v / piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const Num f = T[i][enter];
      if (f == Num(0)) continue;
      for (std::size_t j = 0; j < W; ++j) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
    ++res.iterations;
  }

  res.x.assign(n, Num(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = T[i][W - 1];
  res.value = T[m][W - 1];
  return res;
}

}  // namespace xhogkit::fourier_lp
