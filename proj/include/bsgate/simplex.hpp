#pragma once

// Exact phase-I simplex: finds x >= 0 with A x = b, or reports that none exists.
// Bland's least-index rule for both the entering and the leaving variable.

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <vector>

namespace bsgate {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using RMatrix = std::vector<std::vector<Rational>>;

/// Returns a basic feasible solution of {A x = b, x >= 0}, or nullopt.
inline std::optional<std::vector<Rational>> phase_one(RMatrix A, std::vector<Rational> b) {
  const std::size_t m = A.size();
  const std::size_t n = m ? A[0].size() : 0;
  if (m == 0) return std::vector<Rational>(n, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0) {
      for (auto& a : A[i]) a = -a;
      b[i] = -b[i];
    }
  // Tableau columns: n originals, m artificials, rhs.
  const std::size_t cols = n + m;
  RMatrix T(m, std::vector<Rational>(cols + 1, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1;
    T[i][cols] = b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
  // Reduced costs of the phase-I objective (sum of artificials).
  std::vector<Rational> cost(cols + 1, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= cols; ++j)
      if (j < n || j == cols) cost[j] -= T[i][j];

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      Rational ratio = T[i][cols] / T[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot happen for phase I
    Rational piv = T[leave][enter];
    for (auto& v : T[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      Rational f = T[i][enter];
      for (std::size_t j = 0; j <= cols; ++j)
        if (T[leave][j] != 0) T[i][j] -= f * T[leave][j];
    }
    if (cost[enter] != 0) {
      Rational f = cost[enter];
      for (std::size_t j = 0; j <= cols; ++j)
        if (T[leave][j] != 0) cost[j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
  if (cost[cols] != 0) return std::nullopt;  // optimum sum of artificials > 0
  std::vector<Rational> x(n, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = T[i][cols];
  return x;
}

}  // namespace bsgate
