// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "alfeld/error.hpp"
#include "alfeld/scalar.hpp"

namespace alfeld {

/// Dense row-major matrix over an arbitrary field scalar. Used for the
/// small per-cell systems that must also run in exact rational arithmetic;
/// the double-precision code paths generally use Eigen instead.
template <typename S>
struct SmallMat {
  int rows = 0;
  int cols = 0;
  std::vector<S> a;

  SmallMat() = default;
  SmallMat(int r, int c) : rows(r), cols(c), a(r * c, scalar_from_int<S>(0)) {}

  S& operator()(int i, int j) { return a[i * cols + j]; }
  const S& operator()(int i, int j) const { return a[i * cols + j]; }
};

template <typename S>
std::vector<S> matvec(const SmallMat<S>& m, const std::vector<S>& x) {
  std::vector<S> y(m.rows, scalar_from_int<S>(0));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) y[i] += m(i, j) * x[j];
  return y;
}

/// Solves a square system by Gaussian elimination with partial pivoting
/// (largest |pivot|; exact for rational scalars).
template <typename S>
std::vector<S> solve_square(SmallMat<S> m, std::vector<S> b) {
  ALFELD_REQUIRE(m.rows == m.cols && int(b.size()) == m.rows,
                 Err::DimensionMismatch, "solve_square shape");
  const int n = m.rows;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (scalar_abs(m(i, k)) > scalar_abs(m(piv, k))) piv = i;
    ALFELD_REQUIRE(!scalar_is_zero(m(piv, k)), Err::SingularToTolerance,
                   "singular matrix in solve_square");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      S f = m(i, k) / m(k, k);
      if (scalar_is_zero(f)) continue;
      for (int j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<S> x(n, scalar_from_int<S>(0));
  for (int i = n - 1; i >= 0; --i) {
    S s = b[i];
    for (int j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
    x[i] = s / m(i, i);
  }
  return x;
}

/// Matrix inverse via repeated solves.
template <typename S>
SmallMat<S> invert(const SmallMat<S>& m) {
  ALFELD_REQUIRE(m.rows == m.cols, Err::DimensionMismatch, "invert shape");
  const int n = m.rows;
  SmallMat<S> inv(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<S> e(n, scalar_from_int<S>(0));
    e[j] = scalar_from_int<S>(1);
    std::vector<S> x = solve_square(m, e);
    for (int i = 0; i < n; ++i) inv(i, j) = x[i];
  }
  return inv;
}

/// Minimal-norm solution of a full-row-rank underdetermined (or square)
/// system A x = b: x = A^T (A A^T)^{-1} b.
template <typename S>
std::vector<S> solve_min_norm(const SmallMat<S>& m, const std::vector<S>& b) {
  ALFELD_REQUIRE(m.rows <= m.cols && int(b.size()) == m.rows,
                 Err::DimensionMismatch, "solve_min_norm shape");
  const int r = m.rows, c = m.cols;
  SmallMat<S> g(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      S s = scalar_from_int<S>(0);
      for (int k = 0; k < c; ++k) s += m(i, k) * m(j, k);
      g(i, j) = s;
    }
  std::vector<S> y = solve_square(g, b);
  std::vector<S> x(c, scalar_from_int<S>(0));
  for (int k = 0; k < c; ++k) {
    S s = scalar_from_int<S>(0);
    for (int i = 0; i < r; ++i) s += m(i, k) * y[i];
    x[k] = s;
  }
  return x;
}

}  // namespace alfeld
