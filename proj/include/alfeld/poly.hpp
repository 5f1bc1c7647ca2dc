// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <vector>

#include "alfeld/error.hpp"
#include "alfeld/multiindex.hpp"
#include "alfeld/scalar.hpp"

namespace alfeld {

/// Polynomial on one simplex in barycentric-monomial form. The
/// representation is homogeneous: every stored monomial has total degree
/// equal to `degree`; lower-degree content is carried by multiplying with
/// powers of the partition of unity (sum of the barycentric coordinates).
template <typename S>
struct BaryPoly {
  int nvars = 0;
  int degree = 0;
  std::vector<S> coef;  // ranked by MonomialTable::get(nvars, degree)

  BaryPoly() = default;
  BaryPoly(int nv, int deg)
      : nvars(nv),
        degree(deg),
        coef(MonomialTable::get(nv, deg).size(), scalar_from_int<S>(0)) {}

  bool is_zero() const {
    for (const S& c : coef)
      if (!scalar_is_zero(c)) return false;
    return true;
  }
};

using BaryPolyD = BaryPoly<double>;

template <typename S>
BaryPoly<S> poly_monomial(int nvars, const MultiIndex& a, const S& c) {
  BaryPoly<S> p(nvars, multi_index_order(a));
  p.coef[MonomialTable::get(nvars, p.degree).rank(a)] = c;
  return p;
}

template <typename S>
BaryPoly<S> poly_constant(int nvars, const S& c) {
  BaryPoly<S> p(nvars, 0);
  p.coef[0] = c;
  return p;
}

/// Degree-1 polynomial c0*l_0 + ... + c_{n-1}*l_{n-1}.
template <typename S>
BaryPoly<S> poly_linear(const std::vector<S>& c) {
  BaryPoly<S> p(static_cast<int>(c.size()), 1);
  const auto& tab = MonomialTable::get(p.nvars, 1);
  for (int j = 0; j < p.nvars; ++j) {
    MultiIndex e(p.nvars, 0);
    e[j] = 1;
    p.coef[tab.rank(e)] = c[j];
  }
  return p;
}

/// Multiplies by (sum of barycentric coordinates)^(target - degree),
/// i.e. re-expresses the same function at a higher homogeneous degree.
template <typename S>
BaryPoly<S> homogenize(const BaryPoly<S>& p, int target) {
  ALFELD_REQUIRE(target >= p.degree, Err::DegreeMismatch,
                 "cannot homogenize to a lower degree");
  BaryPoly<S> cur = p;
  for (int step = p.degree; step < target; ++step) {
    const auto& from = MonomialTable::get(p.nvars, step);
    const auto& to = MonomialTable::get(p.nvars, step + 1);
    BaryPoly<S> next(p.nvars, step + 1);
    for (int r = 0; r < from.size(); ++r) {
      if (scalar_is_zero(cur.coef[r])) continue;
      MultiIndex a = from.exponents(r);
      for (int j = 0; j < p.nvars; ++j) {
        a[j] += 1;
        next.coef[to.rank(a)] += cur.coef[r];
        a[j] -= 1;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

template <typename S>
BaryPoly<S> poly_add(const BaryPoly<S>& a, const BaryPoly<S>& b) {
  ALFELD_REQUIRE(a.nvars == b.nvars, Err::SimplexMismatch,
                 "poly_add on different simplices");
  int deg = std::max(a.degree, b.degree);
  BaryPoly<S> ah = homogenize(a, deg);
  BaryPoly<S> bh = homogenize(b, deg);
  for (std::size_t i = 0; i < ah.coef.size(); ++i) ah.coef[i] += bh.coef[i];
  return ah;
}

template <typename S>
BaryPoly<S> poly_scale(const BaryPoly<S>& a, const S& s) {
  BaryPoly<S> r = a;
  for (S& c : r.coef) c *= s;
  return r;
}

template <typename S>
BaryPoly<S> poly_sub(const BaryPoly<S>& a, const BaryPoly<S>& b) {
  return poly_add(a, poly_scale(b, scalar_from_int<S>(-1)));
}

template <typename S>
BaryPoly<S> poly_mul(const BaryPoly<S>& a, const BaryPoly<S>& b) {
  ALFELD_REQUIRE(a.nvars == b.nvars, Err::SimplexMismatch,
                 "poly_mul on different simplices");
  const auto& ta = MonomialTable::get(a.nvars, a.degree);
  const auto& tb = MonomialTable::get(b.nvars, b.degree);
  const auto& tr = MonomialTable::get(a.nvars, a.degree + b.degree);
  BaryPoly<S> r(a.nvars, a.degree + b.degree);
  MultiIndex sum(a.nvars, 0);
  for (int i = 0; i < ta.size(); ++i) {
    if (scalar_is_zero(a.coef[i])) continue;
    const MultiIndex& ai = ta.exponents(i);
    for (int j = 0; j < tb.size(); ++j) {
      if (scalar_is_zero(b.coef[j])) continue;
      const MultiIndex& bj = tb.exponents(j);
      for (int v = 0; v < a.nvars; ++v) sum[v] = ai[v] + bj[v];
      r.coef[tr.rank(sum)] += a.coef[i] * b.coef[j];
    }
  }
  return r;
}

template <typename S>
BaryPoly<S> poly_pow(const BaryPoly<S>& a, int n) {
  BaryPoly<S> r = poly_constant(a.nvars, scalar_from_int<S>(1));
  for (int i = 0; i < n; ++i) r = poly_mul(r, a);
  return r;
}

/// Formal partial derivative with respect to barycentric variable j:
/// lambda^a -> a_j lambda^(a - e_j). Combined with the (constant) gradients
/// of the coordinates this yields the true spatial gradient.
template <typename S>
BaryPoly<S> poly_partial(const BaryPoly<S>& p, int j) {
  if (p.degree == 0) return BaryPoly<S>(p.nvars, 0);
  const auto& from = MonomialTable::get(p.nvars, p.degree);
  const auto& to = MonomialTable::get(p.nvars, p.degree - 1);
  BaryPoly<S> r(p.nvars, p.degree - 1);
  for (int i = 0; i < from.size(); ++i) {
    if (scalar_is_zero(p.coef[i])) continue;
    MultiIndex a = from.exponents(i);
    if (a[j] == 0) continue;
    S f = scalar_from_int<S>(a[j]) * p.coef[i];
    a[j] -= 1;
    r.coef[to.rank(a)] += f;
  }
  return r;
}

template <typename S>
S poly_eval(const BaryPoly<S>& p, const std::vector<S>& lambda) {
  ALFELD_REQUIRE(int(lambda.size()) == p.nvars, Err::DimensionMismatch,
                 "poly_eval coordinate count");
  const auto& tab = MonomialTable::get(p.nvars, p.degree);
  // power table: pw[v][e] = lambda[v]^e
  std::vector<std::vector<S>> pw(p.nvars);
  for (int v = 0; v < p.nvars; ++v) {
    pw[v].resize(p.degree + 1);
    pw[v][0] = scalar_from_int<S>(1);
    for (int e = 1; e <= p.degree; ++e) pw[v][e] = pw[v][e - 1] * lambda[v];
  }
  S s = scalar_from_int<S>(0);
  for (int i = 0; i < tab.size(); ++i) {
    if (scalar_is_zero(p.coef[i])) continue;
    const MultiIndex& a = tab.exponents(i);
    S t = p.coef[i];
    for (int v = 0; v < p.nvars; ++v)
      if (a[v] > 0) t *= pw[v][a[v]];
    s += t;
  }
  return s;
}

/// Exact integral of the monomial lambda^a over a simplex of measure
/// `volume` in R^d with d = nvars-1:
///   integral = volume * d! * prod(a_i!) / (|a| + d)!
template <typename S>
S monomial_integral_factor(int nvars, const MultiIndex& a) {
  const int d = nvars - 1;
  S r = scalar_from_int<S>(1);
  for (int v = 0; v < nvars; ++v)
    for (int j = 2; j <= a[v]; ++j) r *= scalar_from_int<S>(j);
  for (int j = 2; j <= d; ++j) r *= scalar_from_int<S>(j);
  const int total = multi_index_order(a) + d;
  for (int j = 2; j <= total; ++j) r /= scalar_from_int<S>(j);
  return r;
}

template <typename S>
S poly_integral(const BaryPoly<S>& p, const S& volume) {
  const auto& tab = MonomialTable::get(p.nvars, p.degree);
  S s = scalar_from_int<S>(0);
  for (int i = 0; i < tab.size(); ++i) {
    if (scalar_is_zero(p.coef[i])) continue;
    s += p.coef[i] * monomial_integral_factor<S>(p.nvars, tab.exponents(i));
  }
  return s * volume;
}

template <typename S>
double poly_max_abs_coef(const BaryPoly<S>& p) {
  double m = 0;
  for (const S& c : p.coef) m = std::max(m, std::abs(to_double(c)));
  return m;
}

}  // namespace alfeld
