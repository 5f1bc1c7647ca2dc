// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "alfeld/mesh.hpp"
#include "alfeld/poly.hpp"
#include "alfeld/smalldense.hpp"

namespace alfeld {

/// Per-macro-cell bookkeeping for the interior-point split. Child c omits
/// macro vertex c (0-based); its own barycentric coordinates are
/// [lambda_0 at slot 0, lambda_v at slot(v,c) for v != c], where lambda_0 is
/// the node function of the split point and lambda_v the node function of
/// macro vertex v on the refined cell. lambda_v vanishes identically on
/// child v. mu_v are the macro barycentric coordinates; everywhere on the
/// cell, mu_v = lambda_v + mu_v(x0) * lambda_0.
template <typename S>
struct LambdaSystem {
  int d = 0;
  std::vector<std::vector<S>> macro_verts;  // d+1 points in R^d
  std::vector<S> split;                     // x0
  S macro_volume{};                         // positive
  std::vector<S> child_volume;              // d+1 entries, positive
  // child_grad[c][slot] = constant gradient of child c's barycentric `slot`
  std::vector<std::vector<std::vector<S>>> child_grad;
  std::vector<S> mu_at_split;           // mu_v(x0)
  std::vector<std::vector<S>> grad_mu;  // d+1 constant gradients

  int n_children() const { return d + 1; }
  int nvars() const { return d + 1; }  // barycentric variables per child

  /// Child-coordinate slot of macro vertex v on child c (v != c).
  static int slot_of_vertex(int c, int v) { return v < c ? v + 1 : v; }
  /// Macro vertex sitting at child slot s >= 1 of child c.
  static int vertex_of_slot(int c, int s) { return (s - 1) < c ? s - 1 : s; }

  const std::vector<S>& grad_lambda0(int c) const { return child_grad[c][0]; }

  /// Gradient of the node function of macro vertex v restricted to child c
  /// (zero on child v).
  std::vector<S> grad_lambda(int v, int c) const {
    if (v == c) return std::vector<S>(d, scalar_from_int<S>(0));
    return child_grad[c][slot_of_vertex(c, v)];
  }

  BaryPoly<S> lambda0_on_child(int /*c*/) const {
    std::vector<S> lin(d + 1, scalar_from_int<S>(0));
    lin[0] = scalar_from_int<S>(1);
    return poly_linear(lin);
  }

  BaryPoly<S> lambda_on_child(int v, int c) const {
    std::vector<S> lin(d + 1, scalar_from_int<S>(0));
    if (v != c) lin[slot_of_vertex(c, v)] = scalar_from_int<S>(1);
    return poly_linear(lin);
  }

  BaryPoly<S> mu_on_child(int v, int c) const {
    std::vector<S> lin(d + 1, scalar_from_int<S>(0));
    lin[0] = mu_at_split[v];
    if (v != c) lin[slot_of_vertex(c, v)] += scalar_from_int<S>(1);
    return poly_linear(lin);
  }

  /// Barycentric coordinates of x in child c.
  std::vector<S> child_barycentric(int c, const std::vector<S>& x) const {
    std::vector<S> lam(d + 1, scalar_from_int<S>(0));
    for (int s = 0; s <= d; ++s) {
      S val = s == 0 ? scalar_from_int<S>(1) : scalar_from_int<S>(0);
      for (int i = 0; i < d; ++i)
        val += child_grad[c][s][i] * (x[i] - split[i]);
      lam[s] = val;
    }
    return lam;
  }

  /// Macro barycentric coordinates of x.
  std::vector<S> macro_barycentric(const std::vector<S>& x) const {
    std::vector<S> mu(d + 1, scalar_from_int<S>(0));
    for (int v = 0; v <= d; ++v) {
      S val = v == 0 ? scalar_from_int<S>(1) : scalar_from_int<S>(0);
      for (int i = 0; i < d; ++i)
        val += grad_mu[v][i] * (x[i] - macro_verts[0][i]);
      mu[v] = val;
    }
    return mu;
  }

  /// Physical coordinates of the child-barycentric point `lam` on child c.
  std::vector<S> child_point(int c, const std::vector<S>& lam) const {
    std::vector<S> x(d, scalar_from_int<S>(0));
    for (int s = 0; s <= d; ++s) {
      const std::vector<S>& p =
          s == 0 ? split : macro_verts[vertex_of_slot(c, s)];
      for (int i = 0; i < d; ++i) x[i] += lam[s] * p[i];
    }
    return x;
  }
};

using LambdaSystemD = LambdaSystem<double>;

namespace detail {

template <typename S>
S small_det(SmallMat<S> m) {
  const int n = m.rows;
  S det = scalar_from_int<S>(1);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (scalar_abs(m(i, k)) > scalar_abs(m(piv, k))) piv = i;
    if (scalar_is_zero(m(piv, k))) return scalar_from_int<S>(0);
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      det = -det;
    }
    det *= m(k, k);
    for (int i = k + 1; i < n; ++i) {
      S f = m(i, k) / m(k, k);
      for (int j = k; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return det;
}

/// Barycentric gradients and volume of the simplex with vertex list `pts`:
/// grad[s] for s = 1..d are the rows of E^{-1} with E = [p_s - p_0], and
/// grad[0] = -sum of the others.
template <typename S>
void simplex_coordinate_gradients(const std::vector<std::vector<S>>& pts,
                                  std::vector<std::vector<S>>& grad,
                                  S& volume) {
  const int d = static_cast<int>(pts[0].size());
  SmallMat<S> e(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) e(i, j) = pts[j + 1][i] - pts[0][i];
  S det = small_det(e);
  ALFELD_REQUIRE(!scalar_is_zero(det), Err::DegenerateChild,
                 "degenerate simplex in coordinate gradients");
  SmallMat<S> inv = invert(e);
  grad.assign(d + 1, std::vector<S>(d, scalar_from_int<S>(0)));
  for (int s = 1; s <= d; ++s)
    for (int i = 0; i < d; ++i) {
      grad[s][i] = inv(s - 1, i);
      grad[0][i] -= inv(s - 1, i);
    }
  S fact = scalar_from_int<S>(1);
  for (int i = 2; i <= d; ++i) fact *= scalar_from_int<S>(i);
  volume = scalar_abs(det) / fact;
}

}  // namespace detail

/// Builds the lambda system from explicit vertex coordinates.
template <typename S>
LambdaSystem<S> make_lambda_system(const std::vector<std::vector<S>>& macro,
                                   const std::vector<S>& split) {
  LambdaSystem<S> ls;
  ls.d = static_cast<int>(split.size());
  ls.macro_verts = macro;
  ls.split = split;

  detail::simplex_coordinate_gradients(macro, ls.grad_mu, ls.macro_volume);
  ls.mu_at_split.resize(ls.d + 1);
  {
    // mu_v(x0) via the affine form anchored at macro vertex 0
    for (int v = 0; v <= ls.d; ++v) {
      S val = v == 0 ? scalar_from_int<S>(1) : scalar_from_int<S>(0);
      for (int i = 0; i < ls.d; ++i)
        val += ls.grad_mu[v][i] * (split[i] - macro[0][i]);
      ls.mu_at_split[v] = val;
    }
  }

  ls.child_grad.resize(ls.d + 1);
  ls.child_volume.resize(ls.d + 1);
  for (int c = 0; c <= ls.d; ++c) {
    std::vector<std::vector<S>> pts;
    pts.push_back(split);
    for (int v = 0; v <= ls.d; ++v)
      if (v != c) pts.push_back(macro[v]);
    detail::simplex_coordinate_gradients(pts, ls.child_grad[c],
                                         ls.child_volume[c]);
  }
  return ls;
}

/// Lambda system of one refined macro cell (double precision).
LambdaSystemD lambda_system(const RefinedMesh& refined, int macro_cell);

}  // namespace alfeld
