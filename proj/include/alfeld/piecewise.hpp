// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "alfeld/lambda.hpp"
#include "alfeld/poly.hpp"

namespace alfeld {

enum class Continuity { L2, C0 };

/// Scalar piecewise polynomial on the split of one macro cell: one
/// barycentric-monomial polynomial per child, in that child's own
/// coordinates.
template <typename S>
struct PiecewiseScalar {
  std::vector<BaryPoly<S>> on_child;
  Continuity continuity = Continuity::L2;

  int n_children() const { return static_cast<int>(on_child.size()); }
  int max_degree() const {
    int k = 0;
    for (const auto& p : on_child) k = std::max(k, p.degree);
    return k;
  }
};

template <typename S>
struct PiecewiseField {
  std::vector<PiecewiseScalar<S>> comp;

  int n_comp() const { return static_cast<int>(comp.size()); }
};

using PiecewiseScalarD = PiecewiseScalar<double>;
using PiecewiseFieldD = PiecewiseField<double>;

template <typename S>
PiecewiseScalar<S> pw_zero(const LambdaSystem<S>& geom, int degree = 0) {
  PiecewiseScalar<S> p;
  p.on_child.assign(geom.n_children(), BaryPoly<S>(geom.nvars(), degree));
  p.continuity = Continuity::C0;
  return p;
}

template <typename S>
PiecewiseField<S> pw_zero_field(const LambdaSystem<S>& geom, int degree = 0) {
  PiecewiseField<S> f;
  f.comp.assign(geom.d, pw_zero(geom, degree));
  return f;
}

template <typename S>
PiecewiseScalar<S> pw_add(const PiecewiseScalar<S>& a,
                          const PiecewiseScalar<S>& b) {
  ALFELD_REQUIRE(a.n_children() == b.n_children(), Err::CellMismatch,
                 "piecewise add on different cells");
  PiecewiseScalar<S> r;
  r.continuity = (a.continuity == Continuity::C0 &&
                  b.continuity == Continuity::C0)
                     ? Continuity::C0
                     : Continuity::L2;
  for (int c = 0; c < a.n_children(); ++c)
    r.on_child.push_back(poly_add(a.on_child[c], b.on_child[c]));
  return r;
}

template <typename S>
PiecewiseScalar<S> pw_scale(const PiecewiseScalar<S>& a, const S& s) {
  PiecewiseScalar<S> r = a;
  for (auto& p : r.on_child) p = poly_scale(p, s);
  return r;
}

template <typename S>
PiecewiseScalar<S> pw_sub(const PiecewiseScalar<S>& a,
                          const PiecewiseScalar<S>& b) {
  return pw_add(a, pw_scale(b, scalar_from_int<S>(-1)));
}

template <typename S>
PiecewiseField<S> pw_add(const PiecewiseField<S>& a,
                         const PiecewiseField<S>& b) {
  PiecewiseField<S> r;
  for (int i = 0; i < a.n_comp(); ++i)
    r.comp.push_back(pw_add(a.comp[i], b.comp[i]));
  return r;
}

template <typename S>
PiecewiseField<S> pw_scale(const PiecewiseField<S>& a, const S& s) {
  PiecewiseField<S> r = a;
  for (auto& cpn : r.comp) cpn = pw_scale(cpn, s);
  return r;
}

template <typename S>
PiecewiseField<S> pw_sub(const PiecewiseField<S>& a,
                         const PiecewiseField<S>& b) {
  return pw_add(a, pw_scale(b, scalar_from_int<S>(-1)));
}

/// Spatial gradient, child by child, contracting the formal barycentric
/// partials with the constant coordinate gradients.
template <typename S>
PiecewiseField<S> gradient(const PiecewiseScalar<S>& p,
                           const LambdaSystem<S>& geom) {
  PiecewiseField<S> g;
  g.comp.assign(geom.d, PiecewiseScalar<S>());
  for (int i = 0; i < geom.d; ++i) {
    g.comp[i].continuity = Continuity::L2;
    g.comp[i].on_child.resize(geom.n_children());
  }
  for (int c = 0; c < geom.n_children(); ++c) {
    int deg = std::max(p.on_child[c].degree - 1, 0);
    std::vector<BaryPoly<S>> acc(geom.d, BaryPoly<S>(geom.nvars(), deg));
    for (int s = 0; s <= geom.d; ++s) {
      BaryPoly<S> ds = poly_partial(p.on_child[c], s);
      for (int i = 0; i < geom.d; ++i)
        acc[i] = poly_add(acc[i], poly_scale(ds, geom.child_grad[c][s][i]));
    }
    for (int i = 0; i < geom.d; ++i) g.comp[i].on_child[c] = acc[i];
  }
  return g;
}

template <typename S>
PiecewiseScalar<S> divergence(const PiecewiseField<S>& v,
                              const LambdaSystem<S>& geom) {
  PiecewiseScalar<S> r;
  r.continuity = Continuity::L2;
  r.on_child.resize(geom.n_children());
  for (int c = 0; c < geom.n_children(); ++c) {
    int deg = 0;
    for (int i = 0; i < geom.d; ++i)
      deg = std::max(deg, v.comp[i].on_child[c].degree - 1);
    BaryPoly<S> acc(geom.nvars(), std::max(deg, 0));
    for (int i = 0; i < geom.d; ++i)
      for (int s = 0; s <= geom.d; ++s) {
        BaryPoly<S> ds = poly_partial(v.comp[i].on_child[c], s);
        acc = poly_add(acc, poly_scale(ds, geom.child_grad[c][s][i]));
      }
    r.on_child[c] = acc;
  }
  return r;
}

// --- integrals and norms -----------------------------------------------------

template <typename S>
S pw_integral(const PiecewiseScalar<S>& p, const LambdaSystem<S>& geom) {
  S s = scalar_from_int<S>(0);
  for (int c = 0; c < geom.n_children(); ++c)
    s += poly_integral(p.on_child[c], geom.child_volume[c]);
  return s;
}

template <typename S>
S l2_inner(const PiecewiseScalar<S>& p, const PiecewiseScalar<S>& q,
           const LambdaSystem<S>& geom) {
  ALFELD_REQUIRE(p.n_children() == q.n_children(), Err::CellMismatch,
                 "inner product on different cells");
  S s = scalar_from_int<S>(0);
  for (int c = 0; c < geom.n_children(); ++c)
    s += poly_integral(poly_mul(p.on_child[c], q.on_child[c]),
                       geom.child_volume[c]);
  return s;
}

template <typename S>
S l2_norm_sq(const PiecewiseScalar<S>& p, const LambdaSystem<S>& geom) {
  return l2_inner(p, p, geom);
}

template <typename S>
S l2_inner(const PiecewiseField<S>& u, const PiecewiseField<S>& v,
           const LambdaSystem<S>& geom) {
  S s = scalar_from_int<S>(0);
  for (int i = 0; i < u.n_comp(); ++i)
    s += l2_inner(u.comp[i], v.comp[i], geom);
  return s;
}

template <typename S>
S l2_norm_sq(const PiecewiseField<S>& v, const LambdaSystem<S>& geom) {
  return l2_inner(v, v, geom);
}

template <typename S>
S h1_semi_sq(const PiecewiseField<S>& v, const LambdaSystem<S>& geom) {
  S s = scalar_from_int<S>(0);
  for (int i = 0; i < v.n_comp(); ++i) {
    PiecewiseField<S> g = gradient(v.comp[i], geom);
    s += l2_norm_sq(g, geom);
  }
  return s;
}

inline double l2_norm(const PiecewiseScalarD& p, const LambdaSystemD& geom) {
  return std::sqrt(std::max(l2_norm_sq(p, geom), 0.0));
}
inline double l2_norm(const PiecewiseFieldD& v, const LambdaSystemD& geom) {
  return std::sqrt(std::max(l2_norm_sq(v, geom), 0.0));
}
inline double h1_norm(const PiecewiseFieldD& v, const LambdaSystemD& geom) {
  return std::sqrt(
      std::max(l2_norm_sq(v, geom) + h1_semi_sq(v, geom), 0.0));
}

template <typename S>
S pw_mean(const PiecewiseScalar<S>& p, const LambdaSystem<S>& geom) {
  S vol = scalar_from_int<S>(0);
  for (const S& v : geom.child_volume) vol += v;
  return pw_integral(p, geom) / vol;
}

// --- macro polynomial restriction ---------------------------------------------

/// Re-expands a polynomial given in macro barycentric monomials (variables
/// mu_0..mu_d) child by child, using mu_v = lambda_v + mu_v(x0) lambda_0.
template <typename S>
PiecewiseScalar<S> restrict_macro_poly(const BaryPoly<S>& macro,
                                       const LambdaSystem<S>& geom) {
  ALFELD_REQUIRE(macro.nvars == geom.d + 1, Err::DimensionMismatch,
                 "macro polynomial variable count");
  PiecewiseScalar<S> out;
  out.continuity = Continuity::C0;
  out.on_child.resize(geom.n_children());
  const auto& tab = MonomialTable::get(macro.nvars, macro.degree);
  for (int c = 0; c < geom.n_children(); ++c) {
    BaryPoly<S> acc(geom.nvars(), macro.degree);
    for (int r = 0; r < tab.size(); ++r) {
      if (scalar_is_zero(macro.coef[r])) continue;
      const MultiIndex& b = tab.exponents(r);
      BaryPoly<S> term = poly_constant(geom.nvars(), macro.coef[r]);
      for (int v = 0; v <= geom.d; ++v)
        if (b[v] > 0) term = poly_mul(term, poly_pow(geom.mu_on_child(v, c), b[v]));
      acc = poly_add(homogenize(acc, term.degree), term);
    }
    out.on_child[c] = homogenize(acc, macro.degree);
  }
  return out;
}

template <typename S>
PiecewiseField<S> restrict_macro_field(const std::vector<BaryPoly<S>>& comps,
                                       const LambdaSystem<S>& geom) {
  PiecewiseField<S> f;
  for (const auto& p : comps) f.comp.push_back(restrict_macro_poly(p, geom));
  return f;
}

// --- evaluation ----------------------------------------------------------------

template <typename S>
S pw_eval_on_child(const PiecewiseScalar<S>& p, int c,
                   const std::vector<S>& lam) {
  return poly_eval(p.on_child[c], lam);
}

/// Locates the child containing x (double precision only) and evaluates.
int locate_child(const LambdaSystemD& geom, const Point& x);

double pw_eval(const PiecewiseScalarD& p, const LambdaSystemD& geom,
               const Point& x);
Eigen::VectorXd pw_eval(const PiecewiseFieldD& v, const LambdaSystemD& geom,
                        const Point& x);
Eigen::MatrixXd pw_eval_jacobian(const PiecewiseFieldD& v,
                                 const LambdaSystemD& geom, const Point& x);

// --- trace and continuity checks -------------------------------------------------

/// Lattice of barycentric points of degree n on an (m-1)-simplex.
std::vector<std::vector<double>> barycentric_lattice(int m, int n);

/// Max |p| over the degree-n lattice of every boundary facet of the macro
/// cell (facet c is seen from child c with slot 0 coordinate = 0).
double boundary_trace_max(const PiecewiseScalarD& p, const LambdaSystemD& geom,
                          int lattice_degree);
double boundary_trace_max(const PiecewiseFieldD& v, const LambdaSystemD& geom,
                          int lattice_degree);

/// Max jump of p over the degree-n lattice of every interior interface
/// between two children.
double interface_jump_max(const PiecewiseScalarD& p, const LambdaSystemD& geom,
                          int lattice_degree);
double interface_jump_max(const PiecewiseFieldD& v, const LambdaSystemD& geom,
                          int lattice_degree);

/// Checks the stored continuity class by sampling (degree+1 lattice).
bool verify_c0(const PiecewiseScalarD& p, const LambdaSystemD& geom,
               double tol = 1e-11);

}  // namespace alfeld
