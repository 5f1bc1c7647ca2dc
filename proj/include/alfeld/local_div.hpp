// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "alfeld/piecewise.hpp"
#include "alfeld/smalldense.hpp"

namespace alfeld {

constexpr int kLocalDivDegreeCap = 8;

/// Layered form of a piecewise polynomial of homogeneous degree s on the
/// split cell: sum over l of lambda0^l * sum_{|alpha| = s-l} a_alpha *
/// lambda^alpha, with a_alpha piecewise constant and a_alpha = 0 on every
/// child in the support set N(alpha) = {v : alpha_v > 0}.
template <typename S>
struct LayerDecomposition {
  int degree = 0;  // s
  int nvars = 0;   // d+1 macro-vertex variables
  // layers[l][rank(alpha)][child], alpha of order s-l
  std::vector<std::vector<std::vector<S>>> layers;

  static LayerDecomposition zero(int nvars, int degree) {
    LayerDecomposition ld;
    ld.degree = degree;
    ld.nvars = nvars;
    ld.layers.resize(degree + 1);
    for (int l = 0; l <= degree; ++l) {
      const auto& tab = MonomialTable::get(nvars, degree - l);
      ld.layers[l].assign(tab.size(),
                          std::vector<S>(nvars, scalar_from_int<S>(0)));
    }
    return ld;
  }

  double max_abs(int l) const {
    double m = 0;
    for (const auto& a : layers[l])
      for (const S& v : a) m = std::max(m, std::abs(to_double(v)));
    return m;
  }
};

/// Unique layer decomposition: on child c the functions {lambda_0} and
/// {lambda_v : v != c} are the child's own barycentric coordinates, so the
/// child-local monomial expansion of p directly yields the coefficients for
/// every alpha with alpha_c = 0.
template <typename S>
LayerDecomposition<S> decompose(const PiecewiseScalar<S>& p,
                                const LambdaSystem<S>& geom, int degree) {
  const int d = geom.d;
  for (const auto& poly : p.on_child)
    ALFELD_REQUIRE(poly.degree <= degree, Err::DegreeMismatch,
                   "piecewise polynomial degree above decomposition degree");
  auto ld = LayerDecomposition<S>::zero(d + 1, degree);
  for (int c = 0; c <= d; ++c) {
    BaryPoly<S> pc = homogenize(p.on_child[c], degree);
    const auto& ctab = MonomialTable::get(d + 1, degree);
    for (int r = 0; r < ctab.size(); ++r) {
      if (scalar_is_zero(pc.coef[r])) continue;
      const MultiIndex& e = ctab.exponents(r);
      const int l = e[0];
      MultiIndex alpha(d + 1, 0);
      for (int s = 1; s <= d; ++s)
        alpha[LambdaSystem<S>::vertex_of_slot(c, s)] = e[s];
      const auto& atab = MonomialTable::get(d + 1, degree - l);
      ld.layers[l][atab.rank(alpha)][c] = pc.coef[r];
    }
  }
  return ld;
}

/// The piecewise polynomial represented by one layer.
template <typename S>
PiecewiseScalar<S> layer_function(const LayerDecomposition<S>& ld, int l,
                                  const LambdaSystem<S>& geom) {
  const int d = geom.d;
  const int m = ld.degree - l;
  const auto& atab = MonomialTable::get(d + 1, m);
  PiecewiseScalar<S> out;
  out.continuity = Continuity::L2;
  out.on_child.assign(d + 1, BaryPoly<S>(d + 1, ld.degree));
  for (int c = 0; c <= d; ++c) {
    const auto& ctab = MonomialTable::get(d + 1, ld.degree);
    for (int r = 0; r < atab.size(); ++r) {
      const MultiIndex& alpha = atab.exponents(r);
      if (alpha[c] > 0) continue;  // monomial vanishes on child c
      const S& a = ld.layers[l][r][c];
      if (scalar_is_zero(a)) continue;
      MultiIndex e(d + 1, 0);
      e[0] = l;
      for (int v = 0; v <= d; ++v)
        if (v != c) e[LambdaSystem<S>::slot_of_vertex(c, v)] = alpha[v];
      out.on_child[c].coef[ctab.rank(e)] += a;
    }
  }
  return out;
}

template <typename S>
PiecewiseScalar<S> reconstruct(const LayerDecomposition<S>& ld,
                               const LambdaSystem<S>& geom) {
  PiecewiseScalar<S> out = pw_zero(geom, ld.degree);
  out.continuity = Continuity::L2;
  for (int l = 0; l <= ld.degree; ++l)
    out = pw_add(out, layer_function(ld, l, geom));
  return out;
}

template <typename S>
struct StepResult {
  PiecewiseField<S> v;                     // in P^c_{l+m+1}, zero trace
  std::vector<std::vector<S>> s_alpha;     // per alpha of order m
};

/// One sweep step: given layer l with coefficients b (order m = degree-l,
/// m >= 1), builds v = lambda0^(l+1) sum_alpha s_alpha lambda^alpha with
/// (l+1) s_alpha . grad(lambda0)|_child = b_alpha on every child outside
/// N(alpha). The minimal-norm solution makes the construction
/// deterministic when fewer than d children are active.
template <typename S>
StepResult<S> step(const LayerDecomposition<S>& ld, int l,
                   const LambdaSystem<S>& geom) {
  const int d = geom.d;
  const int m = ld.degree - l;
  ALFELD_REQUIRE(m >= 1, Err::DegreeMismatch, "step needs order m >= 1");
  const auto& atab = MonomialTable::get(d + 1, m);
  const auto& ctab = MonomialTable::get(d + 1, ld.degree + 1);

  StepResult<S> res;
  res.s_alpha.assign(atab.size(), std::vector<S>(d, scalar_from_int<S>(0)));
  res.v.comp.assign(d, PiecewiseScalar<S>());
  for (int i = 0; i < d; ++i) {
    res.v.comp[i].continuity = Continuity::C0;
    res.v.comp[i].on_child.assign(d + 1, BaryPoly<S>(d + 1, ld.degree + 1));
  }

  for (int r = 0; r < atab.size(); ++r) {
    const MultiIndex& alpha = atab.exponents(r);
    std::vector<int> active;
    bool nonzero = false;
    for (int c = 0; c <= d; ++c) {
      if (alpha[c] == 0) active.push_back(c);
      if (!scalar_is_zero(ld.layers[l][r][c])) nonzero = true;
    }
    if (!nonzero || active.empty()) continue;

    SmallMat<S> rows(static_cast<int>(active.size()), d);
    std::vector<S> rhs(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      const auto& g = geom.grad_lambda0(active[i]);
      for (int j = 0; j < d; ++j)
        rows(static_cast<int>(i), j) = scalar_from_int<S>(l + 1) * g[j];
      rhs[i] = ld.layers[l][r][active[i]];
    }
    std::vector<S> s;
    try {
      s = solve_min_norm(rows, rhs);
    } catch (const Error&) {
      throw Error(Err::SingularNormalSystem,
                  "normal system singular; geometry corrupted");
    }
    res.s_alpha[r] = s;

    // accumulate s_alpha lambda0^(l+1) lambda^alpha on each active child
    for (int c : active) {
      MultiIndex e(d + 1, 0);
      e[0] = l + 1;
      for (int v = 0; v <= d; ++v)
        if (v != c) e[LambdaSystem<S>::slot_of_vertex(c, v)] = alpha[v];
      int rank = ctab.rank(e);
      for (int i = 0; i < d; ++i)
        res.v.comp[i].on_child[c].coef[rank] += s[i];
    }
  }
  return res;
}

template <typename S>
struct FinalCorrectionResult {
  PiecewiseField<S> v;       // s * lambda0^k
  std::vector<S> s;          // the solved direction
  S child0_residual{};       // k s.grad(lambda0)|_{child 0} - b_0
};

/// Closes the construction: for the residual b lambda0^(k-1) with zero mean
/// over the cell, solves k s.grad(lambda0)|_child = b_child on children
/// 1..d and asserts (rather than imposes) the child-0 identity implied by
/// the zero mean.
template <typename S>
FinalCorrectionResult<S> final_correction(const std::vector<S>& b, int k,
                                          const LambdaSystem<S>& geom,
                                          double mean_tol = 1e-10) {
  const int d = geom.d;
  ALFELD_REQUIRE(int(b.size()) == d + 1, Err::DimensionMismatch,
                 "one residual value per child required");
  // zero mean of b lambda0^(k-1): the lambda0 moment is the same positive
  // multiple of the child volume on every child
  S mean = scalar_from_int<S>(0);
  double scale = 0;
  for (int c = 0; c <= d; ++c) {
    mean += b[c] * geom.child_volume[c];
    scale += std::abs(to_double(b[c]) * to_double(geom.child_volume[c]));
  }
  ALFELD_REQUIRE(std::abs(to_double(mean)) <= mean_tol * std::max(scale, 1e-300),
                 Err::MeanNotZero, "final correction input has nonzero mean");

  SmallMat<S> rows(d, d);
  std::vector<S> rhs(d);
  for (int c = 1; c <= d; ++c) {
    const auto& g = geom.grad_lambda0(c);
    for (int j = 0; j < d; ++j) rows(c - 1, j) = scalar_from_int<S>(k) * g[j];
    rhs[c - 1] = b[c];
  }
  FinalCorrectionResult<S> res;
  try {
    res.s = solve_square(rows, rhs);
  } catch (const Error&) {
    throw Error(Err::SingularNormalSystem,
                "normal system singular; geometry corrupted");
  }

  S lhs0 = scalar_from_int<S>(0);
  const auto& g0 = geom.grad_lambda0(0);
  for (int j = 0; j < d; ++j) lhs0 += scalar_from_int<S>(k) * res.s[j] * g0[j];
  res.child0_residual = lhs0 - b[0];

  res.v.comp.assign(d, PiecewiseScalar<S>());
  const auto& ctab = MonomialTable::get(d + 1, k);
  MultiIndex e(d + 1, 0);
  e[0] = k;
  int rank = ctab.rank(e);
  for (int i = 0; i < d; ++i) {
    res.v.comp[i].continuity = Continuity::C0;
    res.v.comp[i].on_child.assign(d + 1, BaryPoly<S>(d + 1, k));
    for (int c = 0; c <= d; ++c)
      res.v.comp[i].on_child[c].coef[rank] = res.s[i];
  }
  return res;
}

template <typename S>
struct LocalDivSolution {
  PiecewiseField<S> v;
  S child0_residual{};
};

/// Full pipeline: decompose p, sweep layers 0..s-1 merging residuals, then
/// apply the final lambda0^k correction. div v = p exactly up to the
/// arithmetic of S.
template <typename S>
LocalDivSolution<S> solve_local_div_core(const PiecewiseScalar<S>& p, int k,
                                         const LambdaSystem<S>& geom,
                                         double mean_tol = 1e-10) {
  const int d = geom.d;
  ALFELD_REQUIRE(k >= 1, Err::InvalidArgument, "polynomial degree k >= 1");
  ALFELD_REQUIRE(k <= kLocalDivDegreeCap, Err::DegreeTooHigh,
                 "degree above the configured cap");
  ALFELD_REQUIRE(p.max_degree() <= k - 1, Err::DegreeMismatch,
                 "pressure degree above k-1");

  // zero mean over the cell
  {
    S integral = pw_integral(p, geom);
    double nrm = std::sqrt(std::max(to_double(l2_norm_sq(p, geom)), 0.0));
    double vol = 0;
    for (const S& v : geom.child_volume) vol += to_double(v);
    ALFELD_REQUIRE(
        std::abs(to_double(integral)) <=
            mean_tol * std::max(nrm * std::sqrt(vol), 1e-300),
        Err::MeanNotZero, "local divergence target must have zero mean");
  }

  const int s = k - 1;
  PiecewiseScalar<S> ps = p;
  for (auto& poly : ps.on_child) poly = homogenize(poly, s);
  LayerDecomposition<S> target = decompose(ps, geom, s);

  LocalDivSolution<S> out;
  out.v = pw_zero_field(geom, k);

  for (int l = 0; l < s; ++l) {
    bool nonzero = false;
    for (const auto& a : target.layers[l])
      for (const S& val : a)
        if (!scalar_is_zero(val)) nonzero = true;
    if (!nonzero) continue;
    StepResult<S> st = step(target, l, geom);
    out.v = pw_add(out.v, st.v);
    // remove div(v_l) = layer_l + q from the remaining target
    PiecewiseScalar<S> dv = divergence(st.v, geom);
    LayerDecomposition<S> dvl = decompose(dv, geom, s);
    for (int ll = 0; ll <= s; ++ll)
      for (std::size_t r = 0; r < target.layers[ll].size(); ++r)
        for (int c = 0; c <= d; ++c)
          target.layers[ll][r][c] -= dvl.layers[ll][r][c];
  }

  // remaining layer s: b lambda0^s, piecewise constant
  std::vector<S> b = target.layers[s][0];
  bool bzero = true;
  for (const S& val : b)
    if (!scalar_is_zero(val)) bzero = false;
  if (!bzero) {
    FinalCorrectionResult<S> fc = final_correction(b, k, geom, mean_tol);
    out.v = pw_add(out.v, fc.v);
    out.child0_residual = fc.child0_residual;
  }
  for (auto& cpn : out.v.comp) cpn.continuity = Continuity::C0;
  return out;
}

/// Diagnostics wrapper used by the CLI and the verification suites.
struct DivSolveReport {
  PiecewiseFieldD v;
  double p_norm = 0;
  double residual_norm = 0;      // ||div v - p||_L2
  double stability_ratio = 0;    // ||v||_H1 / ||p||_L2
  double child0_residual = 0;    // final-correction child-0 identity
  double boundary_trace = 0;     // filled by callers that sample
  double interface_jump = 0;
};

DivSolveReport solve_local_div(const PiecewiseScalarD& p, int k,
                               const LambdaSystemD& geom);

/// Discrete local inf-sup constant of the pair P^c_k(K^r) (zero trace)
/// against P_{k-1}(K^r) (zero mean) on one refined cell.
double local_infsup_constant(const LambdaSystemD& geom, int k);

}  // namespace alfeld
