// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include "alfeld/bubbles.hpp"

namespace alfeld {

Eigen::VectorXd face_normal(const LambdaSystemD& geom, int i) {
  // grad(lambda0) on child i equals -n_i / h_i
  Eigen::VectorXd g(geom.d);
  for (int j = 0; j < geom.d; ++j) g[j] = geom.grad_lambda0(i)[j];
  return (-g / g.norm()).eval();
}

double face_measure(const LambdaSystemD& geom, int i) {
  std::vector<const std::vector<double>*> pts;
  for (int v = 0; v <= geom.d; ++v)
    if (v != i) pts.push_back(&geom.macro_verts[v]);
  const int k = static_cast<int>(pts.size()) - 1;
  Eigen::MatrixXd g(geom.d, k);
  for (int j = 0; j < k; ++j)
    for (int r = 0; r < geom.d; ++r)
      g(r, j) = (*pts[j + 1])[r] - (*pts[0])[r];
  double gram = (g.transpose() * g).determinant();
  double fact = 1;
  for (int j = 2; j <= k; ++j) fact *= j;
  return std::sqrt(std::max(gram, 0.0)) / fact;
}

FaceBubble face_bubble(const LambdaSystemD& geom, int i) {
  const int d = geom.d;
  ALFELD_REQUIRE(i >= 0 && i <= d, Err::InvalidArgument,
                 "face index out of range");
  FaceBubble fb;
  fb.face = i;

  BaryPolyD big = poly_constant(d + 1, 1.0);
  for (int v = 0; v <= d; ++v) {
    if (v == i) continue;
    std::vector<double> lin(d + 1, 0.0);
    lin[v] = 1.0;
    big = poly_mul(big, poly_linear(lin));
  }
  Eigen::VectorXd n = face_normal(geom, i);
  for (int c = 0; c < d; ++c) fb.macro.push_back(poly_scale(big, n[c]));
  fb.restricted = restrict_macro_field(fb.macro, geom);

  // int_{F_i} B_i: on the facet, the remaining mu are its own barycentric
  // coordinates, so the all-ones monomial formula applies directly
  MultiIndex ones(d, 1);
  fb.face_integral =
      face_measure(geom, i) * monomial_integral_factor<double>(d, ones);
  return fb;
}

ModifiedBubble modify_bubble(const LambdaSystemD& geom, int i) {
  const int d = geom.d;
  FaceBubble fb = face_bubble(geom, i);

  PiecewiseScalarD div_b = divergence(fb.restricted, geom);
  double vol = 0;
  for (double v : geom.child_volume) vol += v;
  double mean = pw_integral(div_b, geom) / vol;

  PiecewiseScalarD g = div_b;
  {
    PiecewiseScalarD shift = pw_zero(geom, 0);
    for (auto& poly : shift.on_child) poly.coef[0] = mean;
    g = pw_sub(div_b, shift);
  }

  LocalDivSolution<double> w = solve_local_div_core(g, d, geom);
  ModifiedBubble mb;
  mb.face = i;
  mb.field = pw_sub(fb.restricted, w.v);
  mb.div_value = mean;
  return mb;
}

PsiTheta build_psi(const LambdaSystemD& geom, int i) {
  const int d = geom.d;
  Eigen::MatrixXd rows(d, d);
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(d);
  int r = 0;
  for (int j = 0; j <= d; ++j) {
    if (j == i) continue;
    auto g = geom.grad_lambda(i, j);
    for (int c = 0; c < d; ++c) rows(r, c) = 2.0 * g[c];
    ++r;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
  ALFELD_REQUIRE(lu.isInvertible(), Err::SingularGradientSystem,
                 "gradients of lambda_i on the other children are dependent");
  Eigen::VectorXd c = lu.solve(rhs);

  PsiTheta ps;
  ps.index = i;
  ps.c = c;
  ps.field.comp.assign(d, PiecewiseScalarD());
  for (int comp = 0; comp < d; ++comp) {
    ps.field.comp[comp].continuity = Continuity::C0;
    for (int ch = 0; ch <= d; ++ch) {
      BaryPolyD li = geom.lambda_on_child(i, ch);
      ps.field.comp[comp].on_child.push_back(
          poly_scale(poly_mul(li, li), c[comp]));
    }
  }
  ps.div = divergence(ps.field, geom);
  ps.div.continuity = Continuity::C0;
  return ps;
}

PsiTheta build_theta(const LambdaSystemD& geom, int i) {
  const int d = geom.d;
  // lambda_i - mu_i = -mu_i(x0) lambda_0, so the rows are
  // -mu_i(x0) grad(lambda0) on each child j != i
  Eigen::MatrixXd rows(d, d);
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(d);
  int r = 0;
  for (int j = 0; j <= d; ++j) {
    if (j == i) continue;
    const auto& g0 = geom.grad_lambda0(j);
    for (int c = 0; c < d; ++c) rows(r, c) = -geom.mu_at_split[i] * g0[c];
    ++r;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
  ALFELD_REQUIRE(lu.isInvertible(), Err::SingularGradientSystem,
                 "theta system singular");
  Eigen::VectorXd c = lu.solve(rhs);

  PsiTheta th;
  th.index = i;
  th.c = c;
  th.field.comp.assign(d, PiecewiseScalarD());
  for (int comp = 0; comp < d; ++comp) {
    th.field.comp[comp].continuity = Continuity::C0;
    for (int ch = 0; ch <= d; ++ch) {
      BaryPolyD li = geom.lambda_on_child(i, ch);
      BaryPolyD mi = geom.mu_on_child(i, ch);
      BaryPolyD diff = poly_sub(poly_mul(li, li), poly_mul(mi, mi));
      th.field.comp[comp].on_child.push_back(
          poly_scale(diff, 0.5 * c[comp]));
    }
  }
  th.div = divergence(th.field, geom);
  th.div.continuity = Continuity::C0;
  return th;
}

}  // namespace alfeld
