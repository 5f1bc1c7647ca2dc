// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "alfeld/local_div.hpp"
#include "alfeld/random_geometry.hpp"

using namespace alfeld;

namespace {

LambdaSystemD unit_triangle_split() {
  return lambda_system_barycenter(reference_simplex(2));
}

PiecewiseScalarD normalized(PiecewiseScalarD p, const LambdaSystemD& geom) {
  double n = l2_norm(p, geom);
  return pw_scale(p, 1.0 / n);
}

}  // namespace

TEST_CASE("decompose: lambda0^2 is a single top layer") {
  LambdaSystemD ls = unit_triangle_split();
  PiecewiseScalarD p = pw_zero(ls, 2);
  const auto& tab = MonomialTable::get(3, 2);
  MultiIndex e = {2, 0, 0};
  for (auto& poly : p.on_child) poly.coef[tab.rank(e)] = 1.0;

  LayerDecomposition<double> ld = decompose(p, ls, 2);
  CHECK(ld.max_abs(0) == doctest::Approx(0.0));
  CHECK(ld.max_abs(1) == doctest::Approx(0.0));
  for (int c = 0; c <= 2; ++c)
    CHECK(ld.layers[2][0][c] == doctest::Approx(1.0));
}

TEST_CASE("decompose: a vertex node function") {
  // p = lambda_0 (node of macro vertex 0): layer 0 with alpha = e_0,
  // coefficient 1 on children 1 and 2, forced 0 on child 0
  LambdaSystemD ls = unit_triangle_split();
  PiecewiseScalarD p;
  p.continuity = Continuity::C0;
  for (int c = 0; c <= 2; ++c) p.on_child.push_back(ls.lambda_on_child(0, c));

  LayerDecomposition<double> ld = decompose(p, ls, 1);
  const auto& atab = MonomialTable::get(3, 1);
  MultiIndex e0 = {1, 0, 0};
  int r = atab.rank(e0);
  CHECK(ld.layers[0][r][0] == doctest::Approx(0.0));
  CHECK(ld.layers[0][r][1] == doctest::Approx(1.0));
  CHECK(ld.layers[0][r][2] == doctest::Approx(1.0));
  CHECK(ld.max_abs(1) == doctest::Approx(0.0));
}

TEST_CASE("decompose: a macro barycentric coordinate") {
  // mu_0 = lambda_0 + lambda0/3 on the barycenter split
  LambdaSystemD ls = unit_triangle_split();
  PiecewiseScalarD p;
  p.continuity = Continuity::C0;
  for (int c = 0; c <= 2; ++c) p.on_child.push_back(ls.mu_on_child(0, c));

  LayerDecomposition<double> ld = decompose(p, ls, 1);
  const auto& atab = MonomialTable::get(3, 1);
  int r = atab.rank(MultiIndex{1, 0, 0});
  CHECK(ld.layers[0][r][1] == doctest::Approx(1.0));
  CHECK(ld.layers[0][r][2] == doctest::Approx(1.0));
  for (int c = 0; c <= 2; ++c)
    CHECK(ld.layers[1][0][c] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("decompose respects the support condition and inverts") {
  CounterRng rng(23);
  for (int d : {2, 3, 4}) {
    auto verts = random_simplex(rng, d);
    LambdaSystemD ls = lambda_system_barycenter(verts);
    for (int s : {0, 1, 2, 3}) {
      for (int trial = 0; trial < (d == 4 ? 20 : 100); ++trial) {
        PiecewiseScalarD p = pw_zero(ls, s);
        for (auto& poly : p.on_child)
          for (double& c : poly.coef) c = rng.uniform(-1, 1);
        LayerDecomposition<double> ld = decompose(p, ls, s);
        // support condition
        for (int l = 0; l <= s; ++l) {
          const auto& atab = MonomialTable::get(d + 1, s - l);
          for (int r = 0; r < atab.size(); ++r) {
            const MultiIndex& alpha = atab.exponents(r);
            for (int c = 0; c <= d; ++c)
              if (alpha[c] > 0) CHECK(ld.layers[l][r][c] == 0.0);
          }
        }
        // reconstruction
        PiecewiseScalarD back = reconstruct(ld, ls);
        PiecewiseScalarD diff = pw_sub(back, p);
        for (const auto& poly : diff.on_child)
          CHECK(poly_max_abs_coef(poly) < 1e-12);
      }
    }
  }
}

TEST_CASE("step: zero input produces zero") {
  LambdaSystemD ls = unit_triangle_split();
  auto ld = LayerDecomposition<double>::zero(3, 2);
  StepResult<double> st = step(ld, 0, ls);
  for (const auto& comp : st.v.comp)
    for (const auto& poly : comp.on_child) CHECK(poly.is_zero());
}

TEST_CASE("step: first-layer solve on the unit triangle") {
  // alpha = e_0, b = (0, 1, -1); the 2x2 system has rows grad(lambda0) on
  // children 1 and 2
  LambdaSystemD ls = unit_triangle_split();
  auto ld = LayerDecomposition<double>::zero(3, 1);
  const auto& atab = MonomialTable::get(3, 1);
  int r = atab.rank(MultiIndex{1, 0, 0});
  ld.layers[0][r] = {0.0, 1.0, -1.0};

  StepResult<double> st = step(ld, 0, ls);

  // hand 2x2 oracle
  Eigen::Matrix2d a;
  Eigen::Vector2d rhs(1.0, -1.0);
  for (int j = 0; j < 2; ++j) {
    a(0, j) = ls.grad_lambda0(1)[j];
    a(1, j) = ls.grad_lambda0(2)[j];
  }
  Eigen::Vector2d s = a.fullPivLu().solve(rhs);
  CHECK(st.s_alpha[r][0] == doctest::Approx(s[0]));
  CHECK(st.s_alpha[r][1] == doctest::Approx(s[1]));

  // div v - p is a pure next-layer term and v has zero trace
  PiecewiseScalarD residual =
      pw_sub(divergence(st.v, ls), layer_function(ld, 0, ls));
  LayerDecomposition<double> rd = decompose(residual, ls, 1);
  CHECK(rd.max_abs(0) < 1e-13);
  CHECK(boundary_trace_max(st.v, ls, 3) < 1e-13);
}

TEST_CASE("step: underdetermined system takes the minimal-norm solution") {
  // d=2, m=2, alpha = e_0 + e_1: only child 2 is active
  LambdaSystemD ls = unit_triangle_split();
  auto ld = LayerDecomposition<double>::zero(3, 2);
  const auto& atab = MonomialTable::get(3, 2);
  int r = atab.rank(MultiIndex{1, 1, 0});
  ld.layers[0][r] = {0.0, 0.0, 0.7};

  StepResult<double> st = step(ld, 0, ls);

  Eigen::MatrixXd a(1, 2);
  for (int j = 0; j < 2; ++j) a(0, j) = ls.grad_lambda0(2)[j];
  Eigen::VectorXd rhs(1);
  rhs[0] = 0.7;
  Eigen::VectorXd s = a.completeOrthogonalDecomposition().solve(rhs);
  CHECK(st.s_alpha[r][0] == doctest::Approx(s[0]).epsilon(1e-12));
  CHECK(st.s_alpha[r][1] == doctest::Approx(s[1]).epsilon(1e-12));

  // minimal-norm solution is orthogonal to the null space of the row
  Eigen::Vector2d null(-a(0, 1), a(0, 0));
  CHECK(st.s_alpha[r][0] * null[0] + st.s_alpha[r][1] * null[1] ==
        doctest::Approx(0.0).epsilon(1e-12));

  PiecewiseScalarD residual =
      pw_sub(divergence(st.v, ls), layer_function(ld, 0, ls));
  LayerDecomposition<double> rd = decompose(residual, ls, 2);
  CHECK(rd.max_abs(0) < 1e-13);
}

TEST_CASE("final correction on the unit triangle") {
  LambdaSystemD ls = unit_triangle_split();
  std::vector<double> b = {-2.0, 1.0, 1.0};  // zero mean: equal child areas
  FinalCorrectionResult<double> fc = final_correction(b, 1, ls);

  // the un-imposed child-0 identity holds
  CHECK(std::abs(fc.child0_residual) < 1e-12);

  // div v = b exactly, child by child
  PiecewiseScalarD dv = divergence(fc.v, ls);
  for (int c = 0; c <= 2; ++c) {
    CHECK(dv.on_child[c].degree == 0);
    CHECK(dv.on_child[c].coef[0] == doctest::Approx(b[c]));
  }
  CHECK(boundary_trace_max(fc.v, ls, 2) < 1e-13);
}

TEST_CASE("final correction: nonzero mean is rejected") {
  LambdaSystemD ls = unit_triangle_split();
  CHECK_THROWS_WITH_AS(final_correction<double>({1.0, 1.0, 1.0}, 1, ls),
                       doctest::Contains("MeanNotZero"), Error);
}

TEST_CASE("final correction: random zero-mean data on random cells") {
  CounterRng rng(37);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 50; ++trial) {
      auto verts = random_simplex(rng, d);
      LambdaSystemD ls = lambda_system_barycenter(verts);
      std::vector<double> b(d + 1);
      double vol = 0, dot = 0;
      for (int c = 0; c <= d; ++c) {
        b[c] = rng.uniform(-1, 1);
        vol += ls.child_volume[c];
        dot += b[c] * ls.child_volume[c];
      }
      for (int c = 0; c <= d; ++c) b[c] -= dot / vol;
      int k = 1 + int(rng.next_u64() % 3);
      FinalCorrectionResult<double> fc = final_correction(b, k, ls);
      CHECK(std::abs(fc.child0_residual) < 1e-10);
    }
  }
}

TEST_CASE("solve_local_div: zero input") {
  LambdaSystemD ls = unit_triangle_split();
  PiecewiseScalarD p = pw_zero(ls, 0);
  DivSolveReport rep = solve_local_div(p, 2, ls);
  CHECK(rep.residual_norm == doctest::Approx(0.0));
  CHECK(l2_norm(rep.v, ls) == doctest::Approx(0.0));
}

TEST_CASE("solve_local_div: piecewise constants with k = 1") {
  LambdaSystemD ls = unit_triangle_split();
  PiecewiseScalarD p = pw_zero(ls, 0);
  double vals[3] = {-2.0, 1.0, 1.0};
  for (int c = 0; c <= 2; ++c) p.on_child[c].coef[0] = vals[c];

  DivSolveReport rep = solve_local_div(p, 1, ls);
  CHECK(rep.residual_norm < 1e-13);
  CHECK(rep.boundary_trace < 1e-13);
  CHECK(rep.interface_jump < 1e-13);
  CHECK(rep.child0_residual < 1e-12);
}

TEST_CASE("solve_local_div: random pressures across dimensions and degrees") {
  CounterRng rng(101);
  for (int d : {2, 3}) {
    for (int k : {1, 2, 3}) {
      auto verts = random_simplex(rng, d);
      LambdaSystemD ls = lambda_system_barycenter(verts);
      for (int trial = 0; trial < 10; ++trial) {
        PiecewiseScalarD p =
            normalized(random_zero_mean_pressure(rng, ls, k - 1), ls);
        DivSolveReport rep = solve_local_div(p, k, ls);
        CHECK(rep.residual_norm <= 1e-10);
        CHECK(rep.boundary_trace <= 1e-11);
        CHECK(rep.interface_jump <= 1e-11);
        CHECK(rep.child0_residual <= 1e-10);
        CHECK(std::isfinite(rep.stability_ratio));
      }
    }
  }
}

TEST_CASE("solve_local_div: d=3, k=3 on the reference tetrahedron") {
  CounterRng rng(55);
  LambdaSystemD ls = lambda_system_barycenter(reference_simplex(3));
  for (int trial = 0; trial < 20; ++trial) {
    PiecewiseScalarD p = normalized(random_zero_mean_pressure(rng, ls, 2), ls);
    DivSolveReport rep = solve_local_div(p, 3, ls);
    CHECK(rep.residual_norm <= 1e-10);
    CHECK(rep.stability_ratio > 0);
  }
}

TEST_CASE("solve_local_div: input validation") {
  LambdaSystemD ls = unit_triangle_split();
  CounterRng rng(3);

  SUBCASE("nonzero mean") {
    PiecewiseScalarD p = pw_zero(ls, 0);
    for (auto& poly : p.on_child) poly.coef[0] = 1.0;
    CHECK_THROWS_WITH_AS(solve_local_div(p, 1, ls),
                         doctest::Contains("MeanNotZero"), Error);
  }
  SUBCASE("degree above k-1") {
    PiecewiseScalarD p = random_zero_mean_pressure(rng, ls, 2);
    CHECK_THROWS_WITH_AS(solve_local_div(p, 1, ls),
                         doctest::Contains("DegreeMismatch"), Error);
  }
  SUBCASE("degree cap") {
    PiecewiseScalarD p = random_zero_mean_pressure(rng, ls, 0);
    CHECK_THROWS_WITH_AS(solve_local_div(p, kLocalDivDegreeCap + 1, ls),
                         doctest::Contains("DegreeTooHigh"), Error);
  }
}

namespace {

// Exact-arithmetic pipeline on the reference simplex with rational
// coefficients; div v - p must vanish identically.
void rational_exactness(int d, int k, int trials, CounterRng& rng) {
  std::vector<std::vector<Rat>> verts(d + 1, std::vector<Rat>(d, Rat(0)));
  for (int i = 0; i < d; ++i) verts[i + 1][i] = Rat(1);
  std::vector<Rat> split(d, Rat(1, d + 1));
  LambdaSystem<Rat> ls = make_lambda_system<Rat>(verts, split);

  for (int t = 0; t < trials; ++t) {
    PiecewiseScalar<Rat> p;
    p.continuity = Continuity::L2;
    p.on_child.assign(d + 1, BaryPoly<Rat>(d + 1, k - 1));
    for (auto& poly : p.on_child)
      for (Rat& c : poly.coef)
        c = Rat(boost::multiprecision::cpp_int(int(rng.next_u64() % 19) - 9),
                boost::multiprecision::cpp_int(7));
    // exact zero-mean shift
    Rat mean = pw_mean(p, ls);
    for (auto& poly : p.on_child) {
      BaryPoly<Rat> shift =
          homogenize(poly_constant(d + 1, mean), poly.degree);
      poly = poly_sub(poly, shift);
    }

    LocalDivSolution<Rat> sol = solve_local_div_core<Rat>(p, k, ls);
    PiecewiseScalar<Rat> r = pw_sub(divergence(sol.v, ls), p);
    for (const auto& poly : r.on_child)
      for (const Rat& c : poly.coef) CHECK(scalar_is_zero(c));
    CHECK(scalar_is_zero(sol.child0_residual));
  }
}

}  // namespace

TEST_CASE("rational mode: the construction is exact") {
  CounterRng rng(77);
  rational_exactness(2, 1, 3, rng);
  rational_exactness(2, 2, 3, rng);
  if (rational_mode_enabled()) {
    for (int d : {2, 3})
      for (int k : {1, 2, 3}) rational_exactness(d, k, 5, rng);
  }
}
