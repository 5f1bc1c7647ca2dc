// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "alfeld/lambda.hpp"
#include "alfeld/meshzoo.hpp"
#include "alfeld/piecewise.hpp"
#include "alfeld/poly.hpp"
#include "alfeld/quadrature.hpp"
#include "alfeld/random_geometry.hpp"
#include "alfeld/rng.hpp"

using namespace alfeld;

namespace {

LambdaSystemD unit_triangle_split() {
  return lambda_system_barycenter(reference_simplex(2));
}

}  // namespace

TEST_CASE("monomial table enumerates and ranks consistently") {
  for (int nv : {2, 3, 4, 5})
    for (int k : {0, 1, 2, 3, 5}) {
      const auto& tab = MonomialTable::get(nv, k);
      CHECK(tab.size() == monomial_count(nv, k));
      for (int r = 0; r < tab.size(); ++r) {
        CHECK(multi_index_order(tab.exponents(r)) == k);
        CHECK(tab.rank(tab.exponents(r)) == r);
      }
    }
}

TEST_CASE("product of two barycentric coordinates") {
  // l1 * l2 on a triangle -> the degree-2 monomial with alpha = (0,1,1)
  BaryPolyD l1 = poly_linear<double>({0, 1, 0});
  BaryPolyD l2 = poly_linear<double>({0, 0, 1});
  BaryPolyD prod = poly_mul(l1, l2);
  const auto& tab = MonomialTable::get(3, 2);
  for (int r = 0; r < tab.size(); ++r) {
    MultiIndex a = tab.exponents(r);
    double expect = (a[0] == 0 && a[1] == 1 && a[2] == 1) ? 1.0 : 0.0;
    CHECK(prod.coef[r] == doctest::Approx(expect));
  }
}

TEST_CASE("binomial expansion (l1+l2)^2") {
  BaryPolyD s = poly_linear<double>({0, 1, 1});
  BaryPolyD sq = poly_mul(s, s);
  const auto& tab = MonomialTable::get(3, 2);
  MultiIndex a11 = {0, 1, 1}, a20 = {0, 2, 0}, a02 = {0, 0, 2};
  CHECK(sq.coef[tab.rank(a11)] == doctest::Approx(2.0));
  CHECK(sq.coef[tab.rank(a20)] == doctest::Approx(1.0));
  CHECK(sq.coef[tab.rank(a02)] == doctest::Approx(1.0));
}

TEST_CASE("homogenization is the identity as a function") {
  CounterRng rng(7);
  BaryPolyD p(4, 2);
  for (double& c : p.coef) c = rng.uniform(-1, 1);
  BaryPolyD ph = homogenize(p, 5);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> lam(4);
    double s = 0;
    for (double& l : lam) {
      l = rng.uniform(0, 1);
      s += l;
    }
    for (double& l : lam) l /= s;  // on the simplex
    CHECK(poly_eval(ph, lam) == doctest::Approx(poly_eval(p, lam)));
  }
}

TEST_CASE("closed-form monomial integrals") {
  // int over unit triangle of x: x is the barycentric coordinate of (1,0)
  BaryPolyD x = poly_linear<double>({0, 1, 0});
  CHECK(poly_integral(x, 0.5) == doctest::Approx(1.0 / 6.0));

  // int of 1 over the reference d-simplex = 1/d!
  double fact = 1;
  for (int d = 1; d <= 5; ++d) {
    fact *= d;
    BaryPolyD one = poly_constant(d + 1, 1.0);
    CHECK(poly_integral(one, 1.0 / fact) == doctest::Approx(1.0 / fact));
  }

  // int l1 l2 over a triangle of area A = A/12
  BaryPolyD l1 = poly_linear<double>({1, 0, 0});
  BaryPolyD l2 = poly_linear<double>({0, 1, 0});
  const double area = 0.37;
  CHECK(poly_integral(poly_mul(l1, l2), area) ==
        doctest::Approx(area / 12.0));
}

TEST_CASE("lambda system on the barycenter-split unit triangle") {
  LambdaSystemD ls = unit_triangle_split();

  // grad(lambda0) on the child opposite vertex (0,1) equals (0,3):
  // the facet there is {y=0}, outward normal (0,-1), h = 1/3
  const auto& g = ls.grad_lambda0(2);
  CHECK(g[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(3.0));

  // barycenter split: mu_v(x0) = 1/(d+1)
  for (int v = 0; v <= 2; ++v)
    CHECK(ls.mu_at_split[v] == doctest::Approx(1.0 / 3.0));

  // lambda_v vanishes identically on child v
  for (int v = 0; v <= 2; ++v) CHECK(ls.lambda_on_child(v, v).is_zero());

  // child volumes are equal and sum to |K|
  double sum = 0;
  for (int c = 0; c <= 2; ++c) {
    CHECK(ls.child_volume[c] == doctest::Approx(0.5 / 3.0));
    sum += ls.child_volume[c];
  }
  CHECK(sum == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("grad(lambda0) matches -n/h from face geometry") {
  for (int d : {2, 3, 4}) {
    MacroMesh mesh = reference_simplex_mesh(d);
    RefinedMesh ref = refine(mesh, SplitRule::Barycenter);
    LambdaSystemD ls = lambda_system(ref, 0);
    for (int c = 0; c <= d; ++c) {
      FaceGeometry fg = face_geometry(ref, 0, c);
      for (int i = 0; i < d; ++i)
        CHECK(ls.grad_lambda0(c)[i] ==
              doctest::Approx(-fg.unit_normal[i] / fg.h).epsilon(1e-12));
    }
  }
}

TEST_CASE("partition of unity on every child") {
  CounterRng rng(3);
  for (int d : {2, 3, 4}) {
    auto verts = random_simplex(rng, d);
    LambdaSystemD ls = lambda_system_barycenter(verts);
    for (int c = 0; c <= d; ++c) {
      BaryPolyD sum = ls.lambda0_on_child(c);
      for (int v = 0; v <= d; ++v)
        sum = poly_add(sum, ls.lambda_on_child(v, c));
      BaryPolyD one = homogenize(poly_constant(d + 1, 1.0), 1);
      for (std::size_t i = 0; i < sum.coef.size(); ++i)
        CHECK(sum.coef[i] == doctest::Approx(one.coef[i]));
    }
  }
}

TEST_CASE("mu identity against macro barycentric evaluation") {
  CounterRng rng(11);
  for (int d : {2, 3}) {
    auto verts = random_simplex(rng, d);
    LambdaSystemD ls = lambda_system_barycenter(verts);
    for (int c = 0; c <= d; ++c) {
      for (int t = 0; t < 5; ++t) {
        std::vector<double> lam(d + 1);
        double s = 0;
        for (double& l : lam) {
          l = rng.uniform(0.05, 1);
          s += l;
        }
        for (double& l : lam) l /= s;
        auto x = ls.child_point(c, lam);
        auto mu = ls.macro_barycentric(x);
        for (int v = 0; v <= d; ++v) {
          double val = poly_eval(ls.mu_on_child(v, c), lam);
          CHECK(val == doctest::Approx(mu[v]).epsilon(1e-11));
        }
      }
    }
  }
}

TEST_CASE("gradient of lambda0^2 is 2 lambda0 grad(lambda0)") {
  LambdaSystemD ls = unit_triangle_split();
  PiecewiseScalarD p = pw_zero(ls, 2);
  const auto& tab = MonomialTable::get(3, 2);
  MultiIndex e = {2, 0, 0};
  for (auto& poly : p.on_child) poly.coef[tab.rank(e)] = 1.0;
  PiecewiseFieldD g = gradient(p, ls);
  const auto& t1 = MonomialTable::get(3, 1);
  MultiIndex e1 = {1, 0, 0};
  for (int c = 0; c <= 2; ++c)
    for (int i = 0; i < 2; ++i) {
      for (int r = 0; r < t1.size(); ++r) {
        double expect =
            (r == t1.rank(e1)) ? 2.0 * ls.grad_lambda0(c)[i] : 0.0;
        CHECK(g.comp[i].on_child[c].coef[r] == doctest::Approx(expect));
      }
    }
}

TEST_CASE("gradient of a constant vanishes") {
  LambdaSystemD ls = unit_triangle_split();
  PiecewiseScalarD p = pw_zero(ls, 0);
  for (auto& poly : p.on_child) poly.coef[0] = 4.25;
  PiecewiseFieldD g = gradient(p, ls);
  for (const auto& comp : g.comp)
    for (const auto& poly : comp.on_child) CHECK(poly.is_zero());
}

TEST_CASE("gradient matches central finite differences") {
  CounterRng rng(5);
  for (int d : {2, 3}) {
    auto verts = random_simplex(rng, d);
    LambdaSystemD ls = lambda_system_barycenter(verts);
    // p = lambda_1 * lambda_2 as a piecewise polynomial
    PiecewiseScalarD p;
    p.continuity = Continuity::C0;
    for (int c = 0; c <= d; ++c)
      p.on_child.push_back(
          poly_mul(ls.lambda_on_child(1, c), ls.lambda_on_child(2, c)));
    PiecewiseFieldD g = gradient(p, ls);

    for (int t = 0; t < 5; ++t) {
      // interior point of a random child, far from interfaces
      int c = t % (d + 1);
      std::vector<double> lam(d + 1, 0.0);
      double s = 0;
      for (double& l : lam) {
        l = rng.uniform(0.2, 1.0);
        s += l;
      }
      for (double& l : lam) l /= s;
      auto xs = ls.child_point(c, lam);
      Point x(d);
      for (int i = 0; i < d; ++i) x[i] = xs[i];

      const double h = 2e-6;
      for (int i = 0; i < d; ++i) {
        Point xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        double fd = (pw_eval(p, ls, xp) - pw_eval(p, ls, xm)) / (2 * h);
        double gi = pw_eval(g.comp[i], ls, x);
        CHECK(gi == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("divergence identities") {
  LambdaSystemD ls = unit_triangle_split();

  SUBCASE("constant field has zero divergence") {
    PiecewiseFieldD v = pw_zero_field(ls, 0);
    for (auto& comp : v.comp)
      for (auto& poly : comp.on_child) poly.coef[0] = 3.0;
    CHECK(l2_norm(divergence(v, ls), ls) == doctest::Approx(0.0));
  }

  SUBCASE("div(s lambda0^k) = k lambda0^(k-1) s.grad(lambda0) per child") {
    const int k = 3;
    std::vector<double> s = {0.7, -1.3};
    PiecewiseFieldD v = pw_zero_field(ls, k);
    const auto& tab = MonomialTable::get(3, k);
    MultiIndex e = {k, 0, 0};
    for (int i = 0; i < 2; ++i)
      for (auto& poly : v.comp[i].on_child) poly.coef[tab.rank(e)] = s[i];
    PiecewiseScalarD dv = divergence(v, ls);
    const auto& t2 = MonomialTable::get(3, k - 1);
    MultiIndex e2 = {k - 1, 0, 0};
    for (int c = 0; c <= 2; ++c) {
      double dot = s[0] * ls.grad_lambda0(c)[0] + s[1] * ls.grad_lambda0(c)[1];
      for (int r = 0; r < t2.size(); ++r) {
        double expect = (r == t2.rank(e2)) ? k * dot : 0.0;
        CHECK(dv.on_child[c].coef[r] == doctest::Approx(expect));
      }
    }
  }

  SUBCASE("div of the restricted face bubble equals x") {
    // b = (1-x-y) x (0,-1): comp1 = -mu_0 mu_1, a macro polynomial
    BaryPolyD zero(3, 2);
    BaryPolyD b1 = poly_scale(
        poly_mul(poly_linear<double>({1, 0, 0}), poly_linear<double>({0, 1, 0})),
        -1.0);
    PiecewiseFieldD b;
    b.comp.push_back(restrict_macro_poly(zero, ls));
    b.comp.push_back(restrict_macro_poly(b1, ls));
    PiecewiseScalarD dv = divergence(b, ls);
    CounterRng rng(17);
    for (int t = 0; t < 20; ++t) {
      Point x(2);
      x[0] = rng.uniform(0, 1);
      x[1] = rng.uniform(0, 1 - x[0]);
      CHECK(pw_eval(dv, ls, x) == doctest::Approx(x[0]).epsilon(1e-11));
    }
  }
}

TEST_CASE("L2 inner products on the split cell") {
  LambdaSystemD ls = unit_triangle_split();

  PiecewiseScalarD one = pw_zero(ls, 0);
  for (auto& poly : one.on_child) poly.coef[0] = 1.0;
  CHECK(l2_norm_sq(one, ls) == doctest::Approx(0.5));

  // <lambda0, 1> over the split unit triangle = 1/6
  PiecewiseScalarD l0;
  l0.continuity = Continuity::C0;
  for (int c = 0; c <= 2; ++c) l0.on_child.push_back(ls.lambda0_on_child(c));
  CHECK(l2_inner(l0, one, ls) == doctest::Approx(1.0 / 6.0));

  // <p - mean(p), 1> = 0
  CounterRng rng(2);
  PiecewiseScalarD p = random_zero_mean_pressure(rng, ls, 2);
  CHECK(l2_inner(p, one, ls) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("restrict_macro_poly") {
  LambdaSystemD ls = unit_triangle_split();

  SUBCASE("mu_1 restricts to lambda_1 + mu_1(x0) lambda_0") {
    BaryPolyD mu1 = poly_linear<double>({0, 1, 0});
    PiecewiseScalarD r = restrict_macro_poly(mu1, ls);
    for (int c = 0; c <= 2; ++c) {
      BaryPolyD expect = poly_add(
          ls.lambda_on_child(1, c),
          poly_scale(ls.lambda0_on_child(c), ls.mu_at_split[1]));
      for (std::size_t i = 0; i < expect.coef.size(); ++i)
        CHECK(r.on_child[c].coef[i] == doctest::Approx(expect.coef[i]));
    }
  }

  SUBCASE("constant restricts to the constant") {
    BaryPolyD c0 = poly_constant(3, 2.5);
    PiecewiseScalarD r = restrict_macro_poly(c0, ls);
    for (int c = 0; c <= 2; ++c)
      for (int t = 0; t < 3; ++t) {
        auto lattice = barycentric_lattice(3, 2);
        for (const auto& lam : lattice)
          CHECK(poly_eval(r.on_child[c], lam) == doctest::Approx(2.5));
      }
  }

  SUBCASE("restriction preserves the L2 norm") {
    CounterRng rng(9);
    for (int d : {2, 3}) {
      auto verts = random_simplex(rng, d);
      LambdaSystemD g = lambda_system_barycenter(verts);
      BaryPolyD macro(d + 1, 3);
      for (double& c : macro.coef) c = rng.uniform(-1, 1);
      PiecewiseScalarD r = restrict_macro_poly(macro, g);
      double direct = poly_integral(poly_mul(macro, macro), g.macro_volume);
      CHECK(l2_norm_sq(r, g) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("norm equivalence bracket for layered polynomials (recorded)") {
  // p = lambda0^l sum a_alpha lambda^alpha with the support condition;
  // the ratio sum ||a||^2 / ||p||^2 stays in a fixed bracket.
  CounterRng rng(21);
  const int d = 2, l = 1, m = 2;
  LambdaSystemD ls = unit_triangle_split();
  const auto& atab = MonomialTable::get(d + 1, m);
  double rmin = 1e300, rmax = 0;
  for (int trial = 0; trial < 100; ++trial) {
    PiecewiseScalarD p = pw_zero(ls, l + m);
    double asum = 0;
    const auto& ctab = MonomialTable::get(d + 1, l + m);
    for (int r = 0; r < atab.size(); ++r) {
      const MultiIndex& alpha = atab.exponents(r);
      for (int c = 0; c <= d; ++c) {
        if (alpha[c] > 0) continue;
        double a = rng.uniform(-1, 1);
        asum += a * a * ls.child_volume[c];
        MultiIndex e(d + 1, 0);
        e[0] = l;
        for (int v = 0; v <= d; ++v)
          if (v != c) e[LambdaSystemD::slot_of_vertex(c, v)] = alpha[v];
        p.on_child[c].coef[ctab.rank(e)] += a;
      }
    }
    double ratio = asum / l2_norm_sq(p, ls);
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
  }
  CHECK(rmin > 0);
  CHECK(std::isfinite(rmax));
  CHECK(rmax / rmin < 1e4);
  MESSAGE("norm-equivalence bracket d=2 l=1 m=2: [", rmin, ", ", rmax, "]");
}

TEST_CASE("Grundmann-Moller quadrature is exact against monomial formula") {
  CounterRng rng(13);
  for (int d = 1; d <= 4; ++d) {
    for (int degree : {0, 1, 2, 3, 5, 8, 12}) {
      QuadratureRule rule = quadrature(d, degree);
      double wsum = 0;
      for (double w : rule.weights) wsum += w;
      CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));

      const auto& tab = MonomialTable::get(d + 1, degree);
      for (int rep = 0; rep < 8; ++rep) {
        int r = int(rng.next_u64() % tab.size());
        const MultiIndex& a = tab.exponents(r);
        double exact = monomial_integral_factor<double>(d + 1, a);
        double approx = 0;
        for (int q = 0; q < rule.size(); ++q) {
          double t = rule.weights[q];
          for (int v = 0; v <= d; ++v)
            for (int e = 0; e < a[v]; ++e) t *= rule.points[q][v];
          approx += t;
        }
        CHECK(approx == doctest::Approx(exact).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("quadrature cap and mapped integral") {
  CHECK_THROWS_AS(quadrature(2, kQuadratureDegreeCap + 1), Error);

  // int over unit triangle of x via the mapped rule
  QuadratureRule rule = quadrature(2, 2);
  auto verts = reference_simplex(2);
  double integral = 0;
  for (int q = 0; q < rule.size(); ++q) {
    double x = 0;
    for (int v = 0; v <= 2; ++v) x += rule.points[q][v] * verts[v][0];
    integral += 0.5 * rule.weights[q] * x;
  }
  CHECK(integral == doctest::Approx(1.0 / 6.0));

  // full degree sweep to the cap, d = 2 and 3
  for (int d : {2, 3}) {
    QuadratureRule top = quadrature(d, kQuadratureDegreeCap);
    const auto& tab = MonomialTable::get(d + 1, kQuadratureDegreeCap);
    CounterRng rng(31);
    for (int rep = 0; rep < 5; ++rep) {
      int r = int(rng.next_u64() % tab.size());
      const MultiIndex& a = tab.exponents(r);
      double exact = monomial_integral_factor<double>(d + 1, a);
      double approx = 0;
      for (int q = 0; q < top.size(); ++q) {
        double t = top.weights[q];
        for (int v = 0; v <= d; ++v)
          for (int e = 0; e < a[v]; ++e) t *= top.points[q][v];
        approx += t;
      }
      CHECK(approx == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("two-point Gauss rule integrates cubics on [0,1]") {
  QuadratureRule g = gauss2_interval();
  for (int p = 0; p <= 3; ++p) {
    double approx = 0;
    for (int q = 0; q < g.size(); ++q)
      approx += g.weights[q] * std::pow(g.points[q][1], p);
    CHECK(approx == doctest::Approx(1.0 / (p + 1)).epsilon(1e-14));
  }
}

TEST_CASE("quadrature and exact coefficient integration agree on random data") {
  CounterRng rng(41);
  for (int d : {2, 3}) {
    auto verts = random_simplex(rng, d);
    LambdaSystemD ls = lambda_system_barycenter(verts);
    PiecewiseScalarD p = random_zero_mean_pressure(rng, ls, 3);
    PiecewiseScalarD q = random_zero_mean_pressure(rng, ls, 2);
    double exact = l2_inner(p, q, ls);
    QuadratureRule rule = quadrature(d, 6);
    double approx = 0;
    for (int c = 0; c <= d; ++c)
      for (int k = 0; k < rule.size(); ++k)
        approx += ls.child_volume[c] * rule.weights[k] *
                  poly_eval(p.on_child[c], rule.points[k]) *
                  poly_eval(q.on_child[c], rule.points[k]);
    CHECK(approx == doctest::Approx(exact).epsilon(1e-12));
  }
}
