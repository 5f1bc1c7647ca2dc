// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include "alfeld/piecewise.hpp"

#include <algorithm>

namespace alfeld {

int locate_child(const LambdaSystemD& geom, const Point& x) {
  std::vector<double> xs(x.data(), x.data() + x.size());
  int best = 0;
  double best_min = -1e300;
  for (int c = 0; c < geom.n_children(); ++c) {
    std::vector<double> lam = geom.child_barycentric(c, xs);
    double mn = *std::min_element(lam.begin(), lam.end());
    if (mn > best_min) {
      best_min = mn;
      best = c;
    }
  }
  ALFELD_REQUIRE(best_min > -1e-9, Err::CellMismatch,
                 "point not inside the macro cell");
  return best;
}

double pw_eval(const PiecewiseScalarD& p, const LambdaSystemD& geom,
               const Point& x) {
  std::vector<double> xs(x.data(), x.data() + x.size());
  int c = locate_child(geom, x);
  return poly_eval(p.on_child[c], geom.child_barycentric(c, xs));
}

Eigen::VectorXd pw_eval(const PiecewiseFieldD& v, const LambdaSystemD& geom,
                        const Point& x) {
  std::vector<double> xs(x.data(), x.data() + x.size());
  int c = locate_child(geom, x);
  std::vector<double> lam = geom.child_barycentric(c, xs);
  Eigen::VectorXd out(v.n_comp());
  for (int i = 0; i < v.n_comp(); ++i)
    out[i] = poly_eval(v.comp[i].on_child[c], lam);
  return out;
}

Eigen::MatrixXd pw_eval_jacobian(const PiecewiseFieldD& v,
                                 const LambdaSystemD& geom, const Point& x) {
  std::vector<double> xs(x.data(), x.data() + x.size());
  int c = locate_child(geom, x);
  std::vector<double> lam = geom.child_barycentric(c, xs);
  Eigen::MatrixXd jac(v.n_comp(), geom.d);
  jac.setZero();
  for (int i = 0; i < v.n_comp(); ++i)
    for (int s = 0; s <= geom.d; ++s) {
      BaryPolyD ds = poly_partial(v.comp[i].on_child[c], s);
      double val = poly_eval(ds, lam);
      for (int j = 0; j < geom.d; ++j)
        jac(i, j) += val * geom.child_grad[c][s][j];
    }
  return jac;
}

std::vector<std::vector<double>> barycentric_lattice(int m, int n) {
  const auto& tab = MonomialTable::get(m, n);
  std::vector<std::vector<double>> pts;
  for (int r = 0; r < tab.size(); ++r) {
    const MultiIndex& a = tab.exponents(r);
    std::vector<double> w(m);
    for (int v = 0; v < m; ++v) w[v] = double(a[v]) / double(n);
    pts.push_back(w);
  }
  return pts;
}

double boundary_trace_max(const PiecewiseScalarD& p, const LambdaSystemD& geom,
                          int lattice_degree) {
  // facet c of the macro cell is the face of child c with slot 0 = 0
  double worst = 0;
  auto lattice = barycentric_lattice(geom.d, std::max(lattice_degree, 1));
  for (int c = 0; c < geom.n_children(); ++c) {
    for (const auto& w : lattice) {
      std::vector<double> lam(geom.d + 1, 0.0);
      // weights over the macro vertices of facet c, in slot order
      int k = 0;
      for (int s = 1; s <= geom.d; ++s) lam[s] = w[k++];
      worst = std::max(worst, std::abs(poly_eval(p.on_child[c], lam)));
    }
  }
  return worst;
}

double boundary_trace_max(const PiecewiseFieldD& v, const LambdaSystemD& geom,
                          int lattice_degree) {
  double worst = 0;
  for (const auto& c : v.comp)
    worst = std::max(worst, boundary_trace_max(c, geom, lattice_degree));
  return worst;
}

double interface_jump_max(const PiecewiseScalarD& p, const LambdaSystemD& geom,
                          int lattice_degree) {
  // interface between children c and c' is spanned by the split point and
  // the macro vertices not in {c, c'}
  const int d = geom.d;
  double worst = 0;
  auto lattice = barycentric_lattice(d, std::max(lattice_degree, 1));
  for (int c = 0; c <= d; ++c) {
    for (int cp = c + 1; cp <= d; ++cp) {
      std::vector<int> shared;  // macro vertices on the interface
      for (int v = 0; v <= d; ++v)
        if (v != c && v != cp) shared.push_back(v);
      for (const auto& w : lattice) {
        std::vector<double> lam_c(d + 1, 0.0), lam_cp(d + 1, 0.0);
        lam_c[0] = w[0];
        lam_cp[0] = w[0];
        for (std::size_t k = 0; k < shared.size(); ++k) {
          int v = shared[k];
          lam_c[LambdaSystemD::slot_of_vertex(c, v)] = w[k + 1];
          lam_cp[LambdaSystemD::slot_of_vertex(cp, v)] = w[k + 1];
        }
        double a = poly_eval(p.on_child[c], lam_c);
        double b = poly_eval(p.on_child[cp], lam_cp);
        worst = std::max(worst, std::abs(a - b));
      }
    }
  }
  return worst;
}

double interface_jump_max(const PiecewiseFieldD& v, const LambdaSystemD& geom,
                          int lattice_degree) {
  double worst = 0;
  for (const auto& c : v.comp)
    worst = std::max(worst, interface_jump_max(c, geom, lattice_degree));
  return worst;
}

bool verify_c0(const PiecewiseScalarD& p, const LambdaSystemD& geom,
               double tol) {
  double scale = 0;
  for (const auto& poly : p.on_child)
    scale = std::max(scale, poly_max_abs_coef(poly));
  double jump = interface_jump_max(p, geom, p.max_degree() + 1);
  return jump <= tol * std::max(scale, 1.0);
}

LambdaSystemD lambda_system(const RefinedMesh& refined, int macro_cell) {
  const int d = refined.dim();
  std::vector<std::vector<double>> macro;
  for (int v = 0; v <= d; ++v) {
    Point p = refined.macro.cell_vertex(macro_cell, v);
    macro.emplace_back(p.data(), p.data() + d);
  }
  const Point& sp = refined.split_points[macro_cell];
  std::vector<double> split(sp.data(), sp.data() + d);
  return make_lambda_system<double>(macro, split);
}

}  // namespace alfeld
