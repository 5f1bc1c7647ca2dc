// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include "alfeld/stokes.hpp"

#include "alfeld/quadrature.hpp"

namespace alfeld {

namespace {

/// 1-D polynomial helper for the tensor-product stream functions.
struct Poly1 {
  std::vector<double> c;  // c[i] x^i
  double operator()(double x) const {
    double v = 0;
    for (int i = int(c.size()) - 1; i >= 0; --i) v = v * x + c[i];
    return v;
  }
  Poly1 deriv() const {
    Poly1 d;
    for (std::size_t i = 1; i < c.size(); ++i) d.c.push_back(i * c[i]);
    if (d.c.empty()) d.c.push_back(0.0);
    return d;
  }
};

const Poly1 kBump{{0, 0, 1, -2, 1}};  // x^2 (1-x)^2

}  // namespace

ManufacturedCase zero_case(int d) {
  ManufacturedCase mc;
  mc.name = "zero";
  mc.d = d;
  mc.velocity = [d](const Point&) { return Eigen::VectorXd::Zero(d).eval(); };
  mc.velocity_gradient = [d](const Point&) {
    return Eigen::MatrixXd::Zero(d, d).eval();
  };
  mc.pressure = [](const Point&) { return 0.0; };
  mc.forcing = [d](const Point&) { return Eigen::VectorXd::Zero(d).eval(); };
  return mc;
}

ManufacturedCase vortex_case(int d) {
  ALFELD_REQUIRE(d == 2 || d == 3, Err::DimensionRule,
                 "manufactured vortex implemented for d = 2, 3");
  ManufacturedCase mc;
  mc.name = "vortex";
  mc.d = d;
  Poly1 f = kBump, f1 = kBump.deriv(), f2 = f1.deriv(), f3 = f2.deriv();

  if (d == 2) {
    mc.velocity = [=](const Point& x) {
      Eigen::VectorXd u(2);
      u[0] = f(x[0]) * f1(x[1]);
      u[1] = -f1(x[0]) * f(x[1]);
      return u;
    };
    mc.velocity_gradient = [=](const Point& x) {
      Eigen::MatrixXd g(2, 2);
      g(0, 0) = f1(x[0]) * f1(x[1]);
      g(0, 1) = f(x[0]) * f2(x[1]);
      g(1, 0) = -f2(x[0]) * f(x[1]);
      g(1, 1) = -f1(x[0]) * f1(x[1]);
      return g;
    };
    mc.pressure = [](const Point& x) { return x[0] - 0.5; };
    mc.forcing = [=](const Point& x) {
      Eigen::VectorXd fv(2);
      fv[0] = -(f2(x[0]) * f1(x[1]) + f(x[0]) * f3(x[1])) + 1.0;
      fv[1] = (f3(x[0]) * f(x[1]) + f1(x[0]) * f2(x[1]));
      return fv;
    };
  } else {
    mc.velocity = [=](const Point& x) {
      Eigen::VectorXd u(3);
      u[0] = f(x[0]) * f1(x[1]) * f(x[2]);
      u[1] = -f1(x[0]) * f(x[1]) * f(x[2]);
      u[2] = 0.0;
      return u;
    };
    mc.velocity_gradient = [=](const Point& x) {
      Eigen::MatrixXd g(3, 3);
      g.setZero();
      g(0, 0) = f1(x[0]) * f1(x[1]) * f(x[2]);
      g(0, 1) = f(x[0]) * f2(x[1]) * f(x[2]);
      g(0, 2) = f(x[0]) * f1(x[1]) * f1(x[2]);
      g(1, 0) = -f2(x[0]) * f(x[1]) * f(x[2]);
      g(1, 1) = -f1(x[0]) * f1(x[1]) * f(x[2]);
      g(1, 2) = -f1(x[0]) * f(x[1]) * f1(x[2]);
      return g;
    };
    mc.pressure = [](const Point& x) { return x[0] + x[1] + x[2] - 1.5; };
    mc.forcing = [=](const Point& x) {
      Eigen::VectorXd fv(3);
      fv[0] = -(f2(x[0]) * f1(x[1]) * f(x[2]) + f(x[0]) * f3(x[1]) * f(x[2]) +
                f(x[0]) * f1(x[1]) * f2(x[2])) +
              1.0;
      fv[1] = (f3(x[0]) * f(x[1]) * f(x[2]) + f1(x[0]) * f2(x[1]) * f(x[2]) +
               f1(x[0]) * f(x[1]) * f2(x[2])) +
              1.0;
      fv[2] = 1.0;
      return fv;
    };
  }
  return mc;
}

ManufacturedCase perturb_pressure(const ManufacturedCase& base, double amp) {
  ManufacturedCase mc = base;
  mc.name = base.name + "+pressure";
  auto p0 = base.pressure;
  auto f0 = base.forcing;
  mc.pressure = [p0, amp](const Point& x) {
    return p0(x) + amp * (x[0] - 0.5);
  };
  mc.forcing = [f0, amp](const Point& x) {
    Eigen::VectorXd f = f0(x);
    f[0] += amp;
    return f;
  };
  return mc;
}

ManufacturedCase translate_case(const ManufacturedCase& base,
                                const Eigen::VectorXd& shift) {
  ManufacturedCase mc = base;
  mc.name = base.name + "+shift";
  auto u0 = base.velocity;
  auto g0 = base.velocity_gradient;
  auto p0 = base.pressure;
  auto f0 = base.forcing;
  mc.velocity = [u0, shift](const Point& x) { return u0(x - shift); };
  mc.velocity_gradient = [g0, shift](const Point& x) {
    return g0(x - shift);
  };
  mc.pressure = [p0, shift](const Point& x) { return p0(x - shift); };
  mc.forcing = [f0, shift](const Point& x) { return f0(x - shift); };
  return mc;
}

StokesSolution solve_stokes(const StokesPair& pair,
                            const ManufacturedCase& mc) {
  const FeSpace& vel = pair.velocity;
  const FeSpace& pres = pair.pressure;
  ALFELD_REQUIRE(vel.ctx == pres.ctx, Err::MeshMismatch,
                 "pair spaces on different meshes");
  const MeshContext& ctx = *vel.ctx;
  const int d = ctx.dim();
  ALFELD_REQUIRE(mc.d == d, Err::MeshMismatch,
                 "case dimension does not match the mesh");
  ALFELD_REQUIRE(vel.dim > 0, Err::EmptyVelocitySpace,
                 "velocity space has no degrees of freedom");

  AssembledOperators ops = assemble(vel, pres);
  const int nu = vel.dim, np = pres.dim;
  const bool constrain = pres.mean_constrained;
  const int n = nu + np + (constrain ? 1 : 0);

  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < ops.A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(ops.A, k); it; ++it)
      trips.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < ops.B.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(ops.B, k); it; ++it) {
      trips.emplace_back(nu + it.row(), it.col(), it.value());
      trips.emplace_back(it.col(), nu + it.row(), it.value());
    }
  if (constrain) {
    DenseVector m = ops.Mp * DenseVector::Ones(np);
    for (int i = 0; i < np; ++i) {
      trips.emplace_back(nu + i, nu + np, m[i]);
      trips.emplace_back(nu + np, nu + i, m[i]);
    }
  }
  SparseMatrix saddle(n, n);
  saddle.setFromTriplets(trips.begin(), trips.end());

  const int quad_deg = std::min(vel.max_degree + 8, kQuadratureDegreeCap);
  DenseVector load = assemble_load(vel, mc.forcing, quad_deg);
  DenseVector rhs = DenseVector::Zero(n);
  rhs.head(nu) = load;

  DenseVector x = solve_symmetric_indefinite(saddle, rhs);

  StokesSolution sol;
  sol.u = x.head(nu);
  sol.p = -x.segment(nu, np);  // the assembled B carries +int q div v

  sol.divergence_l2 = global_div_l2_norm(vel, sol.u);
  sol.u_h1 = global_h1_norm(vel, sol.u);
  {
    DenseVector ptilde = x.segment(nu, np);
    double lhs =
        sol.u.dot(ops.A * sol.u) + sol.u.dot(ops.B.transpose() * ptilde);
    double rhs_energy = sol.u.dot(load);
    sol.energy_residual =
        std::abs(lhs - rhs_energy) /
        std::max({std::abs(lhs), std::abs(rhs_energy), 1e-300});
  }

  // errors by quadrature
  QuadratureRule rule =
      quadrature(d, std::min(2 * vel.max_degree + 8, kQuadratureDegreeCap));
  double el2 = 0, eh1 = 0, epl2 = 0;
  for (int m = 0; m < ctx.n_cells(); ++m) {
    const auto& geom = ctx.geom[m];
    PiecewiseFieldD uh = combine_on_cell(vel, m, sol.u);
    PiecewiseFieldD ph = combine_on_cell(pres, m, sol.p);
    std::vector<PiecewiseFieldD> grads;
    for (int comp = 0; comp < d; ++comp)
      grads.push_back(gradient(uh.comp[comp], geom));
    for (int c = 0; c <= d; ++c) {
      double vol = geom.child_volume[c];
      for (int q = 0; q < rule.size(); ++q) {
        std::vector<double> xs = geom.child_point(c, rule.points[q]);
        Point pt(d);
        for (int i = 0; i < d; ++i) pt[i] = xs[i];
        double w = vol * rule.weights[q];

        Eigen::VectorXd ue = mc.velocity(pt);
        Eigen::MatrixXd ge = mc.velocity_gradient(pt);
        double pe = mc.pressure(pt);

        for (int comp = 0; comp < d; ++comp) {
          double uv = poly_eval(uh.comp[comp].on_child[c], rule.points[q]);
          el2 += w * (uv - ue[comp]) * (uv - ue[comp]);
          for (int dim = 0; dim < d; ++dim) {
            double gv =
                poly_eval(grads[comp].comp[dim].on_child[c], rule.points[q]);
            eh1 += w * (gv - ge(comp, dim)) * (gv - ge(comp, dim));
          }
        }
        double pv = poly_eval(ph.comp[0].on_child[c], rule.points[q]);
        epl2 += w * (pv - pe) * (pv - pe);
      }
    }
  }
  sol.err_u_l2 = std::sqrt(std::max(el2, 0.0));
  sol.err_u_h1 = std::sqrt(std::max(eh1, 0.0));
  sol.err_p_l2 = std::sqrt(std::max(epl2, 0.0));
  return sol;
}

ConvergenceTable convergence_study(PairKind kind, int k,
                                   const ManufacturedCase& mc,
                                   const MacroMesh& base, int levels) {
  ALFELD_REQUIRE(levels >= 2, Err::InvalidArgument,
                 "convergence study needs at least two levels");
  ConvergenceTable table;
  MacroMesh mesh = base;
  for (int level = 0; level < levels; ++level) {
    if (level > 0) mesh = uniform_refine(mesh);
    MeshContext ctx = make_context(mesh);
    StokesPair pair = build_pair(ctx, kind, k);
    if (table.pair.empty()) table.pair = pair.name;
    StokesSolution sol = solve_stokes(pair, mc);

    ConvergenceRow row;
    row.level = level;
    double h = 0;
    for (int m = 0; m < mesh.n_cells(); ++m)
      h = std::max(h, simplex_diameter(cell_points(mesh, m)));
    row.h = h;
    row.n_u = pair.velocity.dim;
    row.n_p = pair.pressure.dim;
    row.err_u_l2 = sol.err_u_l2;
    row.err_u_h1 = sol.err_u_h1;
    row.err_p_l2 = sol.err_p_l2;
    row.div_l2 = sol.divergence_l2;
    table.rows.push_back(row);
  }
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    double hr = table.rows[i - 1].h / table.rows[i].h;
    auto rate = [&](double a, double b) {
      return std::log(a / b) / std::log(hr);
    };
    table.rate_u_l2.push_back(
        rate(table.rows[i - 1].err_u_l2, table.rows[i].err_u_l2));
    table.rate_u_h1.push_back(
        rate(table.rows[i - 1].err_u_h1, table.rows[i].err_u_h1));
    table.rate_p_l2.push_back(
        rate(table.rows[i - 1].err_p_l2, table.rows[i].err_p_l2));
  }
  return table;
}

}  // namespace alfeld
