// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include "alfeld/stability.hpp"

#include "alfeld/local_div.hpp"

namespace alfeld {

InfSupReport try_infsup(const FeSpace& velocity, const FeSpace& pressure) {
  InfSupReport rep;
  rep.pair = velocity.name + "-" + pressure.name;
  rep.n_u = velocity.dim;
  rep.n_p = pressure.dim;

  const int effective_p =
      pressure.mean_constrained ? pressure.dim - 1 : pressure.dim;
  if (effective_p <= 0) {
    rep.vacuous = true;
    rep.beta = std::numeric_limits<double>::infinity();
    return rep;
  }
  if (velocity.dim == 0) {
    rep.empty_velocity = true;
    rep.beta = 0;
    return rep;
  }

  AssembledOperators ops = assemble(velocity, pressure);
  SpdSolver mu(ops.Mu);

  const int nu = velocity.dim, np = pressure.dim;
  DenseMatrix schur = DenseMatrix::Zero(np, np);
  DenseMatrix bt = DenseMatrix(ops.B.transpose());
  const int block = 256;
  for (int start = 0; start < np; start += block) {
    int cols = std::min(block, np - start);
    DenseMatrix rhs_block = bt.middleCols(start, cols);
    DenseMatrix x = mu.solve(rhs_block);
    schur.middleCols(start, cols) = ops.B * x;
  }
  DenseMatrix mp = DenseMatrix(ops.Mp);

  DenseMatrix sd, md;
  if (pressure.mean_constrained) {
    // deflate the constant mode: basis of {q : (Mp 1)^T q = 0}
    DenseVector m = mp * DenseVector::Ones(np);
    DenseMatrix z = DenseMatrix::Zero(np, np - 1);
    for (int i = 1; i < np; ++i) {
      z(i, i - 1) = 1.0;
      z(0, i - 1) = -m[i] / m[0];
    }
    sd = z.transpose() * schur * z;
    md = z.transpose() * mp * z;
  } else {
    sd = schur;
    md = mp;
  }
  sd = 0.5 * (sd + sd.transpose());

  EigenPairs pairs = generalized_symmetric_eig(sd, md);
  rep.beta = std::sqrt(std::max(pairs.values[0], 0.0));
  (void)nu;
  return rep;
}

InfSupReport infsup_constant(const FeSpace& velocity,
                             const FeSpace& pressure) {
  ALFELD_REQUIRE(velocity.dim > 0, Err::EmptyVelocitySpace,
                 "velocity space has no degrees of freedom");
  return try_infsup(velocity, pressure);
}

InfSupReport infsup_constant(const StokesPair& pair) {
  InfSupReport rep = infsup_constant(pair.velocity, pair.pressure);
  rep.pair = pair.name;
  return rep;
}

BootstrapReport bootstrap_check(const MeshContext& ctx,
                                const FeSpace& velocity, int k,
                                double threshold) {
  ALFELD_REQUIRE(velocity.pkc_refined_k >= k, Err::HypothesisViolated,
                 "velocity space does not contain the continuous degree-k "
                 "space on the refined mesh");
  FeSpace p0 = discontinuous_space(*velocity.ctx, 0, false);
  FeSpace pk1 = discontinuous_space(*velocity.ctx, k - 1, true);
  (void)ctx;

  BootstrapReport rep;
  rep.macro_p0 = try_infsup(velocity, p0);
  rep.refined = try_infsup(velocity, pk1);
  if (rep.macro_p0.stable(threshold))
    ALFELD_REQUIRE(rep.refined.stable(threshold), Err::SolverFailure,
                   "bootstrap implication violated: macro-stable velocity "
                   "space is unstable against the refined pressure");
  return rep;
}

EquivalenceReport equivalence_check(const MeshContext& ctx, int k) {
  EquivalenceReport rep;
  {
    StokesPair pair = build_pair(ctx, PairKind::PkPk1Refined, k);
    rep.refined = try_infsup(pair.velocity, pair.pressure);
    rep.refined.pair = pair.name;
  }
  {
    StokesPair pair = build_pair(ctx, PairKind::MacroPkP0, k);
    rep.macro = try_infsup(pair.velocity, pair.pressure);
    rep.macro.pair = pair.name;
  }
  return rep;
}

namespace {

/// Facet-flux balance: one equation per macro cell, sum of signed interior
/// fluxes equals the cell integral of p. Solved at minimal norm; the system
/// is consistent for zero-mean p on a facet-connected mesh.
DenseVector solve_flux_system(const FeSpace& vel, const FeSpace& pres,
                              const DenseVector& p_coef,
                              std::vector<int>& flux_dofs) {
  const MeshContext& ctx = *vel.ctx;
  const int ncells = ctx.n_cells();

  flux_dofs.clear();
  for (int j = 0; j < vel.dim; ++j)
    if (vel.dof_info[j].type == DofType::BubbleFlux ||
        vel.dof_info[j].type == DofType::FacetFlux)
      flux_dofs.push_back(j);

  DenseVector rhs = DenseVector::Zero(ncells);
  double total = 0, scale = 0;
  for (int m = 0; m < ncells; ++m) {
    PiecewiseFieldD p = combine_on_cell(pres, m, p_coef);
    rhs[m] = pw_integral(p.comp[0], ctx.geom[m]);
    total += rhs[m];
    scale += std::abs(rhs[m]);
  }
  ALFELD_REQUIRE(std::abs(total) <= 1e-10 * std::max(scale, 1e-300),
                 Err::MeanNotZero, "surjectivity target must have zero mean");

  DenseMatrix a = DenseMatrix::Zero(ncells, int(flux_dofs.size()));
  for (std::size_t col = 0; col < flux_dofs.size(); ++col) {
    int facet_id = vel.dof_info[flux_dofs[col]].entity;
    const auto& facet = ctx.entities.facets[facet_id];
    a(facet.cell_lo, col) = 1.0;
    a(facet.cell_hi, col) = -1.0;
  }
  DenseVector flux = least_squares(a, rhs);
  double res = (a * flux - rhs).norm();
  ALFELD_REQUIRE(res <= 1e-9 * std::max(rhs.norm(), 1e-300),
                 Err::FluxSystemSingular,
                 "flux balance system inconsistent (mesh disconnected?)");
  return flux;
}

double divergence_residual(const FeSpace& vel, const DenseVector& coef,
                           const FeSpace& pres, const DenseVector& p_coef) {
  const MeshContext& ctx = *vel.ctx;
  double s = 0;
  for (int m = 0; m < ctx.n_cells(); ++m) {
    PiecewiseFieldD v = combine_on_cell(vel, m, coef);
    PiecewiseFieldD p = combine_on_cell(pres, m, p_coef);
    PiecewiseScalarD diff =
        pw_sub(divergence(v, ctx.geom[m]), p.comp[0]);
    s += l2_norm_sq(diff, ctx.geom[m]);
  }
  return std::sqrt(std::max(s, 0.0));
}

}  // namespace

SurjectivityResult surjectivity_solve_mf(const FeSpace& vmf,
                                         const FeSpace& p0_macro,
                                         const DenseVector& p_coef) {
  std::vector<int> flux_dofs;
  DenseVector flux = solve_flux_system(vmf, p0_macro, p_coef, flux_dofs);
  SurjectivityResult out;
  out.coef = DenseVector::Zero(vmf.dim);
  for (std::size_t c = 0; c < flux_dofs.size(); ++c)
    out.coef[flux_dofs[c]] = flux[c];
  out.residual = divergence_residual(vmf, out.coef, p0_macro, p_coef);
  return out;
}

SurjectivityResult surjectivity_solve_vdiv(const FeSpace& vdiv,
                                           const FeSpace& whr,
                                           const DenseVector& p_coef) {
  const MeshContext& ctx = *vdiv.ctx;
  const int d = ctx.dim();

  SurjectivityResult out;
  out.coef = DenseVector::Zero(vdiv.dim);

  // vertex divergence dofs take the nodal values of p
  std::vector<double> p_at_vertex(ctx.macro().n_vertices(), 0.0);
  std::vector<bool> seen(ctx.macro().n_vertices(), false);
  for (int m = 0; m < ctx.n_cells(); ++m) {
    PiecewiseFieldD p = combine_on_cell(whr, m, p_coef);
    for (int v = 0; v <= d; ++v) {
      int gv = ctx.macro().cells[m].v[v];
      if (seen[gv]) continue;
      int c = v == 0 ? 1 : 0;
      std::vector<double> lam(d + 1, 0.0);
      lam[LambdaSystemD::slot_of_vertex(c, v)] = 1.0;
      p_at_vertex[gv] = poly_eval(p.comp[0].on_child[c], lam);
      seen[gv] = true;
    }
  }
  for (int gv = 0; gv < ctx.macro().n_vertices(); ++gv) {
    int dof = vdiv.find_dof(DofType::DivAtVertex, gv);
    ALFELD_REQUIRE(dof >= 0, Err::InvalidArgument,
                   "divergence dof missing at a vertex");
    out.coef[dof] = p_at_vertex[gv];
  }

  std::vector<int> flux_dofs;
  DenseVector flux = solve_flux_system(vdiv, whr, p_coef, flux_dofs);
  for (std::size_t c = 0; c < flux_dofs.size(); ++c)
    out.coef[flux_dofs[c]] = flux[c];

  out.residual = divergence_residual(vdiv, out.coef, whr, p_coef);
  for (int m = 0; m < ctx.n_cells(); ++m) {
    PiecewiseFieldD v = combine_on_cell(vdiv, m, out.coef);
    PiecewiseScalarD dv = divergence(v, ctx.geom[m]);
    for (int lv = 0; lv <= d; ++lv) {
      int gv = ctx.macro().cells[m].v[lv];
      int c = lv == 0 ? 1 : 0;
      std::vector<double> lam(d + 1, 0.0);
      lam[LambdaSystemD::slot_of_vertex(c, lv)] = 1.0;
      double got = poly_eval(dv.on_child[c], lam);
      out.vertex_residual =
          std::max(out.vertex_residual, std::abs(got - p_at_vertex[gv]));
    }
  }
  return out;
}

double local_infsup_constant(const LambdaSystemD& geom, int k) {
  ALFELD_REQUIRE(k >= 1, Err::InvalidArgument, "k >= 1 required");
  const int d = geom.d;
  std::vector<Point> verts;
  std::vector<int> cell;
  for (int v = 0; v <= d; ++v) {
    Point p(d);
    for (int i = 0; i < d; ++i) p[i] = geom.macro_verts[v][i];
    verts.push_back(p);
    cell.push_back(v);
  }
  MacroMesh mesh = build_macro_mesh(verts, {cell});
  Point split(d);
  for (int i = 0; i < d; ++i) split[i] = geom.split[i];
  MeshContext ctx;
  ctx.refined = refine(mesh, SplitRule::Explicit, {split});
  ctx.entities = enumerate_entities(mesh);
  ctx.geom.push_back(lambda_system(ctx.refined, 0));

  FeSpace vel = lagrange_space(ctx, k, true, true, d);
  ALFELD_REQUIRE(vel.dim > 0, Err::EmptyVelocitySpace,
                 "local velocity space is empty");
  FeSpace pre = discontinuous_space(ctx, k - 1, true);
  InfSupReport rep = try_infsup(vel, pre);
  return rep.beta;
}

}  // namespace alfeld
