// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include "alfeld/local_div.hpp"

namespace alfeld {

DivSolveReport solve_local_div(const PiecewiseScalarD& p, int k,
                               const LambdaSystemD& geom) {
  LocalDivSolution<double> sol = solve_local_div_core(p, k, geom);
  DivSolveReport rep;
  rep.v = sol.v;
  rep.p_norm = l2_norm(p, geom);
  PiecewiseScalarD r = pw_sub(divergence(sol.v, geom), p);
  rep.residual_norm = l2_norm(r, geom);
  rep.child0_residual = std::abs(sol.child0_residual);
  rep.stability_ratio =
      rep.p_norm > 0 ? h1_norm(sol.v, geom) / rep.p_norm : 0.0;
  rep.boundary_trace = boundary_trace_max(sol.v, geom, k + 1);
  rep.interface_jump = interface_jump_max(sol.v, geom, k + 1);
  return rep;
}

}  // namespace alfeld
