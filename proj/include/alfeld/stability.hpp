// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "alfeld/assemble.hpp"

namespace alfeld {

/// Discrete inf-sup constant: square root of the smallest eigenvalue of the
/// pressure Schur problem B Mu^-1 B^T q = lambda Mp q on the zero-mean
/// complement (constants removed by deflation).
struct InfSupReport {
  std::string pair;
  int n_u = 0;
  int n_p = 0;        // raw pressure dimension (before the mean constraint)
  double beta = 0;
  bool vacuous = false;         // no pressure left after the constraint
  bool empty_velocity = false;  // no velocity dofs

  /// Stability with the vacuous case counted as stable.
  bool stable(double threshold = 1e-8) const {
    return vacuous || beta > threshold;
  }
};

/// Throws EmptyVelocitySpace when the velocity space has no dofs.
InfSupReport infsup_constant(const FeSpace& velocity, const FeSpace& pressure);
InfSupReport infsup_constant(const StokesPair& pair);

/// Non-throwing variant used by the equivalence and bootstrap drivers.
InfSupReport try_infsup(const FeSpace& velocity, const FeSpace& pressure);

/// Proposition-style bootstrap: for a velocity space containing the
/// continuous degree-k space on the refined mesh, macro-constant stability
/// must imply stability against P_{k-1} on the refined mesh. Throws
/// HypothesisViolated when the inclusion fails, SolverFailure when the
/// implication is violated numerically.
struct BootstrapReport {
  InfSupReport macro_p0;
  InfSupReport refined;
};
BootstrapReport bootstrap_check(const MeshContext& ctx,
                                const FeSpace& velocity, int k,
                                double threshold = 1e-8);

/// The two constants of the refined/macro equivalence for degree k.
struct EquivalenceReport {
  InfSupReport refined;  // Pkc(Tr) x P(k-1)(Tr)
  InfSupReport macro;    // Pkc(T)  x P0(T)
};
EquivalenceReport equivalence_check(const MeshContext& ctx, int k);

/// Constructs a velocity field with div v = p by facet-flux balance (and
/// vertex divergence matching for the Vdiv target).
struct SurjectivityResult {
  DenseVector coef;
  double residual = 0;         // ||div v - p||_L2
  double vertex_residual = 0;  // max |div v(x) - p(x)| over vertices
};

SurjectivityResult surjectivity_solve_mf(const FeSpace& vmf,
                                         const FeSpace& p0_macro,
                                         const DenseVector& p_coef);

SurjectivityResult surjectivity_solve_vdiv(const FeSpace& vdiv,
                                           const FeSpace& whr,
                                           const DenseVector& p_coef);

}  // namespace alfeld
