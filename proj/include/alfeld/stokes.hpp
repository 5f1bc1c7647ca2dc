// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "alfeld/assemble.hpp"

namespace alfeld {

/// Closed-form Stokes benchmark: a divergence-free velocity with
/// homogeneous boundary values on the unit box, a zero-mean pressure and
/// the matching forcing f = -laplace(u) + grad(p).
struct ManufacturedCase {
  std::string name;
  int d = 2;
  std::function<Eigen::VectorXd(const Point&)> velocity;
  std::function<Eigen::MatrixXd(const Point&)> velocity_gradient;
  std::function<double(const Point&)> pressure;
  std::function<Eigen::VectorXd(const Point&)> forcing;
};

ManufacturedCase zero_case(int d);
/// Polynomial vortex from the stream function prod_i x_i^2 (1-x_i)^2.
ManufacturedCase vortex_case(int d);
/// Same flow with the pressure perturbed by amp * (x_0 - 1/2).
ManufacturedCase perturb_pressure(const ManufacturedCase& base, double amp);
/// The case under a coordinate shift (for translation-invariance checks).
ManufacturedCase translate_case(const ManufacturedCase& base,
                                const Eigen::VectorXd& shift);

struct StokesSolution {
  DenseVector u;
  DenseVector p;
  double divergence_l2 = 0;  // ||div u_h||, exact coefficient integration
  double u_h1 = 0;           // ||u_h||_H1
  double err_u_l2 = 0;
  double err_u_h1 = 0;       // seminorm error
  double err_p_l2 = 0;
  double energy_residual = 0;
};

StokesSolution solve_stokes(const StokesPair& pair,
                            const ManufacturedCase& mc);

struct ConvergenceRow {
  int level = 0;
  double h = 0;
  int n_u = 0;
  int n_p = 0;
  double err_u_l2 = 0, err_u_h1 = 0, err_p_l2 = 0, div_l2 = 0;
};

struct ConvergenceTable {
  std::string pair;
  std::vector<ConvergenceRow> rows;
  // rates between consecutive rows (size rows-1)
  std::vector<double> rate_u_l2, rate_u_h1, rate_p_l2;
};

/// Solves on `levels` uniform refinements of `base` and reports errors and
/// log-ratio convergence rates.
ConvergenceTable convergence_study(PairKind kind, int k,
                                   const ManufacturedCase& mc,
                                   const MacroMesh& base, int levels);

}  // namespace alfeld
