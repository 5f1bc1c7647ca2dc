// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "alfeld/local_div.hpp"
#include "alfeld/piecewise.hpp"

namespace alfeld {

/// Outward unit normal of macro facet i (opposite vertex i).
Eigen::VectorXd face_normal(const LambdaSystemD& geom, int i);

/// (d-1)-measure of macro facet i.
double face_measure(const LambdaSystemD& geom, int i);

/// Face bubble b_i = B_i n_i with B_i the product of the macro barycentric
/// coordinates of the facet's vertices. Degree d, supported near facet i.
struct FaceBubble {
  int face = 0;
  std::vector<BaryPolyD> macro;  // d components in macro coordinates
  PiecewiseFieldD restricted;    // the same field on the split cell
  double face_integral = 0;      // int_{F_i} B_i > 0
};

/// Modified bubble: same boundary trace as b_i, divergence constant.
struct ModifiedBubble {
  int face = 0;
  PiecewiseFieldD field;
  double div_value = 0;  // |K|^-1 int_K div b_i
};

/// The quadratic fields of the reduced velocity spaces: psi_i = c_i
/// lambda_i^2 with div psi_i = lambda_i, and the bubble theta_i =
/// c_i (lambda_i^2 - mu_i^2)/2 with continuous divergence and
/// div theta_i(x_j) = delta_ij.
struct PsiTheta {
  int index = 0;
  Eigen::VectorXd c;
  PiecewiseFieldD field;
  PiecewiseScalarD div;
};

FaceBubble face_bubble(const LambdaSystemD& geom, int i);
ModifiedBubble modify_bubble(const LambdaSystemD& geom, int i);
PsiTheta build_psi(const LambdaSystemD& geom, int i);
PsiTheta build_theta(const LambdaSystemD& geom, int i);

}  // namespace alfeld
