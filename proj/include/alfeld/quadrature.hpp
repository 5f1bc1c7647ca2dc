// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "alfeld/error.hpp"

namespace alfeld {

/// Quadrature rule on the reference d-simplex in barycentric form. Weights
/// sum to 1; the integral over a simplex T is measure(T) * sum w_i f(x_i).
struct QuadratureRule {
  int dim = 0;
  int degree_exact = 0;
  std::vector<std::vector<double>> points;  // barycentric, d+1 entries each
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

constexpr int kQuadratureDegreeCap = 20;

/// Grundmann-Moller rule exact to `degree` on the d-simplex.
QuadratureRule quadrature(int d, int degree);

/// Two-point Gauss rule on [0,1] (weights sum to 1), used for edge DOFs.
QuadratureRule gauss2_interval();

}  // namespace alfeld
