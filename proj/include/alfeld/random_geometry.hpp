// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "alfeld/lambda.hpp"
#include "alfeld/piecewise.hpp"
#include "alfeld/rng.hpp"

namespace alfeld {

/// Reference d-simplex vertices: origin plus the canonical unit vectors.
std::vector<std::vector<double>> reference_simplex(int d);

/// Random perturbation of the reference simplex, rejected until the
/// diameter/inradius ratio is below `max_ratio`.
std::vector<std::vector<double>> random_simplex(CounterRng& rng, int d,
                                                double max_ratio = 20.0);

/// Lambda system of a (possibly random) cell with barycenter split.
LambdaSystemD lambda_system_barycenter(
    const std::vector<std::vector<double>>& verts);

/// Random piecewise polynomial of degree `deg` on the split cell with
/// coefficients in [-1, 1], projected to zero mean.
PiecewiseScalarD random_zero_mean_pressure(CounterRng& rng,
                                           const LambdaSystemD& geom, int deg);

}  // namespace alfeld
