// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include "alfeld/random_geometry.hpp"

namespace alfeld {

std::vector<std::vector<double>> reference_simplex(int d) {
  std::vector<std::vector<double>> pts(d + 1, std::vector<double>(d, 0.0));
  for (int i = 0; i < d; ++i) pts[i + 1][i] = 1.0;
  return pts;
}

namespace {

double ratio_of(const std::vector<std::vector<double>>& pts) {
  std::vector<Point> v;
  for (const auto& p : pts) {
    Point q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i];
    v.push_back(q);
  }
  double vol = std::abs(simplex_volume(v));
  if (vol < 1e-10) return 1e300;
  return simplex_diameter(v) / simplex_inradius(v);
}

}  // namespace

std::vector<std::vector<double>> random_simplex(CounterRng& rng, int d,
                                                double max_ratio) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    auto pts = reference_simplex(d);
    for (auto& p : pts)
      for (double& x : p) x += rng.uniform(-0.25, 0.25);
    if (ratio_of(pts) <= max_ratio) return pts;
  }
  throw Error(Err::InvalidArgument,
              "could not draw a shape-regular simplex (check max_ratio)");
}

LambdaSystemD lambda_system_barycenter(
    const std::vector<std::vector<double>>& verts) {
  const int d = static_cast<int>(verts.size()) - 1;
  std::vector<double> split(d, 0.0);
  for (const auto& p : verts)
    for (int i = 0; i < d; ++i) split[i] += p[i] / double(d + 1);
  return make_lambda_system<double>(verts, split);
}

PiecewiseScalarD random_zero_mean_pressure(CounterRng& rng,
                                           const LambdaSystemD& geom,
                                           int deg) {
  PiecewiseScalarD p = pw_zero(geom, deg);
  p.continuity = Continuity::L2;
  for (auto& poly : p.on_child)
    for (double& c : poly.coef) c = rng.uniform(-1.0, 1.0);
  double mean = pw_mean(p, geom);
  PiecewiseScalarD shift = pw_zero(geom, 0);
  for (auto& poly : shift.on_child) poly.coef[0] = mean;
  return pw_sub(p, shift);
}

}  // namespace alfeld
