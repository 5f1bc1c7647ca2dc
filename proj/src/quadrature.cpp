// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include "alfeld/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "alfeld/multiindex.hpp"
#include "alfeld/scalar.hpp"

namespace alfeld {

namespace {

QuadratureRule build_gm(int d, int degree) {
  ALFELD_REQUIRE(d >= 1, Err::InvalidArgument, "quadrature needs d >= 1");
  ALFELD_REQUIRE(degree >= 0, Err::InvalidArgument, "negative degree");
  ALFELD_REQUIRE(degree <= kQuadratureDegreeCap, Err::UnsupportedDegree,
                 "quadrature degree above cap");
  const int s = degree / 2;  // rule is exact to 2s+1 >= degree

  QuadratureRule rule;
  rule.dim = d;
  rule.degree_exact = 2 * s + 1;

  for (int i = 0; i <= s; ++i) {
    // (-1)^i d! (2s+1+d-2i)^(2s+1) / (2^(2s) i! (2s+1+d-i)!), exact
    Rat coef = scalar_from_int<Rat>((i % 2 == 0) ? 1 : -1);
    for (int j = 2; j <= d; ++j) coef *= scalar_from_int<Rat>(j);
    const int base = 2 * s + 1 + d - 2 * i;
    for (int j = 0; j < 2 * s + 1; ++j) coef *= scalar_from_int<Rat>(base);
    for (int j = 0; j < 2 * s; ++j) coef /= scalar_from_int<Rat>(2);
    for (int j = 2; j <= i; ++j) coef /= scalar_from_int<Rat>(j);
    for (int j = 2; j <= 2 * s + 1 + d - i; ++j)
      coef /= scalar_from_int<Rat>(j);
    const double w = to_double(coef);

    const auto& tab = MonomialTable::get(d + 1, s - i);
    const double den = 2.0 * (s - i) + d + 1;
    for (int r = 0; r < tab.size(); ++r) {
      const MultiIndex& k = tab.exponents(r);
      std::vector<double> bary(d + 1);
      for (int j = 0; j <= d; ++j) bary[j] = (2.0 * k[j] + 1.0) / den;
      rule.points.push_back(bary);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

}  // namespace

QuadratureRule quadrature(int d, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(d, degree);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_gm(d, degree)).first;
  return it->second;
}

QuadratureRule gauss2_interval() {
  QuadratureRule rule;
  rule.dim = 1;
  rule.degree_exact = 3;
  const double a = 0.5 - 0.5 / std::sqrt(3.0);
  const double b = 0.5 + 0.5 / std::sqrt(3.0);
  rule.points = {{1.0 - a, a}, {1.0 - b, b}};
  rule.weights = {0.5, 0.5};
  return rule;
}

}  // namespace alfeld
