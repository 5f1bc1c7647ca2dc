// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <cstdlib>

namespace alfeld {

/// Exact rational scalar. The polynomial and local-solver layers are
/// templated on the scalar type so the divergence construction can be run
/// in exact arithmetic (enabled in tests via ALFELD_RATIONAL=1).
using Rat = boost::rational<boost::multiprecision::cpp_int>;

template <typename S>
inline S scalar_from_int(long long v) {
  return S(v);
}
template <>
inline Rat scalar_from_int<Rat>(long long v) {
  return Rat(boost::multiprecision::cpp_int(v));
}

template <typename S>
inline S scalar_from_ratio(long long num, long long den) {
  return scalar_from_int<S>(num) / scalar_from_int<S>(den);
}

inline double to_double(double x) { return x; }
inline double to_double(const Rat& r) {
  return boost::rational_cast<double>(r);
}

template <typename S>
inline bool scalar_is_zero(const S& x) {
  return x == scalar_from_int<S>(0);
}

/// abs() usable for both double and Rat via ADL.
template <typename S>
inline S scalar_abs(const S& x) {
  using std::abs;
  return abs(x);
}

/// Whether the rational test mode is requested (ALFELD_RATIONAL=1).
inline bool rational_mode_enabled() {
  const char* v = std::getenv("ALFELD_RATIONAL");
  return v != nullptr && v[0] == '1';
}

}  // namespace alfeld
