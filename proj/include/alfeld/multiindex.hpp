// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "alfeld/error.hpp"

namespace alfeld {

/// Exponent tuple of a barycentric monomial. Entry i is the power of the
/// i-th barycentric coordinate; the sum of entries is the (homogeneous)
/// polynomial degree.
using MultiIndex = std::vector<int>;

inline int multi_index_order(const MultiIndex& a) {
  int s = 0;
  for (int e : a) s += e;
  return s;
}

/// Number of monomials in `nvars` barycentric variables of homogeneous
/// degree `k`: C(k + nvars - 1, nvars - 1).
inline long long monomial_count(int nvars, int k) {
  long long n = 1;
  for (int i = 1; i <= nvars - 1; ++i) n = n * (k + i) / i;
  return n;
}

/// Packs exponents into a 64-bit key (7 bits per entry; supports degree up
/// to 127 and up to 9 variables, far beyond the library caps).
inline std::uint64_t pack_multi_index(const MultiIndex& a) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    key |= (std::uint64_t(a[i]) & 0x7f) << (7 * i);
  return key;
}

/// Enumeration of all multi-indices with a fixed variable count and total
/// degree, in a deterministic (lexicographically decreasing) order, with a
/// rank lookup. Tables are cached process-wide.
class MonomialTable {
 public:
  MonomialTable(int nvars, int degree) : nvars_(nvars), degree_(degree) {
    ALFELD_REQUIRE(nvars >= 1 && degree >= 0, Err::InvalidArgument,
                   "monomial table needs nvars >= 1, degree >= 0");
    MultiIndex a(nvars, 0);
    emit(a, 0, degree);
  }

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const MultiIndex& exponents(int rank) const { return exps_[rank]; }

  int rank(const MultiIndex& a) const {
    auto it = rank_.find(pack_multi_index(a));
    ALFELD_REQUIRE(it != rank_.end(), Err::InvalidArgument,
                   "multi-index not in table");
    return it->second;
  }

  /// Cached global table for (nvars, degree).
  static const MonomialTable& get(int nvars, int degree);

 private:
  void emit(MultiIndex& a, int pos, int remaining) {
    if (pos == nvars_ - 1) {
      a[pos] = remaining;
      rank_[pack_multi_index(a)] = static_cast<int>(exps_.size());
      exps_.push_back(a);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      a[pos] = e;
      emit(a, pos + 1, remaining - e);
    }
    a[pos] = 0;
  }

  int nvars_;
  int degree_;
  std::vector<MultiIndex> exps_;
  std::unordered_map<std::uint64_t, int> rank_;
};

inline const MonomialTable& MonomialTable::get(int nvars, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, MonomialTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(nvars, degree);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, MonomialTable(nvars, degree)).first;
  return it->second;
}

}  // namespace alfeld
