// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include "alfeld/meshzoo.hpp"

#include <algorithm>

namespace alfeld {

namespace {

Point make_point(std::initializer_list<double> xs) {
  Point p(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

}  // namespace

MacroMesh unit_triangle() {
  std::vector<Point> v = {make_point({0, 0}), make_point({1, 0}),
                          make_point({0, 1})};
  return build_macro_mesh(v, {{0, 1, 2}});
}

MacroMesh unit_square_two_triangles() {
  std::vector<Point> v = {make_point({0, 0}), make_point({1, 0}),
                          make_point({1, 1}), make_point({0, 1})};
  return build_macro_mesh(v, {{0, 1, 2}, {0, 2, 3}});
}

MacroMesh square_grid(int n) {
  ALFELD_REQUIRE(n >= 1, Err::InvalidArgument, "grid size >= 1");
  std::vector<Point> v;
  auto id = [n](int i, int j) { return i * (n + 1) + j; };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      v.push_back(make_point({double(i) / n, double(j) / n}));
  std::vector<std::vector<int>> cells;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return build_macro_mesh(v, cells);
}

MacroMesh reference_tet() {
  std::vector<Point> v = {make_point({0, 0, 0}), make_point({1, 0, 0}),
                          make_point({0, 1, 0}), make_point({0, 0, 1})};
  return build_macro_mesh(v, {{0, 1, 2, 3}});
}

MacroMesh two_tets() {
  std::vector<Point> v = {make_point({0, 0, 0}), make_point({1, 0, 0}),
                          make_point({0, 1, 0}), make_point({0, 0, 1}),
                          make_point({1, 1, 1})};
  return build_macro_mesh(v, {{0, 1, 2, 3}, {1, 2, 3, 4}});
}

MacroMesh kuhn_cube(int n) {
  ALFELD_REQUIRE(n >= 1, Err::InvalidArgument, "grid size >= 1");
  std::vector<Point> v;
  auto id = [n](int i, int j, int k) {
    return (i * (n + 1) + j) * (n + 1) + k;
  };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= n; ++k)
        v.push_back(
            make_point({double(i) / n, double(j) / n, double(k) / n}));

  // six tetrahedra per cube along the main diagonal, one per permutation
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::vector<int>> cells;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (const auto& perm : perms) {
          int c[3] = {i, j, k};
          std::vector<int> tet = {id(c[0], c[1], c[2])};
          for (int step = 0; step < 3; ++step) {
            c[perm[step]] += 1;
            tet.push_back(id(c[0], c[1], c[2]));
          }
          cells.push_back(tet);
        }
  return build_macro_mesh(v, cells);
}

MacroMesh reference_simplex_mesh(int d) {
  ALFELD_REQUIRE(d >= 1, Err::InvalidArgument, "dimension >= 1");
  std::vector<Point> v;
  std::vector<int> cell;
  for (int i = 0; i <= d; ++i) {
    Point p = Point::Zero(d);
    if (i > 0) p[i - 1] = 1.0;
    v.push_back(p);
    cell.push_back(i);
  }
  return build_macro_mesh(v, {cell});
}

MacroMesh builtin_mesh(const std::string& name) {
  auto suffix_int = [](const std::string& s, const std::string& prefix,
                       int& out) {
    if (s.size() <= prefix.size() || s.compare(0, prefix.size(), prefix) != 0)
      return false;
    std::string tail = s.substr(prefix.size());
    if (!std::all_of(tail.begin(), tail.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
      return false;
    out = std::stoi(tail);
    return true;
  };

  if (name == "tri1") return unit_triangle();
  if (name == "square2") return unit_square_two_triangles();
  if (name == "tet1") return reference_tet();
  if (name == "tet2") return two_tets();
  if (name == "cube6") return kuhn_cube(1);
  int n = 0;
  if (suffix_int(name, "square", n)) return square_grid(n);
  if (suffix_int(name, "grid", n)) return square_grid(n);
  if (suffix_int(name, "cube", n)) return kuhn_cube(n);
  if (suffix_int(name, "kuhn", n)) return kuhn_cube(n);
  if (suffix_int(name, "simplex", n)) return reference_simplex_mesh(n);
  throw Error(Err::InvalidArgument, "unknown builtin mesh: " + name);
}

}  // namespace alfeld
