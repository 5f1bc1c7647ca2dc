// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>

#include "alfeld/mesh.hpp"
#include "alfeld/meshzoo.hpp"

using namespace alfeld;

namespace {

Point pt(std::initializer_list<double> xs) {
  Point p(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) p[i++] = x;
  return p;
}

}  // namespace

TEST_CASE("single triangle mesh") {
  MacroMesh m = unit_triangle();
  CHECK(m.n_cells() == 1);
  CHECK(m.boundary_facets.size() == 3);
}

TEST_CASE("two-triangle square") {
  MacroMesh m = unit_square_two_triangles();
  EntityTables et = enumerate_entities(m);
  CHECK(m.boundary_facets.size() == 4);
  CHECK(et.n_interior_facets() == 1);
  CHECK(et.edges.size() == 5);
  CHECK(et.n_interior_edges() == 1);
}

TEST_CASE("construction failures") {
  SUBCASE("hanging facet is rejected") {
    std::vector<Point> v = {pt({0, 0}), pt({1, 0}), pt({0, 1}),
                            pt({0.5, 0.0}), pt({1.5, 0.0}), pt({1.0, -1.0})};
    CHECK_THROWS_WITH_AS(
        build_macro_mesh(v, {{0, 1, 2}, {3, 4, 5}}),
        doctest::Contains("NonConforming"), Error);
  }
  SUBCASE("degenerate cell is rejected") {
    std::vector<Point> v = {pt({0, 0}), pt({1, 0}), pt({2, 0})};
    CHECK_THROWS_WITH_AS(build_macro_mesh(v, {{0, 1, 2}}),
                         doctest::Contains("DegenerateCell"), Error);
  }
  SUBCASE("dimension mismatch is rejected") {
    std::vector<Point> v = {pt({0, 0}), pt({1, 0}), pt({0, 1})};
    CHECK_THROWS_AS(build_macro_mesh(v, {{0, 1}}), Error);
  }
}

TEST_CASE("barycenter refinement of the unit triangle") {
  RefinedMesh r = refine(unit_triangle(), SplitRule::Barycenter);
  CHECK(r.children[0].size() == 3);
  double sum = 0;
  for (const Simplex& child : r.children[0]) {
    std::vector<Point> pts;
    for (int id : child.v) pts.push_back(r.refined_vertex(id));
    double vol = std::abs(simplex_volume(pts));
    CHECK(vol == doctest::Approx(0.5 / 3.0));
    sum += vol;
  }
  CHECK(sum == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("barycenter refinement of the unit tetrahedron") {
  RefinedMesh r = refine(reference_tet(), SplitRule::Barycenter);
  CHECK(r.children[0].size() == 4);
  double sum = 0;
  for (const Simplex& child : r.children[0]) {
    std::vector<Point> pts;
    for (int id : child.v) pts.push_back(r.refined_vertex(id));
    sum += std::abs(simplex_volume(pts));
  }
  CHECK(sum == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  // child c omits macro vertex c
  for (int c = 0; c <= 3; ++c) {
    const auto& ids = r.children[0][c].v;
    int omitted = r.macro.cells[0].v[c];
    CHECK(std::find(ids.begin(), ids.end(), omitted) == ids.end());
  }
}

TEST_CASE("explicit split point") {
  MacroMesh tri = unit_triangle();
  SUBCASE("valid interior point, unequal volumes") {
    RefinedMesh r = refine(tri, SplitRule::Explicit, {pt({0.9, 0.09})});
    double sum = 0;
    std::set<double> vols;
    for (const Simplex& child : r.children[0]) {
      std::vector<Point> pts;
      for (int id : child.v) pts.push_back(r.refined_vertex(id));
      double v = std::abs(simplex_volume(pts));
      vols.insert(v);
      sum += v;
    }
    CHECK(sum == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(vols.size() == 3);  // genuinely unequal
  }
  SUBCASE("outside point rejected") {
    CHECK_THROWS_WITH_AS(refine(tri, SplitRule::Explicit, {pt({2.0, 2.0})}),
                         doctest::Contains("SplitPointOutside"), Error);
  }
  SUBCASE("boundary point rejected") {
    CHECK_THROWS_WITH_AS(refine(tri, SplitRule::Explicit, {pt({0.5, 0.0})}),
                         doctest::Contains("SplitPointOnBoundary"), Error);
  }
}

TEST_CASE("face geometry") {
  SUBCASE("unit triangle, facet opposite (0,1)") {
    RefinedMesh r = refine(unit_triangle(), SplitRule::Barycenter);
    FaceGeometry fg = face_geometry(r, 0, 2);
    CHECK(fg.unit_normal[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fg.unit_normal[1] == doctest::Approx(-1.0));
    CHECK(fg.h == doctest::Approx(1.0 / 3.0));
    CHECK(fg.measure == doctest::Approx(1.0));
  }
  SUBCASE("sum of measure-weighted normals vanishes") {
    RefinedMesh r = refine(two_tets(), SplitRule::Barycenter);
    for (int cell = 0; cell < 2; ++cell) {
      Vector sum = Vector::Zero(3);
      for (int i = 0; i <= 3; ++i) {
        FaceGeometry fg = face_geometry(r, cell, i);
        sum += fg.measure * fg.unit_normal;
      }
      CHECK(sum.norm() == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
  SUBCASE("unit tetrahedron, facet z=0") {
    RefinedMesh r = refine(reference_tet(), SplitRule::Barycenter);
    FaceGeometry fg = face_geometry(r, 0, 3);  // opposite (0,0,1)
    CHECK(fg.h == doctest::Approx(0.25));
    CHECK(fg.unit_normal[2] == doctest::Approx(-1.0));
  }
  SUBCASE("any d normals are linearly independent") {
    RefinedMesh r = refine(reference_tet(), SplitRule::Barycenter);
    std::vector<Vector> n;
    for (int i = 0; i <= 3; ++i)
      n.push_back(face_geometry(r, 0, i).unit_normal);
    for (int skip = 0; skip <= 3; ++skip) {
      Eigen::MatrixXd m(3, 3);
      int col = 0;
      for (int i = 0; i <= 3; ++i)
        if (i != skip) m.col(col++) = n[i];
      CHECK(std::abs(m.determinant()) > 1e-3);
    }
  }
}

TEST_CASE("shape report") {
  SUBCASE("equilateral triangle: ratio 2 sqrt(3)") {
    double s3 = std::sqrt(3.0) / 2.0;
    std::vector<Point> v = {pt({0, 0}), pt({1, 0}), pt({0.5, s3})};
    MacroMesh m = build_macro_mesh(v, {{0, 1, 2}});
    RefinedMesh r = refine(m, SplitRule::Barycenter);
    ShapeReport rep = shape_report(r);
    CHECK(rep.macro[0].ratio == doctest::Approx(2.0 * std::sqrt(3.0)));
    // the three children of the barycenter split are congruent
    CHECK(rep.children[0][0].ratio ==
          doctest::Approx(rep.children[0][1].ratio));
    CHECK(rep.children[0][1].ratio ==
          doctest::Approx(rep.children[0][2].ratio));
    CHECK(rep.flagged.empty());
  }
  SUBCASE("unit triangle: h = sqrt(2), rho = (2-sqrt(2))/2") {
    RefinedMesh r = refine(unit_triangle(), SplitRule::Barycenter);
    ShapeReport rep = shape_report(r);
    CHECK(rep.macro[0].diameter == doctest::Approx(std::sqrt(2.0)));
    CHECK(rep.macro[0].inradius ==
          doctest::Approx((2.0 - std::sqrt(2.0)) / 2.0));
    CHECK(rep.macro[0].ratio == doctest::Approx(2.0 + 2.0 * std::sqrt(2.0)));
  }
  SUBCASE("a split point near a facet is flagged") {
    RefinedMesh r =
        refine(unit_triangle(), SplitRule::Explicit, {pt({1e-4, 1e-4})});
    ShapeReport rep = shape_report(r);
    CHECK(rep.flagged.size() == 1);
  }
}

TEST_CASE("entity tables") {
  SUBCASE("single tetrahedron") {
    EntityTables et = enumerate_entities(reference_tet());
    CHECK(et.edges.size() == 6);
    CHECK(et.facets.size() == 4);
    CHECK(et.n_interior_facets() == 0);
    CHECK(et.n_interior_vertices() == 0);
  }
  SUBCASE("Kuhn cube: 18 facets, 6 interior (brute-force oracle)") {
    MacroMesh m = kuhn_cube(1);
    CHECK(m.n_cells() == 6);
    EntityTables et = enumerate_entities(m);
    // independent recount by facet-key hashing
    std::map<std::vector<int>, int> count;
    for (const Simplex& s : m.cells)
      for (int i = 0; i <= 3; ++i) {
        std::vector<int> f;
        for (int j = 0; j <= 3; ++j)
          if (j != i) f.push_back(s.v[j]);
        std::sort(f.begin(), f.end());
        count[f] += 1;
      }
    int total = static_cast<int>(count.size());
    int interior = 0;
    for (const auto& [f, c] : count) interior += (c == 2);
    CHECK(total == 18);
    CHECK(interior == 6);
    CHECK(int(et.facets.size()) == total);
    CHECK(et.n_interior_facets() == interior);
  }
  SUBCASE("canonical facet normal points out of the lower cell") {
    MacroMesh m = unit_square_two_triangles();
    EntityTables et = enumerate_entities(m);
    for (const auto& f : et.facets) {
      if (!f.interior) continue;
      CHECK(f.cell_lo < f.cell_hi);
      // normal points from cell_lo toward cell_hi
      Point centroid_lo = Point::Zero(2), centroid_hi = Point::Zero(2);
      for (int id : m.cells[f.cell_lo].v) centroid_lo += m.vertices[id] / 3.0;
      for (int id : m.cells[f.cell_hi].v) centroid_hi += m.vertices[id] / 3.0;
      CHECK(f.normal.dot(centroid_hi - centroid_lo) > 0);
    }
  }
}

TEST_CASE("refined mesh is conforming and IO round-trips") {
  RefinedMesh r = refine(unit_square_two_triangles(), SplitRule::Barycenter);
  MacroMesh flat = r.flatten();  // runs the conformity checks
  CHECK(flat.n_cells() == 6);
  CHECK(flat.n_vertices() == 6);

  std::string path = "/tmp/alfeld_mesh_roundtrip.txt";
  write_mesh(flat, path);
  MacroMesh back = read_mesh(path);
  CHECK(back.n_cells() == flat.n_cells());
  CHECK(back.n_vertices() == flat.n_vertices());
  for (int i = 0; i < flat.n_vertices(); ++i)
    CHECK((back.vertices[i] - flat.vertices[i]).norm() ==
          doctest::Approx(0.0));
  for (int c = 0; c < flat.n_cells(); ++c) CHECK(back.cells[c].v == flat.cells[c].v);
  std::remove(path.c_str());
}

TEST_CASE("uniform refinement") {
  SUBCASE("triangles: 4x cells, volume preserved") {
    MacroMesh m = square_grid(2);
    MacroMesh f = uniform_refine(m);
    CHECK(f.n_cells() == 4 * m.n_cells());
    double v0 = 0, v1 = 0;
    for (int c = 0; c < m.n_cells(); ++c)
      v0 += std::abs(simplex_volume(cell_points(m, c)));
    for (int c = 0; c < f.n_cells(); ++c)
      v1 += std::abs(simplex_volume(cell_points(f, c)));
    CHECK(v1 == doctest::Approx(v0));
  }
  SUBCASE("tetrahedra: 8 children of equal volume") {
    MacroMesh m = reference_tet();
    MacroMesh f = uniform_refine(m);
    CHECK(f.n_cells() == 8);
    for (int c = 0; c < 8; ++c)
      CHECK(std::abs(simplex_volume(cell_points(f, c))) ==
            doctest::Approx(1.0 / 6.0 / 8.0));
  }
  SUBCASE("Kuhn mesh refines conformingly") {
    MacroMesh f = uniform_refine(kuhn_cube(1));
    CHECK(f.n_cells() == 48);  // construction validates conformity
  }
}

TEST_CASE("builtin mesh catalog") {
  CHECK(builtin_mesh("tri1").n_cells() == 1);
  CHECK(builtin_mesh("square2").n_cells() == 2);
  CHECK(builtin_mesh("grid4").n_cells() == 32);
  CHECK(builtin_mesh("square4").n_cells() == 32);
  CHECK(builtin_mesh("tet1").n_cells() == 1);
  CHECK(builtin_mesh("tet2").n_cells() == 2);
  CHECK(builtin_mesh("cube6").n_cells() == 6);
  CHECK(builtin_mesh("cube2").n_cells() == 48);
  CHECK(builtin_mesh("simplex4").n_cells() == 1);
  CHECK(builtin_mesh("simplex4").dim == 4);
  CHECK_THROWS_AS(builtin_mesh("nope"), Error);
}
