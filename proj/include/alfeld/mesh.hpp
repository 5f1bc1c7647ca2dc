// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "alfeld/error.hpp"

namespace alfeld {

using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;

/// Cell of a simplicial mesh: d+1 distinct vertex ids, stored so that the
/// edge vectors from vertex 0 have positive determinant.
struct Simplex {
  std::vector<int> v;
  int orientation_sign = +1;  // sign of the determinant before normalization
};

/// Conforming simplicial mesh of a polytope in R^d.
struct MacroMesh {
  int dim = 0;
  std::vector<Point> vertices;
  std::vector<Simplex> cells;
  // sorted vertex-id tuples of the (d-1)-faces on the domain boundary
  std::set<std::vector<int>> boundary_facets;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  Point cell_vertex(int cell, int local) const {
    return vertices[cells[cell].v[local]];
  }
};

/// Interior-point split of every macro cell into d+1 children. Child c of a
/// macro cell omits macro local vertex c; its vertex list is
/// [split point, remaining macro vertices in increasing local order].
struct RefinedMesh {
  MacroMesh macro;
  std::vector<Point> split_points;             // one per macro cell
  std::vector<std::vector<Simplex>> children;  // [cell][child], refined ids

  int dim() const { return macro.dim; }
  int split_vertex_id(int cell) const { return macro.n_vertices() + cell; }
  Point refined_vertex(int id) const {
    return id < macro.n_vertices() ? macro.vertices[id]
                                   : split_points[id - macro.n_vertices()];
  }
  int n_refined_vertices() const {
    return macro.n_vertices() + macro.n_cells();
  }
  /// The refined complex as a plain mesh (children become cells).
  MacroMesh flatten() const;
};

/// Geometry of macro facet i (opposite macro vertex i) as seen from the
/// split point: outward unit normal, (d-1)-measure, and the distance h_i of
/// the split point to the facet hyperplane.
struct FaceGeometry {
  int face_index = 0;
  Vector unit_normal;
  double measure = 0;
  double h = 0;
};

struct CellShape {
  double diameter = 0;
  double inradius = 0;
  double ratio = 0;  // diameter / inradius
};

struct ShapeReport {
  std::vector<CellShape> macro;                  // per macro cell
  std::vector<std::vector<CellShape>> children;  // per macro cell, per child
  std::vector<double> refined_ratio;             // max child ratio per cell
  std::vector<int> flagged;  // macro cells with a child above threshold
  double threshold = 50.0;
};

/// Global tables of vertices, 1-edges and (d-1)-facets with
/// interior/boundary marks and a canonical facet orientation.
struct EntityTables {
  struct Facet {
    std::vector<int> verts;  // sorted vertex ids
    int cell_lo = -1;        // lowest adjacent cell id (owns the normal)
    int cell_hi = -1;        // second adjacent cell or -1 on the boundary
    bool interior = false;
    Vector normal;  // unit normal, outward from cell_lo
  };
  struct Edge {
    int a = 0, b = 0;  // a < b
    bool interior = false;
  };
  std::vector<bool> vertex_on_boundary;
  std::vector<Edge> edges;
  std::vector<Facet> facets;
  std::map<std::vector<int>, int> facet_index;  // sorted tuple -> facet id
  std::map<std::pair<int, int>, int> edge_index;

  int n_interior_facets() const {
    int n = 0;
    for (const auto& f : facets) n += f.interior;
    return n;
  }
  int n_interior_edges() const {
    int n = 0;
    for (const auto& e : edges) n += e.interior;
    return n;
  }
  int n_interior_vertices() const {
    int n = 0;
    for (bool b : vertex_on_boundary) n += !b;
    return n;
  }
};

enum class SplitRule { Barycenter, Explicit };

// --- operations ------------------------------------------------------------

/// Validates conformity, orients cells to positive volume and identifies
/// boundary facets.
MacroMesh build_macro_mesh(const std::vector<Point>& vertices,
                           const std::vector<std::vector<int>>& cells);

RefinedMesh refine(const MacroMesh& mesh, SplitRule rule,
                   const std::vector<Point>& explicit_points = {});

FaceGeometry face_geometry(const RefinedMesh& refined, int macro_cell, int i);

ShapeReport shape_report(const RefinedMesh& refined, double threshold = 50.0);

EntityTables enumerate_entities(const MacroMesh& mesh);

/// Red (d=2) or Bey (d=3) uniform refinement; every cell is split into 2^d
/// children using edge midpoints. Conforming for conforming input.
MacroMesh uniform_refine(const MacroMesh& mesh);

// --- geometry helpers -------------------------------------------------------

double simplex_volume(const std::vector<Point>& verts);
double simplex_diameter(const std::vector<Point>& verts);
double simplex_inradius(const std::vector<Point>& verts);
std::vector<Point> cell_points(const MacroMesh& mesh, int cell);

/// Barycentric coordinates of x with respect to the simplex `verts`.
Eigen::VectorXd barycentric_coords(const std::vector<Point>& verts,
                                   const Point& x);

// --- plain ASCII mesh file format -------------------------------------------
//   dim d
//   vertices n
//   <n lines of d reals>
//   cells m
//   <m lines of d+1 integer ids, 0-based>

void write_mesh(const MacroMesh& mesh, const std::string& path);
MacroMesh read_mesh(const std::string& path);

}  // namespace alfeld
