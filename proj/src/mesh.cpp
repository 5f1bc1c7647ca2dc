// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include "alfeld/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace alfeld {

double simplex_volume(const std::vector<Point>& verts) {
  const int d = static_cast<int>(verts[0].size());
  ALFELD_REQUIRE(int(verts.size()) == d + 1, Err::DimensionMismatch,
                 "simplex needs d+1 vertices");
  Eigen::MatrixXd e(d, d);
  for (int j = 0; j < d; ++j) e.col(j) = verts[j + 1] - verts[0];
  double det = e.determinant();
  double fact = 1;
  for (int i = 2; i <= d; ++i) fact *= i;
  return det / fact;  // signed
}

double simplex_diameter(const std::vector<Point>& verts) {
  double h = 0;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j)
      h = std::max(h, (verts[i] - verts[j]).norm());
  return h;
}

namespace {

double facet_measure(const std::vector<Point>& verts) {
  // (d-1)-measure of the simplex spanned by `verts` (d points in R^d)
  const int k = static_cast<int>(verts.size()) - 1;
  if (k == 0) return 1.0;
  Eigen::MatrixXd g(verts[0].size(), k);
  for (int j = 0; j < k; ++j) g.col(j) = verts[j + 1] - verts[0];
  double gram = (g.transpose() * g).determinant();
  double fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  return std::sqrt(std::max(gram, 0.0)) / fact;
}

}  // namespace

double simplex_inradius(const std::vector<Point>& verts) {
  const int d = static_cast<int>(verts[0].size());
  double vol = std::abs(simplex_volume(verts));
  double surf = 0;
  for (int i = 0; i <= d; ++i) {
    std::vector<Point> f;
    for (int j = 0; j <= d; ++j)
      if (j != i) f.push_back(verts[j]);
    surf += facet_measure(f);
  }
  return d * vol / surf;
}

std::vector<Point> cell_points(const MacroMesh& mesh, int cell) {
  std::vector<Point> p;
  for (int id : mesh.cells[cell].v) p.push_back(mesh.vertices[id]);
  return p;
}

Eigen::VectorXd barycentric_coords(const std::vector<Point>& verts,
                                   const Point& x) {
  const int d = static_cast<int>(x.size());
  Eigen::MatrixXd e(d, d);
  for (int j = 0; j < d; ++j) e.col(j) = verts[j + 1] - verts[0];
  Eigen::VectorXd y = e.partialPivLu().solve(x - verts[0]);
  Eigen::VectorXd lam(d + 1);
  lam[0] = 1.0 - y.sum();
  lam.tail(d) = y;
  return lam;
}

MacroMesh build_macro_mesh(const std::vector<Point>& vertices,
                           const std::vector<std::vector<int>>& cells) {
  ALFELD_REQUIRE(!vertices.empty(), Err::InvalidArgument, "no vertices");
  const int d = static_cast<int>(vertices[0].size());
  ALFELD_REQUIRE(d >= 1, Err::DimensionMismatch, "ambient dimension >= 1");
  for (const Point& p : vertices) {
    ALFELD_REQUIRE(int(p.size()) == d, Err::DimensionMismatch,
                   "inconsistent vertex dimension");
    ALFELD_REQUIRE(p.allFinite(), Err::InvalidArgument,
                   "non-finite vertex coordinates");
  }

  MacroMesh mesh;
  mesh.dim = d;
  mesh.vertices = vertices;
  for (const auto& ids : cells) {
    ALFELD_REQUIRE(int(ids.size()) == d + 1, Err::DimensionMismatch,
                   "cell must list d+1 vertex ids");
    std::set<int> uniq(ids.begin(), ids.end());
    ALFELD_REQUIRE(int(uniq.size()) == d + 1, Err::DegenerateCell,
                   "repeated vertex id in cell");
    for (int id : ids)
      ALFELD_REQUIRE(id >= 0 && id < int(vertices.size()),
                     Err::InvalidArgument, "vertex id out of range");
    Simplex s;
    s.v = ids;
    std::vector<Point> pts;
    for (int id : ids) pts.push_back(vertices[id]);
    double vol = simplex_volume(pts);
    double scale = std::pow(simplex_diameter(pts), d);
    ALFELD_REQUIRE(std::abs(vol) > 1e-13 * std::max(scale, 1e-300),
                   Err::DegenerateCell, "cell has (near) zero volume");
    s.orientation_sign = vol > 0 ? +1 : -1;
    if (vol < 0) std::swap(s.v[0], s.v[1]);  // orient to positive volume
    mesh.cells.push_back(s);
  }

  // facet sharing: every (d-1)-face in at most two cells
  std::map<std::vector<int>, std::vector<int>> facet_cells;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& ids = mesh.cells[c].v;
    for (int i = 0; i <= d; ++i) {
      std::vector<int> f;
      for (int j = 0; j <= d; ++j)
        if (j != i) f.push_back(ids[j]);
      std::sort(f.begin(), f.end());
      facet_cells[f].push_back(c);
    }
  }
  for (const auto& [f, cs] : facet_cells) {
    ALFELD_REQUIRE(cs.size() <= 2, Err::NonConforming,
                   "facet shared by more than two cells");
    if (cs.size() == 1) mesh.boundary_facets.insert(f);
  }

  // hanging-vertex test: in a conforming complex a vertex contained in the
  // closure of a cell must be one of that cell's vertices
  for (int vi = 0; vi < mesh.n_vertices(); ++vi) {
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const auto& ids = mesh.cells[c].v;
      if (std::find(ids.begin(), ids.end(), vi) != ids.end()) continue;
      std::vector<Point> pts = cell_points(mesh, c);
      Eigen::VectorXd lam = barycentric_coords(pts, mesh.vertices[vi]);
      double tol = 1e-10;
      if (lam.minCoeff() > -tol)
        throw Error(Err::NonConforming,
                    "vertex lies inside a cell it does not belong to");
    }
  }
  return mesh;
}

MacroMesh RefinedMesh::flatten() const {
  MacroMesh flat;
  flat.dim = macro.dim;
  flat.vertices = macro.vertices;
  for (const Point& p : split_points) flat.vertices.push_back(p);
  std::vector<std::vector<int>> cells;
  for (const auto& kids : children)
    for (const Simplex& s : kids) cells.push_back(s.v);
  return build_macro_mesh(flat.vertices, cells);
}

RefinedMesh refine(const MacroMesh& mesh, SplitRule rule,
                   const std::vector<Point>& explicit_points) {
  const int d = mesh.dim;
  RefinedMesh out;
  out.macro = mesh;
  if (rule == SplitRule::Explicit)
    ALFELD_REQUIRE(int(explicit_points.size()) == mesh.n_cells(),
                   Err::InvalidArgument,
                   "one explicit split point per cell required");

  for (int c = 0; c < mesh.n_cells(); ++c) {
    std::vector<Point> pts = cell_points(mesh, c);
    Point x0;
    if (rule == SplitRule::Barycenter) {
      x0 = Point::Zero(d);
      for (const Point& p : pts) x0 += p;
      x0 /= double(d + 1);
    } else {
      x0 = explicit_points[c];
      Eigen::VectorXd lam = barycentric_coords(pts, x0);
      double tol = 1e-12;
      ALFELD_REQUIRE(lam.minCoeff() > -tol, Err::SplitPointOutside,
                     "explicit split point outside its cell");
      ALFELD_REQUIRE(lam.minCoeff() > tol, Err::SplitPointOnBoundary,
                     "explicit split point on the cell boundary");
    }
    out.split_points.push_back(x0);
  }

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const int split_id = out.split_vertex_id(c);
    std::vector<Simplex> kids;
    for (int omit = 0; omit <= d; ++omit) {
      Simplex child;
      child.v.push_back(split_id);
      for (int j = 0; j <= d; ++j)
        if (j != omit) child.v.push_back(mesh.cells[c].v[j]);
      std::vector<Point> pts;
      for (int id : child.v) pts.push_back(out.refined_vertex(id));
      double vol = simplex_volume(pts);
      child.orientation_sign = vol > 0 ? +1 : -1;
      kids.push_back(child);
    }
    out.children.push_back(kids);
  }
  return out;
}

FaceGeometry face_geometry(const RefinedMesh& refined, int macro_cell, int i) {
  const MacroMesh& mesh = refined.macro;
  const int d = mesh.dim;
  ALFELD_REQUIRE(i >= 0 && i <= d, Err::InvalidArgument,
                 "face index out of range");
  std::vector<Point> pts = cell_points(mesh, macro_cell);

  // mu_i is the macro barycentric coordinate of vertex i; the outward
  // normal of the opposite facet is -grad(mu_i)/|grad(mu_i)| and the
  // distance of x to the facet hyperplane is mu_i(x)/|grad(mu_i)|.
  Eigen::MatrixXd e(d, d);
  for (int j = 0; j < d; ++j) e.col(j) = pts[j + 1] - pts[0];
  Eigen::MatrixXd einv = e.inverse();
  Vector grad_mu(d);
  if (i == 0) {
    grad_mu = Vector::Zero(d);
    for (int r = 0; r < d; ++r) grad_mu -= einv.row(r).transpose();
  } else {
    grad_mu = einv.row(i - 1).transpose();
  }

  FaceGeometry fg;
  fg.face_index = i;
  double g = grad_mu.norm();
  fg.unit_normal = -grad_mu / g;

  std::vector<Point> fpts;
  for (int j = 0; j <= d; ++j)
    if (j != i) fpts.push_back(pts[j]);
  fg.measure = facet_measure(fpts);

  Eigen::VectorXd lam = barycentric_coords(pts, refined.split_points[macro_cell]);
  fg.h = lam[i] / g;
  ALFELD_REQUIRE(fg.h > 0, Err::DegenerateChild, "split point not interior");
  return fg;
}

ShapeReport shape_report(const RefinedMesh& refined, double threshold) {
  ShapeReport rep;
  rep.threshold = threshold;
  const MacroMesh& mesh = refined.macro;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    std::vector<Point> pts = cell_points(mesh, c);
    CellShape cs;
    cs.diameter = simplex_diameter(pts);
    cs.inradius = simplex_inradius(pts);
    cs.ratio = cs.diameter / cs.inradius;
    rep.macro.push_back(cs);

    std::vector<CellShape> kids;
    double worst = 0;
    for (const Simplex& child : refined.children[c]) {
      std::vector<Point> cpts;
      for (int id : child.v) cpts.push_back(refined.refined_vertex(id));
      CellShape k;
      k.diameter = simplex_diameter(cpts);
      k.inradius = simplex_inradius(cpts);
      k.ratio = k.diameter / k.inradius;
      worst = std::max(worst, k.ratio);
      kids.push_back(k);
    }
    rep.children.push_back(kids);
    rep.refined_ratio.push_back(worst);
    if (worst > threshold) rep.flagged.push_back(c);
  }
  return rep;
}

EntityTables enumerate_entities(const MacroMesh& mesh) {
  const int d = mesh.dim;
  EntityTables et;
  et.vertex_on_boundary.assign(mesh.n_vertices(), false);
  for (const auto& f : mesh.boundary_facets)
    for (int v : f) et.vertex_on_boundary[v] = true;

  // facets with adjacency, owner = lowest adjacent cell id
  std::map<std::vector<int>, std::vector<int>> facet_cells;
  std::map<std::vector<int>, std::pair<int, int>> facet_opposite;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& ids = mesh.cells[c].v;
    for (int i = 0; i <= d; ++i) {
      std::vector<int> f;
      for (int j = 0; j <= d; ++j)
        if (j != i) f.push_back(ids[j]);
      std::sort(f.begin(), f.end());
      auto& cs = facet_cells[f];
      if (cs.empty() || c < cs.front()) facet_opposite[f] = {c, i};
      cs.push_back(c);
    }
  }
  for (auto& [f, cs] : facet_cells) {
    std::sort(cs.begin(), cs.end());
    EntityTables::Facet fac;
    fac.verts = f;
    fac.cell_lo = cs[0];
    fac.cell_hi = cs.size() > 1 ? cs[1] : -1;
    fac.interior = cs.size() == 2;
    // outward normal of the owning cell at the opposite-vertex facet
    auto [cell, opp] = facet_opposite[f];
    std::vector<Point> pts = cell_points(mesh, cell);
    Eigen::MatrixXd e(d, d);
    for (int j = 0; j < d; ++j) e.col(j) = pts[j + 1] - pts[0];
    Eigen::MatrixXd einv = e.inverse();
    Vector grad_mu(d);
    if (opp == 0) {
      grad_mu = Vector::Zero(d);
      for (int r = 0; r < d; ++r) grad_mu -= einv.row(r).transpose();
    } else {
      grad_mu = einv.row(opp - 1).transpose();
    }
    fac.normal = -grad_mu / grad_mu.norm();
    et.facet_index[f] = static_cast<int>(et.facets.size());
    et.facets.push_back(fac);
  }

  // 1-dimensional edges
  std::set<std::pair<int, int>> edges;
  for (const Simplex& s : mesh.cells)
    for (std::size_t i = 0; i < s.v.size(); ++i)
      for (std::size_t j = i + 1; j < s.v.size(); ++j)
        edges.insert({std::min(s.v[i], s.v[j]), std::max(s.v[i], s.v[j])});
  // an edge is on the boundary iff some boundary facet contains it
  std::set<std::pair<int, int>> boundary_edges;
  for (const auto& f : mesh.boundary_facets)
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = i + 1; j < f.size(); ++j)
        boundary_edges.insert({f[i], f[j]});
  if (d == 1) {
    // facets are vertices; edges are the cells themselves
    for (const Simplex& s : mesh.cells)
      edges.insert({std::min(s.v[0], s.v[1]), std::max(s.v[0], s.v[1])});
  }
  for (const auto& e : edges) {
    EntityTables::Edge ed;
    ed.a = e.first;
    ed.b = e.second;
    ed.interior = boundary_edges.find(e) == boundary_edges.end();
    et.edge_index[e] = static_cast<int>(et.edges.size());
    et.edges.push_back(ed);
  }
  return et;
}

MacroMesh uniform_refine(const MacroMesh& mesh) {
  const int d = mesh.dim;
  ALFELD_REQUIRE(d == 2 || d == 3, Err::DimensionRule,
                 "uniform refinement implemented for d = 2, 3");
  std::vector<Point> verts = mesh.vertices;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Point m = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
    int id = static_cast<int>(verts.size());
    verts.push_back(m);
    midpoint[key] = id;
    return id;
  };

  std::vector<std::vector<int>> cells;
  for (const Simplex& s : mesh.cells) {
    if (d == 2) {
      int v0 = s.v[0], v1 = s.v[1], v2 = s.v[2];
      int m01 = mid(v0, v1), m02 = mid(v0, v2), m12 = mid(v1, v2);
      cells.push_back({v0, m01, m02});
      cells.push_back({m01, v1, m12});
      cells.push_back({m02, m12, v2});
      cells.push_back({m01, m12, m02});
    } else {
      // Bey's red refinement with the x02-x13 interior diagonal
      int x0 = s.v[0], x1 = s.v[1], x2 = s.v[2], x3 = s.v[3];
      int m01 = mid(x0, x1), m02 = mid(x0, x2), m03 = mid(x0, x3);
      int m12 = mid(x1, x2), m13 = mid(x1, x3), m23 = mid(x2, x3);
      cells.push_back({x0, m01, m02, m03});
      cells.push_back({m01, x1, m12, m13});
      cells.push_back({m02, m12, x2, m23});
      cells.push_back({m03, m13, m23, x3});
      cells.push_back({m01, m02, m03, m13});
      cells.push_back({m01, m02, m12, m13});
      cells.push_back({m02, m03, m13, m23});
      cells.push_back({m02, m12, m13, m23});
    }
  }
  return build_macro_mesh(verts, cells);
}

void write_mesh(const MacroMesh& mesh, const std::string& path) {
  std::ofstream os(path);
  ALFELD_REQUIRE(os.good(), Err::IoError, "cannot open " + path);
  os.precision(17);
  os << "dim " << mesh.dim << "\n";
  os << "vertices " << mesh.n_vertices() << "\n";
  for (const Point& p : mesh.vertices) {
    for (int i = 0; i < mesh.dim; ++i) os << (i ? " " : "") << p[i];
    os << "\n";
  }
  os << "cells " << mesh.n_cells() << "\n";
  for (const Simplex& s : mesh.cells) {
    for (std::size_t i = 0; i < s.v.size(); ++i)
      os << (i ? " " : "") << s.v[i];
    os << "\n";
  }
}

MacroMesh read_mesh(const std::string& path) {
  std::ifstream is(path);
  ALFELD_REQUIRE(is.good(), Err::IoError, "cannot open " + path);
  std::string tag;
  int d = 0, nv = 0, nc = 0;
  is >> tag >> d;
  ALFELD_REQUIRE(tag == "dim" && d >= 1, Err::IoError, "bad mesh header");
  is >> tag >> nv;
  ALFELD_REQUIRE(tag == "vertices" && nv > 0, Err::IoError,
                 "bad vertex count");
  std::vector<Point> verts(nv, Point(d));
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < d; ++j) is >> verts[i][j];
  is >> tag >> nc;
  ALFELD_REQUIRE(tag == "cells" && nc > 0, Err::IoError, "bad cell count");
  std::vector<std::vector<int>> cells(nc, std::vector<int>(d + 1));
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j <= d; ++j) is >> cells[i][j];
  ALFELD_REQUIRE(!is.fail(), Err::IoError, "truncated mesh file");
  return build_macro_mesh(verts, cells);
}

}  // namespace alfeld
