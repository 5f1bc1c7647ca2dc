// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include "alfeld/spaces.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <mutex>

#include "alfeld/quadrature.hpp"

namespace alfeld {

MeshContext make_context(const MacroMesh& mesh, SplitRule rule) {
  MeshContext ctx;
  ctx.refined = refine(mesh, rule);
  ctx.entities = enumerate_entities(mesh);
  for (int m = 0; m < mesh.n_cells(); ++m)
    ctx.geom.push_back(lambda_system(ctx.refined, m));
  return ctx;
}

int FeSpace::find_dof(DofType type, int entity, int comp) const {
  for (int i = 0; i < dim; ++i)
    if (dof_info[i].type == type && dof_info[i].entity == entity &&
        dof_info[i].comp == comp)
      return i;
  return -1;
}

const std::vector<BaryPolyD>& lagrange_nodal_basis(int d, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<BaryPolyD>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(d, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const auto& tab = MonomialTable::get(d + 1, k);
  const int n = tab.size();
  Eigen::MatrixXd vand(n, n);
  for (int node = 0; node < n; ++node) {
    std::vector<double> lam(d + 1);
    for (int v = 0; v <= d; ++v)
      lam[v] = double(tab.exponents(node)[v]) / double(k);
    for (int mono = 0; mono < n; ++mono) {
      BaryPolyD m(d + 1, k);
      m.coef[mono] = 1.0;
      vand(node, mono) = poly_eval(m, lam);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(vand);
  ALFELD_REQUIRE(lu.isInvertible(), Err::SingularDofMatrix,
                 "Lagrange Vandermonde singular");
  Eigen::MatrixXd coef = lu.inverse();  // basis j has coefficients coef.col(j)
  std::vector<BaryPolyD> basis;
  for (int j = 0; j < n; ++j) {
    BaryPolyD p(d + 1, k);
    for (int i = 0; i < n; ++i) p.coef[i] = coef(i, j);
    basis.push_back(p);
  }
  return cache.emplace(key, std::move(basis)).first->second;
}

namespace {

using NodeKey = std::vector<std::pair<int, int>>;  // sorted (vertex, power)

struct NodeData {
  bool boundary = false;
  // refined: (cell, child, lattice rank); macro: child = -1
  std::vector<std::array<int, 3>> occurrences;
};

bool is_boundary_macro_facet(const MeshContext& ctx, int cell, int opposite) {
  const auto& ids = ctx.macro().cells[cell].v;
  std::vector<int> f;
  for (int j = 0; j < int(ids.size()); ++j)
    if (j != opposite) f.push_back(ids[j]);
  std::sort(f.begin(), f.end());
  return ctx.macro().boundary_facets.count(f) > 0;
}

}  // namespace

FeSpace lagrange_space(const MeshContext& ctx, int k, bool on_refined,
                       bool zero_boundary, int ncomp) {
  ALFELD_REQUIRE(k >= 1 && k <= 4, Err::DimensionRule,
                 "Lagrange degree supported in 1..4");
  const int d = ctx.dim();
  const auto& tab = MonomialTable::get(d + 1, k);
  std::map<NodeKey, NodeData> nodes;

  for (int m = 0; m < ctx.n_cells(); ++m) {
    if (on_refined) {
      for (int c = 0; c <= d; ++c) {
        const auto& vert_ids = ctx.refined.children[m][c].v;
        bool facet_bdry = is_boundary_macro_facet(ctx, m, c);
        for (int r = 0; r < tab.size(); ++r) {
          const MultiIndex& a = tab.exponents(r);
          NodeKey key;
          for (int s = 0; s <= d; ++s)
            if (a[s] > 0) key.push_back({vert_ids[s], a[s]});
          std::sort(key.begin(), key.end());
          NodeData& nd = nodes[key];
          nd.occurrences.push_back({m, c, r});
          // the only child face on the domain boundary is the macro facet
          // opposite the split point (slot 0)
          if (facet_bdry && a[0] == 0) nd.boundary = true;
        }
      }
    } else {
      const auto& vert_ids = ctx.macro().cells[m].v;
      std::vector<bool> facet_bdry(d + 1);
      for (int i = 0; i <= d; ++i)
        facet_bdry[i] = is_boundary_macro_facet(ctx, m, i);
      for (int r = 0; r < tab.size(); ++r) {
        const MultiIndex& a = tab.exponents(r);
        NodeKey key;
        for (int s = 0; s <= d; ++s)
          if (a[s] > 0) key.push_back({vert_ids[s], a[s]});
        std::sort(key.begin(), key.end());
        NodeData& nd = nodes[key];
        nd.occurrences.push_back({m, -1, r});
        for (int i = 0; i <= d; ++i)
          if (facet_bdry[i] && a[i] == 0) nd.boundary = true;
      }
    }
  }

  FeSpace sp;
  sp.kind = on_refined ? SpaceKind::LagrangeRefined : SpaceKind::LagrangeMacro;
  sp.name = (ncomp > 1 ? "P" : "p") + std::to_string(k) +
            (on_refined ? "c(Tr)" : "c(T)");
  sp.k = k;
  sp.ncomp = ncomp;
  sp.max_degree = k;
  sp.pkc_refined_k = on_refined ? k : 0;
  sp.zero_boundary = zero_boundary;
  sp.ctx = &ctx;
  sp.cell_basis.resize(ctx.n_cells());

  const auto& nodal = lagrange_nodal_basis(d, k);

  int node_count = 0;
  for (auto& [key, nd] : nodes) {
    if (zero_boundary && nd.boundary) continue;
    int node_id = node_count++;
    for (int q = 0; q < ncomp; ++q) {
      int gid = node_id * ncomp + q;
      sp.dof_info.push_back({DofType::LagrangeNode, node_id, q});
      sp.dof_cells.emplace_back();
      // group occurrences by macro cell
      std::map<int, std::vector<std::array<int, 3>>> by_cell;
      for (const auto& occ : nd.occurrences) by_cell[occ[0]].push_back(occ);
      for (const auto& [m, occs] : by_cell) {
        LocalField lf;
        lf.global_id = gid;
        lf.field.comp.assign(ncomp, pw_zero(ctx.geom[m], k));
        for (int i = 0; i < ncomp; ++i)
          lf.field.comp[i].continuity = Continuity::C0;
        for (const auto& occ : occs) {
          if (occ[1] >= 0) {
            lf.field.comp[q].on_child[occ[1]] =
                poly_add(lf.field.comp[q].on_child[occ[1]], nodal[occ[2]]);
          } else {
            PiecewiseScalarD restricted =
                restrict_macro_poly(nodal[occ[2]], ctx.geom[m]);
            lf.field.comp[q] = pw_add(lf.field.comp[q], restricted);
          }
        }
        sp.dof_cells[gid].push_back(
            {m, static_cast<int>(sp.cell_basis[m].size())});
        sp.cell_basis[m].push_back(std::move(lf));
      }
    }
  }
  sp.dim = node_count * ncomp;
  return sp;
}

FeSpace discontinuous_space(const MeshContext& ctx, int k, bool on_refined) {
  ALFELD_REQUIRE(k >= 0 && k <= 4, Err::DimensionRule,
                 "discontinuous degree supported in 0..4");
  const int d = ctx.dim();
  const auto& tab = MonomialTable::get(d + 1, k);

  FeSpace sp;
  sp.kind = on_refined ? SpaceKind::DiscRefined : SpaceKind::DiscMacro;
  sp.name = "p" + std::to_string(k) + (on_refined ? "(Tr)" : "(T)");
  sp.k = k;
  sp.ncomp = 1;
  sp.max_degree = k;
  sp.mean_constrained = true;
  sp.ctx = &ctx;
  sp.cell_basis.resize(ctx.n_cells());

  int gid = 0;
  for (int m = 0; m < ctx.n_cells(); ++m) {
    if (on_refined) {
      for (int c = 0; c <= d; ++c)
        for (int r = 0; r < tab.size(); ++r) {
          LocalField lf;
          lf.global_id = gid;
          lf.field.comp.assign(1, pw_zero(ctx.geom[m], k));
          lf.field.comp[0].continuity = Continuity::L2;
          lf.field.comp[0].on_child[c].coef[r] = 1.0;
          sp.dof_info.push_back({DofType::CellMono, m * (d + 1) + c, r});
          sp.dof_cells.push_back({{m, int(sp.cell_basis[m].size())}});
          sp.cell_basis[m].push_back(std::move(lf));
          ++gid;
        }
    } else {
      for (int r = 0; r < tab.size(); ++r) {
        BaryPolyD mono(d + 1, k);
        mono.coef[r] = 1.0;
        LocalField lf;
        lf.global_id = gid;
        lf.field.comp.assign(1, restrict_macro_poly(mono, ctx.geom[m]));
        sp.dof_info.push_back({DofType::CellMono, m, r});
        sp.dof_cells.push_back({{m, int(sp.cell_basis[m].size())}});
        sp.cell_basis[m].push_back(std::move(lf));
        ++gid;
      }
    }
  }
  sp.dim = gid;
  return sp;
}

FeSpace whr_space(const MeshContext& ctx) {
  FeSpace sp = lagrange_space(ctx, 1, /*on_refined=*/true,
                              /*zero_boundary=*/false, /*ncomp=*/1);
  sp.kind = SpaceKind::PressureWhR;
  sp.name = "WhR";
  sp.mean_constrained = true;
  return sp;
}

namespace {

int local_facet_index(const MacroMesh& mesh, int cell,
                      const std::vector<int>& facet_verts) {
  const auto& ids = mesh.cells[cell].v;
  for (int i = 0; i < int(ids.size()); ++i) {
    std::vector<int> f;
    for (int j = 0; j < int(ids.size()); ++j)
      if (j != i) f.push_back(ids[j]);
    std::sort(f.begin(), f.end());
    if (f == facet_verts) return i;
  }
  throw Error(Err::MeshMismatch, "facet not found in cell");
}

}  // namespace

FeSpace bubble_space(const MeshContext& ctx, bool modified) {
  const int d = ctx.dim();
  FeSpace sp;
  sp.kind = modified ? SpaceKind::BubbleMF : SpaceKind::BubbleBR;
  sp.name = modified ? "VMF" : "VBR";
  sp.k = d;
  sp.ncomp = d;
  sp.max_degree = d;
  sp.zero_boundary = true;
  sp.ctx = &ctx;
  sp.cell_basis.resize(ctx.n_cells());

  int gid = 0;
  for (std::size_t f = 0; f < ctx.entities.facets.size(); ++f) {
    const auto& facet = ctx.entities.facets[f];
    if (!facet.interior) continue;
    sp.dof_info.push_back({DofType::BubbleFlux, int(f), 0});
    sp.dof_cells.emplace_back();
    for (int side = 0; side < 2; ++side) {
      int m = side == 0 ? facet.cell_lo : facet.cell_hi;
      double sign = side == 0 ? 1.0 : -1.0;
      int i = local_facet_index(ctx.macro(), m, facet.verts);
      PiecewiseFieldD field;
      double scale;
      if (modified) {
        ModifiedBubble mb = modify_bubble(ctx.geom[m], i);
        FaceBubble fb = face_bubble(ctx.geom[m], i);
        scale = sign / fb.face_integral;
        field = pw_scale(mb.field, scale);
      } else {
        FaceBubble fb = face_bubble(ctx.geom[m], i);
        scale = sign / fb.face_integral;
        field = pw_scale(fb.restricted, scale);
      }
      LocalField lf;
      lf.global_id = gid;
      lf.field = std::move(field);
      sp.dof_cells[gid].push_back({m, int(sp.cell_basis[m].size())});
      sp.cell_basis[m].push_back(std::move(lf));
    }
    ++gid;
  }
  sp.dim = gid;
  return sp;
}

FeSpace sum_spaces(const FeSpace& a, const FeSpace& b) {
  ALFELD_REQUIRE(a.ctx == b.ctx, Err::MeshMismatch,
                 "sum of spaces on different meshes");
  ALFELD_REQUIRE(a.ncomp == b.ncomp, Err::DimensionMismatch,
                 "sum of spaces with different component counts");
  FeSpace sp;
  sp.kind = SpaceKind::SumSpace;
  sp.name = a.name + "+" + b.name;
  sp.k = std::max(a.k, b.k);
  sp.ncomp = a.ncomp;
  sp.dim = a.dim + b.dim;
  sp.max_degree = std::max(a.max_degree, b.max_degree);
  sp.pkc_refined_k = std::max(a.pkc_refined_k, b.pkc_refined_k);
  sp.zero_boundary = a.zero_boundary && b.zero_boundary;
  sp.ctx = a.ctx;
  sp.cell_basis.resize(a.ctx->n_cells());
  sp.dof_info = a.dof_info;
  sp.dof_cells = a.dof_cells;
  for (int m = 0; m < a.ctx->n_cells(); ++m) sp.cell_basis[m] = a.cell_basis[m];
  for (const auto& info : b.dof_info) sp.dof_info.push_back(info);
  for (int j = 0; j < b.dim; ++j) {
    sp.dof_cells.emplace_back();
    for (auto [m, li] : b.dof_cells[j]) {
      LocalField lf = b.cell_basis[m][li];
      lf.global_id = a.dim + j;
      sp.dof_cells[a.dim + j].push_back({m, int(sp.cell_basis[m].size())});
      sp.cell_basis[m].push_back(std::move(lf));
    }
  }
  return sp;
}

// --- local dof functionals ---------------------------------------------------

namespace {

std::vector<double> vertex_child_coords(const LambdaSystemD& geom, int v,
                                        int c) {
  std::vector<double> lam(geom.d + 1, 0.0);
  lam[LambdaSystemD::slot_of_vertex(c, v)] = 1.0;
  return lam;
}

int child_containing_vertex(int v, int d) { return v == 0 ? 1 : 0; }

double eval_comp_at_vertex(const PiecewiseFieldD& f, const LambdaSystemD& geom,
                           int v, int comp) {
  int c = child_containing_vertex(v, geom.d);
  return poly_eval(f.comp[comp].on_child[c], vertex_child_coords(geom, v, c));
}

double eval_div_at_vertex(const PiecewiseScalarD& div,
                          const LambdaSystemD& geom, int v) {
  int c = child_containing_vertex(v, geom.d);
  return poly_eval(div.on_child[c], vertex_child_coords(geom, v, c));
}

Eigen::VectorXd edge_moment(const PiecewiseFieldD& f,
                            const LambdaSystemD& geom, int a, int b) {
  const int d = geom.d;
  int c = 0;
  while (c == a || c == b) ++c;
  double len = 0;
  for (int i = 0; i < d; ++i) {
    double diff = geom.macro_verts[a][i] - geom.macro_verts[b][i];
    len += diff * diff;
  }
  len = std::sqrt(len);
  QuadratureRule g = gauss2_interval();
  Eigen::VectorXd moment = Eigen::VectorXd::Zero(d);
  for (int q = 0; q < g.size(); ++q) {
    std::vector<double> lam(d + 1, 0.0);
    lam[LambdaSystemD::slot_of_vertex(c, a)] = g.points[q][0];
    lam[LambdaSystemD::slot_of_vertex(c, b)] = g.points[q][1];
    for (int i = 0; i < d; ++i)
      moment[i] += len * g.weights[q] * poly_eval(f.comp[i].on_child[c], lam);
  }
  return moment;
}

double facet_flux(const PiecewiseFieldD& f, const LambdaSystemD& geom, int i) {
  const int d = geom.d;
  Eigen::VectorXd n = face_normal(geom, i);
  double measure = face_measure(geom, i);
  int deg = 0;
  for (const auto& comp : f.comp)
    deg = std::max(deg, comp.on_child[i].degree);
  QuadratureRule rule = quadrature(d - 1, deg + 1);
  double flux = 0;
  for (int q = 0; q < rule.size(); ++q) {
    std::vector<double> lam(d + 1, 0.0);
    for (int s = 1; s <= d; ++s) lam[s] = rule.points[q][s - 1];
    double vn = 0;
    for (int comp = 0; comp < d; ++comp)
      vn += n[comp] * poly_eval(f.comp[comp].on_child[i], lam);
    flux += measure * rule.weights[q] * vn;
  }
  return flux;
}

/// Shared machinery: evaluates the dof list on raw fields, inverts, and
/// returns the biorthogonal basis.
LocalDofBasis biorthogonalize(const LambdaSystemD& geom,
                              std::vector<PiecewiseFieldD> raw,
                              std::vector<LocalDofBasis::LocalDof> dofs,
                              std::vector<std::pair<int, int>> edges) {
  const int n = static_cast<int>(raw.size());
  ALFELD_REQUIRE(int(dofs.size()) == n, Err::SingularDofMatrix,
                 "dof count does not match local dimension");
  std::vector<PiecewiseScalarD> divs;
  divs.reserve(n);
  for (const auto& f : raw) divs.push_back(divergence(f, geom));

  Eigen::MatrixXd dmat(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto& dof = dofs[i];
      double val = 0;
      switch (dof.type) {
        case DofType::VertexValue:
          val = eval_comp_at_vertex(raw[j], geom, dof.entity, dof.comp);
          break;
        case DofType::DivAtVertex:
          val = eval_div_at_vertex(divs[j], geom, dof.entity);
          break;
        case DofType::EdgeMoment:
          val = edge_moment(raw[j], geom, edges[dof.entity].first,
                            edges[dof.entity].second)[dof.comp];
          break;
        case DofType::FacetFlux:
          val = facet_flux(raw[j], geom, dof.entity);
          break;
        default:
          throw Error(Err::InvalidArgument, "unexpected local dof type");
      }
      dmat(i, j) = val;
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(dmat);
  ALFELD_REQUIRE(lu.isInvertible(), Err::SingularDofMatrix,
                 "local dof matrix singular (unisolvence failure)");
  Eigen::MatrixXd inv = lu.inverse();

  LocalDofBasis out;
  out.dof_matrix = dmat;
  out.dofs = std::move(dofs);
  out.edges = std::move(edges);
  for (int j = 0; j < n; ++j) {
    PiecewiseFieldD acc = pw_zero_field(geom, 0);
    for (int r = 0; r < n; ++r) {
      if (inv(r, j) == 0.0) continue;
      acc = pw_add(acc, pw_scale(raw[r], inv(r, j)));
    }
    for (auto& comp : acc.comp) comp.continuity = Continuity::C0;
    out.fields.push_back(std::move(acc));
  }
  return out;
}

std::vector<PiecewiseFieldD> macro_poly_fields(const LambdaSystemD& geom,
                                               int degree) {
  const int d = geom.d;
  const auto& tab = MonomialTable::get(d + 1, degree);
  std::vector<PiecewiseScalarD> restricted;
  for (int r = 0; r < tab.size(); ++r) {
    BaryPolyD mono(d + 1, degree);
    mono.coef[r] = 1.0;
    restricted.push_back(restrict_macro_poly(mono, geom));
  }
  std::vector<PiecewiseFieldD> fields;
  for (int comp = 0; comp < d; ++comp)
    for (const auto& scalar : restricted) {
      PiecewiseFieldD f = pw_zero_field(geom, degree);
      f.comp[comp] = scalar;
      fields.push_back(std::move(f));
    }
  return fields;
}

std::vector<std::pair<int, int>> local_edges(int d) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a <= d; ++a)
    for (int b = a + 1; b <= d; ++b) edges.push_back({a, b});
  return edges;
}

}  // namespace

LocalDofBasis local_vr_basis(const LambdaSystemD& geom) {
  const int d = geom.d;
  ALFELD_REQUIRE(d >= 2, Err::DimensionRule, "VR space needs d >= 2");
  std::vector<PiecewiseFieldD> raw = macro_poly_fields(geom, 2);
  for (int i = 0; i <= d; ++i) raw.push_back(build_psi(geom, i).field);
  if (d >= 3)
    for (int i = 0; i <= d; ++i) raw.push_back(modify_bubble(geom, i).field);

  std::vector<LocalDofBasis::LocalDof> dofs;
  for (int v = 0; v <= d; ++v)
    for (int comp = 0; comp < d; ++comp)
      dofs.push_back({DofType::VertexValue, v, comp});
  for (int v = 0; v <= d; ++v) dofs.push_back({DofType::DivAtVertex, v, 0});
  auto edges = local_edges(d);
  for (int e = 0; e < int(edges.size()); ++e)
    for (int comp = 0; comp < d; ++comp)
      dofs.push_back({DofType::EdgeMoment, e, comp});
  if (d >= 3)
    for (int i = 0; i <= d; ++i) dofs.push_back({DofType::FacetFlux, i, 0});
  return biorthogonalize(geom, std::move(raw), std::move(dofs),
                         std::move(edges));
}

LocalDofBasis local_vdiv_basis(const LambdaSystemD& geom) {
  const int d = geom.d;
  std::vector<PiecewiseFieldD> raw;
  for (int i = 0; i <= d; ++i) raw.push_back(build_theta(geom, i).field);
  for (int i = 0; i <= d; ++i) raw.push_back(modify_bubble(geom, i).field);

  std::vector<LocalDofBasis::LocalDof> dofs;
  for (int i = 0; i <= d; ++i) dofs.push_back({DofType::FacetFlux, i, 0});
  for (int v = 0; v <= d; ++v) dofs.push_back({DofType::DivAtVertex, v, 0});
  return biorthogonalize(geom, std::move(raw), std::move(dofs), local_edges(d));
}

LocalDofBasis local_cor68_basis(const LambdaSystemD& geom) {
  const int d = geom.d;
  std::vector<PiecewiseFieldD> raw = macro_poly_fields(geom, 1);
  for (int i = 0; i <= d; ++i) raw.push_back(build_theta(geom, i).field);
  for (int i = 0; i <= d; ++i) raw.push_back(modify_bubble(geom, i).field);

  std::vector<LocalDofBasis::LocalDof> dofs;
  for (int v = 0; v <= d; ++v)
    for (int comp = 0; comp < d; ++comp)
      dofs.push_back({DofType::VertexValue, v, comp});
  for (int v = 0; v <= d; ++v) dofs.push_back({DofType::DivAtVertex, v, 0});
  for (int i = 0; i <= d; ++i) dofs.push_back({DofType::FacetFlux, i, 0});
  return biorthogonalize(geom, std::move(raw), std::move(dofs), local_edges(d));
}

namespace {

/// Builds a global space from per-cell dof bases by key matching, with the
/// homogeneous boundary condition applied entity-wise.
FeSpace build_dof_space(const MeshContext& ctx, SpaceKind kind,
                        const std::string& name,
                        LocalDofBasis (*local_builder)(const LambdaSystemD&),
                        int max_degree) {
  const int d = ctx.dim();
  FeSpace sp;
  sp.kind = kind;
  sp.name = name;
  sp.ncomp = d;
  sp.max_degree = max_degree;
  sp.zero_boundary = true;
  sp.ctx = &ctx;
  sp.cell_basis.resize(ctx.n_cells());

  std::vector<LocalDofBasis> locals;
  locals.reserve(ctx.n_cells());
  for (int m = 0; m < ctx.n_cells(); ++m)
    locals.push_back(local_builder(ctx.geom[m]));

  // key: (type rank, entity, comp) -> global id
  std::map<std::array<int, 3>, int> keys;
  auto key_of = [&](int m, const LocalDofBasis::LocalDof& dof,
                    const LocalDofBasis& lb, bool& drop,
                    double& sign) -> std::array<int, 3> {
    const auto& cell = ctx.macro().cells[m];
    drop = false;
    sign = 1.0;
    switch (dof.type) {
      case DofType::VertexValue: {
        int v = cell.v[dof.entity];
        drop = ctx.entities.vertex_on_boundary[v];
        return {1, v, dof.comp};
      }
      case DofType::DivAtVertex: {
        int v = cell.v[dof.entity];
        return {2, v, 0};
      }
      case DofType::EdgeMoment: {
        auto [a, b] = lb.edges[dof.entity];
        int ga = cell.v[a], gb = cell.v[b];
        auto it = ctx.entities.edge_index.find(
            {std::min(ga, gb), std::max(ga, gb)});
        ALFELD_REQUIRE(it != ctx.entities.edge_index.end(), Err::MeshMismatch,
                       "edge not in entity table");
        drop = !ctx.entities.edges[it->second].interior;
        return {3, it->second, dof.comp};
      }
      case DofType::FacetFlux: {
        std::vector<int> f;
        for (int j = 0; j <= d; ++j)
          if (j != dof.entity) f.push_back(cell.v[j]);
        std::sort(f.begin(), f.end());
        auto it = ctx.entities.facet_index.find(f);
        ALFELD_REQUIRE(it != ctx.entities.facet_index.end(), Err::MeshMismatch,
                       "facet not in entity table");
        const auto& facet = ctx.entities.facets[it->second];
        drop = !facet.interior;
        sign = (facet.cell_lo == m) ? 1.0 : -1.0;
        return {4, it->second, 0};
      }
      default:
        throw Error(Err::InvalidArgument, "unexpected dof type");
    }
  };

  // first pass: collect retained keys in deterministic order
  for (int m = 0; m < ctx.n_cells(); ++m)
    for (const auto& dof : locals[m].dofs) {
      bool drop;
      double sign;
      auto key = key_of(m, dof, locals[m], drop, sign);
      if (!drop) keys.emplace(key, -1);
    }
  int gid = 0;
  for (auto& [key, id] : keys) id = gid++;
  sp.dim = gid;
  sp.dof_info.resize(sp.dim);
  sp.dof_cells.resize(sp.dim);
  static const DofType type_of_rank[5] = {DofType::LagrangeNode,
                                          DofType::VertexValue,
                                          DofType::DivAtVertex,
                                          DofType::EdgeMoment,
                                          DofType::FacetFlux};
  for (const auto& [key, id] : keys)
    sp.dof_info[id] = {type_of_rank[key[0]], key[1], key[2]};

  // second pass: attach local fields
  for (int m = 0; m < ctx.n_cells(); ++m) {
    for (std::size_t j = 0; j < locals[m].dofs.size(); ++j) {
      bool drop;
      double sign;
      auto key = key_of(m, locals[m].dofs[j], locals[m], drop, sign);
      if (drop) continue;
      int id = keys.at(key);
      LocalField lf;
      lf.global_id = id;
      lf.field = sign == 1.0 ? locals[m].fields[j]
                             : pw_scale(locals[m].fields[j], sign);
      sp.dof_cells[id].push_back({m, int(sp.cell_basis[m].size())});
      sp.cell_basis[m].push_back(std::move(lf));
    }
  }
  return sp;
}

}  // namespace

FeSpace vr_space(const MeshContext& ctx) {
  return build_dof_space(ctx, SpaceKind::VelocityVR, "VhR", local_vr_basis,
                         std::max(2, ctx.dim()));
}

FeSpace vdiv_space(const MeshContext& ctx) {
  return build_dof_space(ctx, SpaceKind::VelocityVdiv, "Vhdiv",
                         local_vdiv_basis, std::max(2, ctx.dim()));
}

FeSpace cor68_space(const MeshContext& ctx) {
  return build_dof_space(ctx, SpaceKind::VelocityCor68, "P1+VS+VMF",
                         local_cor68_basis, std::max(2, ctx.dim()));
}

UnisolvenceReport check_unisolvence(const LambdaSystemD& geom,
                                    LocalSpaceKind kind) {
  UnisolvenceReport rep;
  Eigen::MatrixXd dmat;
  if (kind == LocalSpaceKind::VMF) {
    const int d = geom.d;
    std::vector<PiecewiseFieldD> raw;
    for (int i = 0; i <= d; ++i) raw.push_back(modify_bubble(geom, i).field);
    dmat.resize(d + 1, d + 1);
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) dmat(i, j) = facet_flux(raw[j], geom, i);
  } else {
    LocalDofBasis lb = kind == LocalSpaceKind::VR     ? local_vr_basis(geom)
                       : kind == LocalSpaceKind::Vdiv ? local_vdiv_basis(geom)
                                                      : local_cor68_basis(geom);
    dmat = lb.dof_matrix;
  }
  rep.n = static_cast<int>(dmat.rows());
  rep.dof_matrix = dmat;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dmat);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  ALFELD_REQUIRE(smin > 0, Err::SingularDofMatrix, "dof matrix singular");
  rep.condition = svd.singularValues()(0) / smin;

  // row then column equilibration before the scaled smallest singular value
  Eigen::MatrixXd eq = dmat;
  for (int i = 0; i < eq.rows(); ++i) {
    double n = eq.row(i).norm();
    if (n > 0) eq.row(i) /= n;
  }
  for (int j = 0; j < eq.cols(); ++j) {
    double n = eq.col(j).norm();
    if (n > 0) eq.col(j) /= n;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd2(eq);
  rep.smin_scaled = svd2.singularValues()(svd2.singularValues().size() - 1);
  return rep;
}

int span_rank(const std::vector<PiecewiseFieldD>& fields,
              const LambdaSystemD& geom, double tol) {
  const int n = static_cast<int>(fields.size());
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = l2_inner(fields[i], fields[j], geom);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  double top = es.eigenvalues().maxCoeff();
  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > tol * top) ++rank;
  return rank;
}

}  // namespace alfeld
