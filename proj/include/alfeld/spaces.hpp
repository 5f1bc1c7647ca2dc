// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "alfeld/bubbles.hpp"
#include "alfeld/mesh.hpp"
#include "alfeld/piecewise.hpp"

namespace alfeld {

/// Shared per-mesh data: the refined mesh, entity tables of the macro mesh
/// and one lambda system per macro cell. All spaces on the same context are
/// assembled against each other.
struct MeshContext {
  RefinedMesh refined;
  EntityTables entities;             // of the macro mesh
  std::vector<LambdaSystemD> geom;   // per macro cell

  int dim() const { return refined.dim(); }
  int n_cells() const { return refined.macro.n_cells(); }
  const MacroMesh& macro() const { return refined.macro; }
};

MeshContext make_context(const MacroMesh& mesh,
                         SplitRule rule = SplitRule::Barycenter);

enum class SpaceKind {
  LagrangeMacro,     // continuous P_k on the macro mesh
  LagrangeRefined,   // continuous P_k on the refined mesh
  DiscMacro,         // discontinuous P_k per macro cell
  DiscRefined,       // discontinuous P_k per child
  PressureWhR,       // continuous P_1 on the refined mesh, zero mean
  BubbleBR,          // face-bubble span, one dof per interior facet
  BubbleMF,          // modified face bubbles, one dof per interior facet
  SumSpace,          // direct sum of two spaces
  VelocityVR,        // the H1(div)-conforming quadratic space (reduced at d=2)
  VelocityVdiv,      // span{theta} + modified bubbles
  VelocityCor68,     // P1(K) + span{theta} + modified bubbles
};

enum class DofType {
  LagrangeNode,
  CellMono,
  BubbleFlux,    // one per interior macro facet
  VertexValue,   // (vertex, comp)
  DivAtVertex,   // (vertex)
  EdgeMoment,    // (edge, comp)
  FacetFlux,     // (facet)
};

struct DofInfo {
  DofType type = DofType::LagrangeNode;
  int entity = 0;
  int comp = 0;
};

struct LocalField {
  int global_id = 0;
  PiecewiseFieldD field;  // ncomp components
};

struct FeSpace {
  SpaceKind kind = SpaceKind::LagrangeRefined;
  std::string name;
  int k = 0;
  int ncomp = 1;
  int dim = 0;
  int max_degree = 0;
  // largest j with the continuous degree-j space on the refined mesh
  // contained in this space (0 when none); used by the bootstrap check
  int pkc_refined_k = 0;
  bool mean_constrained = false;
  bool zero_boundary = false;
  const MeshContext* ctx = nullptr;
  std::vector<std::vector<LocalField>> cell_basis;  // per macro cell
  std::vector<DofInfo> dof_info;                    // per global dof
  // per dof: the (cell, local index) pairs carrying it
  std::vector<std::vector<std::pair<int, int>>> dof_cells;

  /// Global dof id for an entity-based dof, or -1.
  int find_dof(DofType type, int entity, int comp = 0) const;
};

/// Continuous Lagrange space. `on_refined` selects the complex; vector
/// spaces replicate every node over d components.
FeSpace lagrange_space(const MeshContext& ctx, int k, bool on_refined,
                       bool zero_boundary, int ncomp);

/// Discontinuous polynomial space of degree k (pressure style, zero-mean
/// constraint applied at solve time).
FeSpace discontinuous_space(const MeshContext& ctx, int k, bool on_refined);

/// Continuous P1 pressure on the refined mesh with zero-mean constraint.
FeSpace whr_space(const MeshContext& ctx);

/// Span of the (modified) face bubbles, one dof per interior macro facet,
/// normalized to unit canonical flux.
FeSpace bubble_space(const MeshContext& ctx, bool modified);

/// Direct sum; linear independence is rank-checked at assembly scale by
/// verify_direct_sum (pairs.hpp).
FeSpace sum_spaces(const FeSpace& a, const FeSpace& b);

FeSpace vr_space(const MeshContext& ctx);     // d >= 3 full, d = 2 reduced
FeSpace vdiv_space(const MeshContext& ctx);
FeSpace cor68_space(const MeshContext& ctx);

/// Nodal Lagrange basis polynomials of degree k on a d-simplex, indexed by
/// the lattice rank (geometry independent, cached).
const std::vector<BaryPolyD>& lagrange_nodal_basis(int d, int k);

// --- local unisolvence ---------------------------------------------------

enum class LocalSpaceKind { VMF, VR, Vdiv, Cor68 };

struct UnisolvenceReport {
  int n = 0;                  // local dimension
  double condition = 0;       // of the dof/basis matrix
  double smin_scaled = 0;     // smallest singular value after equilibration
  Eigen::MatrixXd dof_matrix;
};

UnisolvenceReport check_unisolvence(const LambdaSystemD& geom,
                                    LocalSpaceKind kind);

/// Local basis of a dof-defined space together with its dof descriptors.
struct LocalDofBasis {
  struct LocalDof {
    DofType type;
    int entity;  // vertex/facet index, or edge index into `edges`
    int comp;
  };
  std::vector<PiecewiseFieldD> fields;  // biorthogonal to the dofs
  std::vector<LocalDof> dofs;
  std::vector<std::pair<int, int>> edges;  // local vertex pairs
  Eigen::MatrixXd dof_matrix;              // dofs x raw fields
};

LocalDofBasis local_vr_basis(const LambdaSystemD& geom);
LocalDofBasis local_vdiv_basis(const LambdaSystemD& geom);
LocalDofBasis local_cor68_basis(const LambdaSystemD& geom);

/// Rank of the span of a set of local fields (Gram eigenvalues above
/// tol * max). Used for the dimension-count verifications.
int span_rank(const std::vector<PiecewiseFieldD>& fields,
              const LambdaSystemD& geom, double tol = 1e-9);

}  // namespace alfeld
