// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "alfeld/linalg.hpp"
#include "alfeld/spaces.hpp"

namespace alfeld {

/// Assembled operators of a velocity/pressure pair. B has the sign
/// convention B(q, v) = int q div v (rows pressure, columns velocity).
struct AssembledOperators {
  SparseMatrix A;   // grad:grad stiffness
  SparseMatrix Mu;  // full H1 Gram = A + velocity L2 mass
  SparseMatrix B;
  SparseMatrix Mp;  // pressure L2 mass
};

AssembledOperators assemble(const FeSpace& velocity, const FeSpace& pressure);

/// Stiffness and H1 Gram of a single space (used for rank checks).
void assemble_velocity_gram(const FeSpace& space, SparseMatrix& a,
                            SparseMatrix& mu);

/// Max over velocity basis fields of the relative L2 residual of div v
/// after projection onto the pressure space.
double divergence_image_check(const FeSpace& velocity,
                              const FeSpace& pressure);

/// Raises SingularDofMatrix when the direct-sum space is linearly
/// dependent. Runs the dense rank check for dim <= cap (the solver path
/// catches dependence beyond that scale).
void verify_direct_sum(const FeSpace& space, int dense_cap = 2500);

/// Load vector F_i = int f . v_i with the given quadrature degree.
DenseVector assemble_load(
    const FeSpace& velocity,
    const std::function<Eigen::VectorXd(const Point&)>& f, int quad_degree);

/// Restriction of a coefficient vector to one macro cell as a field.
PiecewiseFieldD combine_on_cell(const FeSpace& space, int cell,
                                const DenseVector& coef);

/// Global norms of a coefficient vector in a space.
double global_l2_norm(const FeSpace& space, const DenseVector& coef);
double global_h1_norm(const FeSpace& space, const DenseVector& coef);
double global_div_l2_norm(const FeSpace& space, const DenseVector& coef);

// --- pair catalog -----------------------------------------------------------

enum class PairKind {
  Cor52,          // P1c(T) + VMF  x  P0(T)
  Cor64,          // Pkc(Tr) + VMF x  P(k-1)(Tr), 1 <= k < d
  PkPk1Refined,   // Pkc(Tr)       x  P(k-1)(Tr)   (certified for k >= d)
  Cor68,          // P1(K)+VS+VMF  x  WhR
  VhR,            // VR space      x  WhR
  VmfP0,          // VMF           x  P0(T)
  MacroPkP0,      // Pkc(T)        x  P0(T)        (diagnostic / equivalence)
};

struct StokesPair {
  std::string name;
  FeSpace velocity;
  FeSpace pressure;
  bool certified_divergence_free = false;
};

StokesPair build_pair(const MeshContext& ctx, PairKind kind, int k = 1);

PairKind pair_kind_from_string(const std::string& name);
std::string pair_kind_name(PairKind kind);

}  // namespace alfeld
