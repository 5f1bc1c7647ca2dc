// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>

#include "alfeld/error.hpp"

namespace alfeld {

using DenseMatrix = Eigen::MatrixXd;
using DenseVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Throws unless ||M - M^T||_max <= tol.
void verify_symmetric(const SparseMatrix& m, double tol = 1e-12);

/// Cholesky solve; throws NotSPD when the factorization fails and
/// SolverFailure when the residual contract is violated.
DenseVector solve_spd(const SparseMatrix& m, const DenseVector& rhs);

/// Reusable SPD factorization for repeated solves.
class SpdSolver {
 public:
  explicit SpdSolver(const SparseMatrix& m);
  DenseVector solve(const DenseVector& rhs) const;
  DenseMatrix solve(const DenseMatrix& rhs) const;

 private:
  Eigen::SimplicialLLT<SparseMatrix> llt_;
};

/// Direct solve of a symmetric indefinite (saddle) system. Backed by a
/// sparse LU factorization; the symmetric-indefinite contract is enforced
/// through the symmetry check and the residual bound.
DenseVector solve_symmetric_indefinite(const SparseMatrix& m,
                                       const DenseVector& rhs);

/// Minimal-norm least squares (rank-revealing).
DenseVector least_squares(const DenseMatrix& m, const DenseVector& rhs);

struct EigenPairs {
  DenseVector values;   // ascending
  DenseMatrix vectors;  // columns
};

/// Generalized symmetric eigenproblem S x = lambda M x with M SPD.
/// Residuals of the smallest pairs are verified.
EigenPairs generalized_symmetric_eig(const DenseMatrix& stiff,
                                     const DenseMatrix& mass);

// Matrix Market coordinate format (real general).
void write_matrix_market(const SparseMatrix& m, const std::string& path);
SparseMatrix read_matrix_market(const std::string& path);

}  // namespace alfeld
