// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#include "alfeld/linalg.hpp"

#include <Eigen/SparseLU>
#include <fstream>
#include <sstream>

namespace alfeld {

namespace {

double inf_norm(const SparseMatrix& m) {
  double n = 0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      n = std::max(n, std::abs(it.value()));
  return n;
}

void check_residual(const SparseMatrix& m, const DenseVector& x,
                    const DenseVector& rhs) {
  double res = (m * x - rhs).norm();
  double bound = 1e-10 * (inf_norm(m) * x.norm() + rhs.norm());
  ALFELD_REQUIRE(res <= std::max(bound, 1e-300), Err::SolverFailure,
                 "linear solve residual above contract");
}

}  // namespace

void verify_symmetric(const SparseMatrix& m, double tol) {
  SparseMatrix diff = SparseMatrix(m.transpose()) - m;
  ALFELD_REQUIRE(inf_norm(diff) <= tol * std::max(1.0, inf_norm(m)),
                 Err::InvalidArgument, "matrix is not symmetric");
}

SpdSolver::SpdSolver(const SparseMatrix& m) {
  llt_.compute(m);
  ALFELD_REQUIRE(llt_.info() == Eigen::Success, Err::NotSPD,
                 "Cholesky factorization failed");
}

DenseVector SpdSolver::solve(const DenseVector& rhs) const {
  return llt_.solve(rhs);
}

DenseMatrix SpdSolver::solve(const DenseMatrix& rhs) const {
  return llt_.solve(rhs);
}

DenseVector solve_spd(const SparseMatrix& m, const DenseVector& rhs) {
  SpdSolver solver(m);
  DenseVector x = solver.solve(rhs);
  check_residual(m, x, rhs);
  return x;
}

DenseVector solve_symmetric_indefinite(const SparseMatrix& m,
                                       const DenseVector& rhs) {
  verify_symmetric(m, 1e-10);
  Eigen::SparseLU<SparseMatrix> lu;
  lu.analyzePattern(m);
  lu.factorize(m);
  ALFELD_REQUIRE(lu.info() == Eigen::Success, Err::SingularToTolerance,
                 "saddle matrix factorization failed");
  DenseVector x = lu.solve(rhs);
  check_residual(m, x, rhs);
  return x;
}

DenseVector least_squares(const DenseMatrix& m, const DenseVector& rhs) {
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod(m);
  cod.setThreshold(1e-12);
  return cod.solve(rhs);
}

EigenPairs generalized_symmetric_eig(const DenseMatrix& stiff,
                                     const DenseMatrix& mass) {
  ALFELD_REQUIRE(stiff.rows() == stiff.cols() && mass.rows() == mass.cols() &&
                     stiff.rows() == mass.rows(),
                 Err::DimensionMismatch, "eigenproblem shapes disagree");
  Eigen::LLT<DenseMatrix> llt(mass);
  ALFELD_REQUIRE(llt.info() == Eigen::Success, Err::MassNotSPD,
                 "mass matrix is not SPD");
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(stiff, mass);
  ALFELD_REQUIRE(es.info() == Eigen::Success, Err::SolverFailure,
                 "generalized eigensolver failed");
  EigenPairs out;
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();

  // verify the pairs consumed downstream (the smallest ones)
  const int ncheck = std::min<int>(3, out.values.size());
  double scale = std::max(stiff.cwiseAbs().maxCoeff(),
                          mass.cwiseAbs().maxCoeff());
  for (int i = 0; i < ncheck; ++i) {
    DenseVector r =
        stiff * out.vectors.col(i) - out.values[i] * (mass * out.vectors.col(i));
    ALFELD_REQUIRE(r.norm() <= 1e-8 * std::max(scale, 1.0) *
                                   out.vectors.col(i).norm() *
                                   std::max(1.0, std::abs(out.values[i])),
                   Err::SolverFailure, "eigenpair residual above contract");
  }
  return out;
}

void write_matrix_market(const SparseMatrix& m, const std::string& path) {
  std::ofstream os(path);
  ALFELD_REQUIRE(os.good(), Err::IoError, "cannot open " + path);
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
  os.precision(17);
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      os << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream is(path);
  ALFELD_REQUIRE(is.good(), Err::IoError, "cannot open " + path);
  std::string line;
  std::getline(is, line);
  ALFELD_REQUIRE(line.rfind("%%MatrixMarket", 0) == 0, Err::IoError,
                 "not a Matrix Market file");
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '%') break;
  std::istringstream header(line);
  int rows = 0, cols = 0;
  long long nnz = 0;
  header >> rows >> cols >> nnz;
  std::vector<Eigen::Triplet<double>> trips;
  for (long long k = 0; k < nnz; ++k) {
    int i = 0, j = 0;
    double v = 0;
    is >> i >> j >> v;
    trips.emplace_back(i - 1, j - 1, v);
  }
  ALFELD_REQUIRE(!is.fail(), Err::IoError, "truncated Matrix Market file");
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace alfeld
