#pragma once

#include <optional>
#include <vector>

#include "secrelay/cmatrix.hpp"

namespace secrelay {

// Dense real matrix, column-major (realified PSD blocks, solver internals).
class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  static RMatrix identity(int n) {
    RMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<size_t>(j) * rows_ + i]; }
  const double& operator()(int i, int j) const { return data_[static_cast<size_t>(j) * rows_ + i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* col(int j) { return data_.data() + static_cast<size_t>(j) * rows_; }
  const double* col(int j) const { return data_.data() + static_cast<size_t>(j) * rows_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

RMatrix rmul(const RMatrix& a, const RMatrix& b);
RMatrix rtranspose(const RMatrix& a);
double rfrob(const RMatrix& a);
double rtrace_prod(const RMatrix& a, const RMatrix& b);  // tr(A B), both square

struct EigResult {
  std::vector<double> values;  // descending
  CMatrix vectors;             // unitary, columns match values
};

struct REigResult {
  std::vector<double> values;  // descending
  RMatrix vectors;
};

// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi. The input is
// symmetrized (A+A^H)/2 first; inputs with Hermitian defect above `herm_tol`
// are rejected.
EigResult hermitian_eig(const CMatrix& a, double herm_tol = 1e-10);
EigResult hermitian_eig(const HermitianMatrix& a);

REigResult sym_eig(const RMatrix& a);
// Values-only variant (descending); skips eigenvector accumulation.
std::vector<double> sym_eigvalues(const RMatrix& a);

double min_eigenvalue(const CMatrix& hermitian);
double max_eigenvalue(const CMatrix& hermitian);
double min_eigenvalue(const RMatrix& symmetric);

// In-place lower Cholesky of a symmetric positive definite matrix stored in
// `a` (upper triangle ignored). Returns false if a pivot falls below
// pivot_tol * max diagonal.
bool cholesky_in_place(RMatrix& a, double pivot_tol = 1e-14);
void chol_solve_vec(const RMatrix& l, double* b);           // solves L L^T x = b in place
RMatrix chol_solve_mat(const RMatrix& l, const RMatrix& b);  // columnwise solve
RMatrix chol_inverse(const RMatrix& l);

// Realification T(A) = [[Re A, -Im A], [Im A, Re A]]; A >= 0 iff T(A) >= 0,
// and every eigenvalue of A appears twice in T(A).
RMatrix complex_to_real_psd(const CMatrix& hermitian);

struct RankOneResult {
  bool ok = false;
  CVec factor;   // x with X ~= x x^H (sqrt(lambda1) * v1); empty on failure
  double ratio = 0.0;  // lambda2 / lambda1 diagnostic
};

// Rank-one decomposition of a PSD Hermitian matrix. Fails (ok=false) when the
// eigenvalue ratio exceeds ratio_tol, signalling an SDR rank failure that the
// caller must handle explicitly.
RankOneResult rank_one_factor(const CMatrix& x, double ratio_tol = 1e-6);

}  // namespace secrelay
