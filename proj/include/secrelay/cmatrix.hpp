#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace secrelay {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Dense complex matrix, column-major. Column-major storage makes vec() the
// identity on the underlying buffer (column-stacking order is used throughout
// the vectorization identities).
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("CMatrix: negative dimension");
  }

  static CMatrix identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static CMatrix zero(int rows, int cols) { return CMatrix(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  cplx& operator()(int i, int j) { return data_[static_cast<size_t>(j) * rows_ + i]; }
  const cplx& operator()(int i, int j) const { return data_[static_cast<size_t>(j) * rows_ + i]; }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  cplx* col(int j) { return data_.data() + static_cast<size_t>(j) * rows_; }
  const cplx* col(int j) const { return data_.data() + static_cast<size_t>(j) * rows_; }

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(CMatrix a, cplx s);

CMatrix adjoint(const CMatrix& a);
CMatrix transpose(const CMatrix& a);
CMatrix conjugate(const CMatrix& a);
cplx trace(const CMatrix& a);
double frobenius_norm(const CMatrix& a);
double max_abs(const CMatrix& a);

// (A + A^H) / 2
CMatrix hermitian_part(const CMatrix& a);
// Relative deviation from Hermitian symmetry: ||A - A^H||_F / max(1, ||A||_F).
double hermitian_defect(const CMatrix& a);

// Kronecker product, dims (m1*m2) x (n1*n2).
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Column-stacking vectorization and its inverse.
CVec vec(const CMatrix& w);
CMatrix unvec(const CVec& w, int rows, int cols);

// Vector helpers (CVec is a plain column of complex scalars).
CMatrix as_col(const CVec& v);
CMatrix outer(const CVec& a, const CVec& b);  // a b^H
CVec matvec(const CMatrix& a, const CVec& x);
CVec adjoint_matvec(const CMatrix& a, const CVec& x);  // A^H x
cplx vdot(const CVec& x, const CVec& y);               // x^H y
double vnorm_sq(const CVec& x);
CVec vscale(cplx s, CVec x);
CVec vadd(CVec x, const CVec& y);
CVec vsub(CVec x, const CVec& y);

// Checked wrapper for matrices contractually Hermitian; symmetrizes on
// construction and rejects inputs whose asymmetry exceeds the tolerance.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const CMatrix& a, double rel_tol = 1e-12);
  const CMatrix& matrix() const { return m_; }
  int dim() const { return m_.rows(); }

 private:
  CMatrix m_;
};

}  // namespace secrelay
