#include "secrelay/cmatrix.hpp"

#include <cmath>

#include "secrelay/kernels.hpp"

namespace secrelay {

namespace {
void check_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
}
}  // namespace

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  check_same_shape(*this, o, "operator+=");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  check_same_shape(*this, o, "operator-=");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
CMatrix operator*(CMatrix a, cplx s) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("operator*: inner dims mismatch");
  CMatrix c(a.rows(), b.cols());
  const size_t m = static_cast<size_t>(a.rows());
  for (int j = 0; j < b.cols(); ++j) {
    cplx* cj = c.col(j);
    for (int k = 0; k < a.cols(); ++k) {
      const cplx bkj = b(k, j);
      if (bkj != 0.0) kernels::zaxpy(bkj, a.col(k), cj, m);
    }
  }
  return c;
}

CMatrix adjoint(const CMatrix& a) {
  CMatrix r(a.cols(), a.rows());
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) r(j, i) = std::conj(a(i, j));
  return r;
}

CMatrix transpose(const CMatrix& a) {
  CMatrix r(a.cols(), a.rows());
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) r(j, i) = a(i, j);
  return r;
}

CMatrix conjugate(const CMatrix& a) {
  CMatrix r(a.rows(), a.cols());
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) r(i, j) = std::conj(a(i, j));
  return r;
}

cplx trace(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("trace: matrix not square");
  cplx t = 0.0;
  for (int i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

double frobenius_norm(const CMatrix& a) {
  const double* d = reinterpret_cast<const double*>(a.data());
  return std::sqrt(kernels::nrm2sq(d, 2 * static_cast<size_t>(a.rows()) * a.cols()));
}

double max_abs(const CMatrix& a) {
  double m = 0.0;
  const cplx* d = a.data();
  const size_t n = static_cast<size_t>(a.rows()) * a.cols();
  for (size_t i = 0; i < n; ++i) m = std::max(m, std::abs(d[i]));
  return m;
}

CMatrix hermitian_part(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_part: matrix not square");
  CMatrix r(a.rows(), a.cols());
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) r(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return r;
}

double hermitian_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return 1.0;
  double defect = 0.0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) {
      const cplx d = a(i, j) - std::conj(a(j, i));
      defect += std::norm(d);
    }
  return std::sqrt(defect) / std::max(1.0, frobenius_norm(a));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int ja = 0; ja < a.cols(); ++ja)
    for (int ia = 0; ia < a.rows(); ++ia) {
      const cplx v = a(ia, ja);
      if (v == 0.0) continue;
      for (int jb = 0; jb < b.cols(); ++jb) {
        cplx* dst = r.col(ja * b.cols() + jb) + static_cast<size_t>(ia) * b.rows();
        kernels::zaxpy(v, b.col(jb), dst, b.rows());
      }
    }
  return r;
}

CVec vec(const CMatrix& w) { return CVec(w.data(), w.data() + static_cast<size_t>(w.rows()) * w.cols()); }

CMatrix unvec(const CVec& w, int rows, int cols) {
  if (static_cast<size_t>(rows) * cols != w.size())
    throw std::invalid_argument("unvec: length does not match rows*cols");
  CMatrix r(rows, cols);
  std::copy(w.begin(), w.end(), r.data());
  return r;
}

CMatrix as_col(const CVec& v) { return unvec(v, static_cast<int>(v.size()), 1); }

CMatrix outer(const CVec& a, const CVec& b) {
  CMatrix r(static_cast<int>(a.size()), static_cast<int>(b.size()));
  for (size_t j = 0; j < b.size(); ++j) {
    const cplx bj = std::conj(b[j]);
    kernels::zaxpy(bj, a.data(), r.col(static_cast<int>(j)), a.size());
  }
  return r;
}

CVec matvec(const CMatrix& a, const CVec& x) {
  if (static_cast<size_t>(a.cols()) != x.size()) throw std::invalid_argument("matvec: dims mismatch");
  CVec y(a.rows(), 0.0);
  for (int k = 0; k < a.cols(); ++k)
    if (x[k] != 0.0) kernels::zaxpy(x[k], a.col(k), y.data(), y.size());
  return y;
}

CVec adjoint_matvec(const CMatrix& a, const CVec& x) {
  if (static_cast<size_t>(a.rows()) != x.size())
    throw std::invalid_argument("adjoint_matvec: dims mismatch");
  CVec y(a.cols());
  for (int j = 0; j < a.cols(); ++j) y[j] = kernels::zdotc(a.col(j), x.data(), x.size());
  return y;
}

cplx vdot(const CVec& x, const CVec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vdot: length mismatch");
  return kernels::zdotc(x.data(), y.data(), x.size());
}

double vnorm_sq(const CVec& x) {
  return kernels::nrm2sq(reinterpret_cast<const double*>(x.data()), 2 * x.size());
}

CVec vscale(cplx s, CVec x) {
  for (auto& v : x) v *= s;
  return x;
}

CVec vadd(CVec x, const CVec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vadd: length mismatch");
  for (size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  return x;
}

CVec vsub(CVec x, const CVec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vsub: length mismatch");
  for (size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
  return x;
}

HermitianMatrix::HermitianMatrix(const CMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("HermitianMatrix: not square");
  if (hermitian_defect(a) > rel_tol)
    throw std::invalid_argument("HermitianMatrix: input exceeds Hermitian tolerance");
  m_ = hermitian_part(a);
}

}  // namespace secrelay
