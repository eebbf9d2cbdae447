#include "secrelay/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "secrelay/kernels.hpp"

namespace secrelay {

RMatrix rmul(const RMatrix& a, const RMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("rmul: inner dims mismatch");
  RMatrix c(a.rows(), b.cols());
  const size_t m = static_cast<size_t>(a.rows());
  for (int j = 0; j < b.cols(); ++j) {
    double* cj = c.col(j);
    for (int k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj != 0.0) kernels::axpy(bkj, a.col(k), cj, m);
    }
  }
  return c;
}

RMatrix rtranspose(const RMatrix& a) {
  RMatrix r(a.cols(), a.rows());
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) r(j, i) = a(i, j);
  return r;
}

double rfrob(const RMatrix& a) {
  return std::sqrt(kernels::nrm2sq(a.data(), static_cast<size_t>(a.rows()) * a.cols()));
}

double rtrace_prod(const RMatrix& a, const RMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("rtrace_prod: dims mismatch");
  double t = 0.0;
  // tr(AB) = sum_ij A_ij B_ji; with B symmetric callers this is <A, B>.
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < a.rows(); ++i) t += a(i, j) * b(j, i);
  }
  return t;
}

namespace {

double offdiag_norm(const CMatrix& a) {
  double s = 0.0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

double offdiag_norm(const RMatrix& a) {
  double s = 0.0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

void sort_descending(std::vector<double>& vals, std::vector<int>& order) {
  order.resize(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int p, int q) { return vals[p] > vals[q]; });
}

}  // namespace

EigResult hermitian_eig(const CMatrix& input, double herm_tol) {
  if (input.rows() != input.cols()) throw std::invalid_argument("hermitian_eig: not square");
  if (hermitian_defect(input) > herm_tol)
    throw std::invalid_argument("hermitian_eig: input is not Hermitian");
  const int n = input.rows();
  CMatrix a = hermitian_part(input);
  CMatrix q = CMatrix::identity(n);

  const double scale = std::max(frobenius_norm(a), 1e-300);
  const double tol = 1e-15 * scale;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps && offdiag_norm(a) > tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int qq = p + 1; qq < n; ++qq) {
        const cplx apq = a(p, qq);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        const double app = a(p, p).real();
        const double aqq = a(qq, qq).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx u = apq / mag;
        const cplx ucon = std::conj(u);
        // Unitary V: V(p,p)=c, V(p,q)=s, V(q,p)=-s*conj(u), V(q,q)=c*conj(u)
        // Columns: A <- A V
        for (int i = 0; i < n; ++i) {
          const cplx aip = a(i, p);
          const cplx aiq = a(i, qq);
          a(i, p) = c * aip - s * ucon * aiq;
          a(i, qq) = s * aip + c * ucon * aiq;
        }
        // Rows: A <- V^H A
        for (int j = 0; j < n; ++j) {
          const cplx apj = a(p, j);
          const cplx aqj = a(qq, j);
          a(p, j) = c * apj - s * u * aqj;
          a(qq, j) = s * apj + c * u * aqj;
        }
        a(p, qq) = 0.0;
        a(qq, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(qq, qq) = a(qq, qq).real();
        for (int i = 0; i < n; ++i) {
          const cplx qip = q(i, p);
          const cplx qiq = q(i, qq);
          q(i, p) = c * qip - s * ucon * qiq;
          q(i, qq) = s * qip + c * ucon * qiq;
        }
      }
    }
  }

  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = a(i, i).real();
  std::vector<int> order;
  sort_descending(vals, order);

  EigResult r;
  r.values.resize(n);
  r.vectors = CMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    r.values[k] = vals[order[k]];
    for (int i = 0; i < n; ++i) r.vectors(i, k) = q(i, order[k]);
  }
  return r;
}

EigResult hermitian_eig(const HermitianMatrix& a) { return hermitian_eig(a.matrix(), 1e-10); }

REigResult sym_eig(const RMatrix& input) {
  if (input.rows() != input.cols()) throw std::invalid_argument("sym_eig: not square");
  const int n = input.rows();
  RMatrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = 0.5 * (input(i, j) + input(j, i));
  RMatrix q = RMatrix::identity(n);

  const double scale = std::max(rfrob(a), 1e-300);
  const double tol = 1e-15 * scale;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps && offdiag_norm(a) > tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int qq = p + 1; qq < n; ++qq) {
        const double apq = a(p, qq);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (a(qq, qq) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Columns, then rows; rot computes (x,y) <- (c x + s y, c y - s x),
        // matching V = [[c, s], [-s, c]] applied on the right.
        kernels::rot(a.col(p), a.col(qq), n, c, -s);
        for (int j = 0; j < n; ++j) {
          const double apj = a(p, j);
          const double aqj = a(qq, j);
          a(p, j) = c * apj - s * aqj;
          a(qq, j) = s * apj + c * aqj;
        }
        a(p, qq) = 0.0;
        a(qq, p) = 0.0;
        kernels::rot(q.col(p), q.col(qq), n, c, -s);
      }
    }
  }

  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = a(i, i);
  std::vector<int> order;
  sort_descending(vals, order);

  REigResult r;
  r.values.resize(n);
  r.vectors = RMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    r.values[k] = vals[order[k]];
    for (int i = 0; i < n; ++i) r.vectors(i, k) = q(i, order[k]);
  }
  return r;
}

std::vector<double> sym_eigvalues(const RMatrix& input) {
  if (input.rows() != input.cols()) throw std::invalid_argument("sym_eigvalues: not square");
  const int n = input.rows();
  RMatrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = 0.5 * (input(i, j) + input(j, i));

  const double scale = std::max(rfrob(a), 1e-300);
  const double tol = 1e-14 * scale;
  const int max_sweeps = 40;
  for (int sweep = 0; sweep < max_sweeps && offdiag_norm(a) > tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int qq = p + 1; qq < n; ++qq) {
        const double apq = a(p, qq);
        if (std::abs(apq) <= 1e-300) continue;
        const double tau = (a(qq, qq) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        kernels::rot(a.col(p), a.col(qq), n, c, -s);
        for (int j = 0; j < n; ++j) {
          const double apj = a(p, j);
          const double aqj = a(qq, j);
          a(p, j) = c * apj - s * aqj;
          a(qq, j) = s * apj + c * aqj;
        }
        a(p, qq) = 0.0;
        a(qq, p) = 0.0;
      }
    }
  }
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = a(i, i);
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  return vals;
}

double min_eigenvalue(const CMatrix& hermitian) { return hermitian_eig(hermitian).values.back(); }
double max_eigenvalue(const CMatrix& hermitian) { return hermitian_eig(hermitian).values.front(); }
double min_eigenvalue(const RMatrix& symmetric) { return sym_eigvalues(symmetric).back(); }

bool cholesky_in_place(RMatrix& a, double pivot_tol) {
  const int n = a.rows();
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
  const double floor = std::max(pivot_tol * max_diag, 1e-300);
  for (int k = 0; k < n; ++k) {
    double piv = a(k, k);
    if (piv < floor) return false;
    piv = std::sqrt(piv);
    a(k, k) = piv;
    if (k + 1 < n) kernels::scal(1.0 / piv, a.col(k) + k + 1, n - k - 1);
    for (int j = k + 1; j < n; ++j) {
      const double ljk = a(j, k);
      if (ljk != 0.0) kernels::axpy(-ljk, a.col(k) + j, a.col(j) + j, n - j);
    }
  }
  // zero strict upper triangle so the factor can be used as a plain matrix
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) a(i, j) = 0.0;
  return true;
}

void chol_solve_vec(const RMatrix& l, double* b) {
  const int n = l.rows();
  for (int k = 0; k < n; ++k) {
    b[k] /= l(k, k);
    if (k + 1 < n) kernels::axpy(-b[k], l.col(k) + k + 1, b + k + 1, n - k - 1);
  }
  for (int k = n - 1; k >= 0; --k) {
    double acc = b[k];
    if (k + 1 < n) acc -= kernels::dot(l.col(k) + k + 1, b + k + 1, n - k - 1);
    b[k] = acc / l(k, k);
  }
}

RMatrix chol_solve_mat(const RMatrix& l, const RMatrix& b) {
  RMatrix x = b;
  for (int j = 0; j < b.cols(); ++j) chol_solve_vec(l, x.col(j));
  return x;
}

RMatrix chol_inverse(const RMatrix& l) { return chol_solve_mat(l, RMatrix::identity(l.rows())); }

RMatrix complex_to_real_psd(const CMatrix& hermitian) {
  if (hermitian.rows() != hermitian.cols())
    throw std::invalid_argument("complex_to_real_psd: not square");
  const int n = hermitian.rows();
  RMatrix t(2 * n, 2 * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = hermitian(i, j).real();
      const double im = hermitian(i, j).imag();
      t(i, j) = re;
      t(n + i, n + j) = re;
      t(i, n + j) = -im;
      t(n + i, j) = im;
    }
  return t;
}

RankOneResult rank_one_factor(const CMatrix& x, double ratio_tol) {
  const EigResult eig = hermitian_eig(x);
  const int n = x.rows();
  const double lam1 = eig.values.front();
  const double lam_min = eig.values.back();
  const double scale = std::max(1.0, std::abs(lam1));
  if (lam_min < -1e-9 * scale)
    throw std::invalid_argument("rank_one_factor: input is not PSD within tolerance");

  RankOneResult r;
  if (lam1 <= 1e-14 * scale) {
    // Zero matrix: the zero vector is an exact factor.
    r.ok = true;
    r.factor.assign(n, 0.0);
    r.ratio = 0.0;
    return r;
  }
  const double lam2 = n > 1 ? std::max(eig.values[1], 0.0) : 0.0;
  r.ratio = lam2 / lam1;
  r.ok = r.ratio <= ratio_tol;
  r.factor.resize(n);
  const double s = std::sqrt(lam1);
  for (int i = 0; i < n; ++i) r.factor[i] = s * eig.vectors(i, 0);
  return r;
}

}  // namespace secrelay
