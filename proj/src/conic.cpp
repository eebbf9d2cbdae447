#include "secrelay/conic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "secrelay/kernels.hpp"

namespace secrelay::conic {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

LinExpr& LinExpr::add(VarHandle scalar_var, double coeff) {
  scalar_terms_.push_back({scalar_var, coeff});
  return *this;
}
LinExpr& LinExpr::add(VarHandle matrix_var, const CMatrix& coeff) {
  matrix_terms_.push_back({matrix_var, coeff});
  return *this;
}
LinExpr& LinExpr::add_constant(double c) {
  constant_ += c;
  return *this;
}

// ---------------------------------------------------------------------------
// Builder
// ---------------------------------------------------------------------------

int ConicProblem::param_count(const Var& v) {
  switch (v.kind) {
    case VarKind::FreeReal:
    case VarKind::NonnegReal:
      return 1;
    case VarKind::ComplexMatrix:
      return 2 * v.rows * v.cols;
    case VarKind::HermitianFree:
    case VarKind::HermitianPsd:
      return v.rows * v.rows;  // d diag + d(d-1)/2 * (re, im)
  }
  return 0;
}

// Basis order for Hermitian(d): for each column j, the diagonal (j,j), then
// for each i > j the (re, im) pair of entry (i,j). For ComplexMatrix the
// (re, im) pair of each entry in column-major order.
CMatrix ConicProblem::basis_element(const Var& v, int param) {
  if (v.kind == VarKind::ComplexMatrix) {
    const int entry = param / 2;
    const int i = entry % v.rows;
    const int j = entry / v.rows;
    CMatrix b(v.rows, v.cols);
    b(i, j) = (param % 2 == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
    return b;
  }
  // Hermitian kinds
  const int d = v.rows;
  int p = param;
  for (int j = 0; j < d; ++j) {
    if (p == 0) {
      CMatrix b(d, d);
      b(j, j) = 1.0;
      return b;
    }
    --p;
    const int below = d - 1 - j;
    if (p < 2 * below) {
      const int i = j + 1 + p / 2;
      CMatrix b(d, d);
      if (p % 2 == 0) {
        b(i, j) = 1.0;
        b(j, i) = 1.0;
      } else {
        b(i, j) = cplx(0.0, 1.0);
        b(j, i) = cplx(0.0, -1.0);
      }
      return b;
    }
    p -= 2 * below;
  }
  throw std::invalid_argument("basis_element: parameter index out of range");
}

CMatrix ConicProblem::assemble_matrix(const Var& v, const double* params) {
  if (v.kind == VarKind::ComplexMatrix) {
    CMatrix m(v.rows, v.cols);
    for (int e = 0; e < v.rows * v.cols; ++e)
      m.data()[e] = cplx(params[2 * e], params[2 * e + 1]);
    return m;
  }
  const int d = v.rows;
  CMatrix m(d, d);
  int p = 0;
  for (int j = 0; j < d; ++j) {
    m(j, j) = params[p++];
    for (int i = j + 1; i < d; ++i) {
      const double re = params[p++];
      const double im = params[p++];
      m(i, j) = cplx(re, im);
      m(j, i) = cplx(re, -im);
    }
  }
  return m;
}

void ConicProblem::project_params(const Var& v, const CMatrix& value, double* params) {
  if (v.kind == VarKind::ComplexMatrix) {
    for (int e = 0; e < v.rows * v.cols; ++e) {
      params[2 * e] = value.data()[e].real();
      params[2 * e + 1] = value.data()[e].imag();
    }
    return;
  }
  const int d = v.rows;
  int p = 0;
  for (int j = 0; j < d; ++j) {
    params[p++] = value(j, j).real();
    for (int i = j + 1; i < d; ++i) {
      params[p++] = value(i, j).real();
      params[p++] = value(i, j).imag();
    }
  }
}

VarHandle ConicProblem::add_free_real(const std::string& name) {
  Var v{name, VarKind::FreeReal, 1, 1, total_params_, 1};
  vars_.push_back(v);
  total_params_ += 1;
  return {static_cast<int>(vars_.size()) - 1};
}

VarHandle ConicProblem::add_nonneg_real(const std::string& name) {
  Var v{name, VarKind::NonnegReal, 1, 1, total_params_, 1};
  vars_.push_back(v);
  total_params_ += 1;
  return {static_cast<int>(vars_.size()) - 1};
}

VarHandle ConicProblem::add_complex_matrix(const std::string& name, int rows, int cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("add_complex_matrix: bad dims");
  Var v{name, VarKind::ComplexMatrix, rows, cols, total_params_, 2 * rows * cols};
  vars_.push_back(v);
  total_params_ += v.count;
  return {static_cast<int>(vars_.size()) - 1};
}

VarHandle ConicProblem::add_hermitian(const std::string& name, int dim, bool psd) {
  if (dim <= 0) throw std::invalid_argument("add_hermitian: bad dim");
  Var v{name, psd ? VarKind::HermitianPsd : VarKind::HermitianFree, dim, dim, total_params_,
        dim * dim};
  vars_.push_back(v);
  total_params_ += v.count;
  return {static_cast<int>(vars_.size()) - 1};
}

void ConicProblem::set_objective(const LinExpr& expr) { objective_ = expr; }

LmiHandle ConicProblem::add_lmi(const std::string& label, int dim) {
  Lmi l;
  l.label = label;
  l.dim = dim;
  l.constant = CMatrix(dim, dim);
  lmis_.push_back(std::move(l));
  return {static_cast<int>(lmis_.size()) - 1};
}

void ConicProblem::lmi_add_const(LmiHandle lmi, const CMatrix& c) {
  Lmi& l = lmis_.at(lmi.id);
  if (c.rows() != l.dim || c.cols() != l.dim)
    throw std::invalid_argument("lmi_add_const: dimension mismatch");
  if (hermitian_defect(c) > 1e-9)
    throw std::invalid_argument("lmi_add_const: constant must be Hermitian");
  l.constant += hermitian_part(c);
}

void ConicProblem::lmi_add_scalar_term(LmiHandle lmi, VarHandle var, const CMatrix& coeff) {
  Lmi& l = lmis_.at(lmi.id);
  const Var& v = vars_.at(var.id);
  if (v.count != 1) throw std::invalid_argument("lmi_add_scalar_term: variable is not scalar");
  if (coeff.rows() != l.dim || coeff.cols() != l.dim)
    throw std::invalid_argument("lmi_add_scalar_term: dimension mismatch");
  if (hermitian_defect(coeff) > 1e-9)
    throw std::invalid_argument("lmi_add_scalar_term: coefficient must be Hermitian");
  LmiTerm t;
  t.var_id = var.id;
  t.coeffs.push_back(hermitian_part(coeff));
  l.terms.push_back(std::move(t));
}

void ConicProblem::lmi_add_matrix_term(LmiHandle lmi, VarHandle var,
                                       const std::function<CMatrix(const CMatrix&)>& map) {
  Lmi& l = lmis_.at(lmi.id);
  const Var& v = vars_.at(var.id);
  if (v.count == 1) throw std::invalid_argument("lmi_add_matrix_term: variable is scalar");
  LmiTerm t;
  t.var_id = var.id;
  t.coeffs.reserve(v.count);
  for (int p = 0; p < v.count; ++p) {
    CMatrix img = map(basis_element(v, p));
    if (img.rows() != l.dim || img.cols() != l.dim)
      throw std::invalid_argument("lmi_add_matrix_term: map image has wrong dimension");
    if (hermitian_defect(img) > 1e-9)
      throw std::invalid_argument("lmi_add_matrix_term: map image is not Hermitian");
    t.coeffs.push_back(hermitian_part(img));
  }
  l.terms.push_back(std::move(t));
}

void ConicProblem::add_ineq_ge0(const std::string& label, const LinExpr& expr) {
  ineqs_.push_back({label, expr});
}

void ConicProblem::add_eq0(const std::string& label, const LinExpr& expr) {
  eqs_.push_back({label, expr});
}

std::vector<double> ConicProblem::lin_expr_row(const LinExpr& e, double* constant) const {
  std::vector<double> row(total_params_, 0.0);
  for (const auto& t : e.scalar_terms_) {
    const Var& v = vars_.at(t.var.id);
    if (v.count != 1) throw std::invalid_argument("LinExpr: scalar term on matrix variable");
    row[v.offset] += t.coeff;
  }
  for (const auto& t : e.matrix_terms_) {
    const Var& v = vars_.at(t.var.id);
    if (t.coeff.rows() != v.rows || t.coeff.cols() != v.cols)
      throw std::invalid_argument("LinExpr: matrix coefficient shape mismatch");
    for (int p = 0; p < v.count; ++p) {
      const CMatrix b = basis_element(v, p);
      // <C, B> = Re tr(C^H B)
      double val = 0.0;
      for (int j = 0; j < b.cols(); ++j)
        for (int i = 0; i < b.rows(); ++i)
          val += (std::conj(t.coeff(i, j)) * b(i, j)).real();
      row[v.offset + p] += val;
    }
  }
  if (constant) *constant = e.constant_;
  return row;
}

double ConicProblem::eval_lin_expr(const LinExpr& e, const std::vector<double>& scalar_values,
                                   const std::vector<CMatrix>& matrix_values) const {
  double val = e.constant_;
  for (const auto& t : e.scalar_terms_) val += t.coeff * scalar_values.at(t.var.id);
  for (const auto& t : e.matrix_terms_) {
    const CMatrix& m = matrix_values.at(t.var.id);
    for (int j = 0; j < m.cols(); ++j)
      for (int i = 0; i < m.rows(); ++i) val += (std::conj(t.coeff(i, j)) * m(i, j)).real();
  }
  return val;
}

CMatrix ConicProblem::eval_lmi(const Lmi& l, const std::vector<double>& x) const {
  CMatrix m = l.constant;
  for (const auto& t : l.terms) {
    const Var& v = vars_.at(t.var_id);
    for (int p = 0; p < v.count; ++p) {
      const double xi = x[v.offset + p];
      if (xi != 0.0) {
        CMatrix add = t.coeffs[p];
        add *= xi;
        m += add;
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Interior-point solver
// ---------------------------------------------------------------------------

namespace {

// One realified PSD block of the standardized problem S_b(x) = C_b + sum A_bi x_i.
struct Block {
  std::string label;
  int n = 0;          // real dimension
  int cdim = 0;       // complex dimension when realified, 0 for native real
  RMatrix constant;

  struct Coeff {
    int param = 0;
    std::vector<int> r, c;
    std::vector<double> v;
    RMatrix dense;
    bool use_dense = false;
  };
  std::vector<Coeff> coeffs;

  // iterate state
  RMatrix S, Phi;
  // per-iteration scratch
  RMatrix chol, Sinv;
  std::vector<RMatrix> B;  // Phi * A_i * Sinv per active coefficient
  RMatrix Sx, P;           // S_b(x) and primal residual
  RMatrix dS, dPhi, dS_aff, dPhi_aff, Rc, K, G;
  double cnorm = 0.0;
};

void add_coeff_entry(Block::Coeff& c, int i, int j, double v) {
  if (v == 0.0) return;
  c.r.push_back(i);
  c.c.push_back(j);
  c.v.push_back(v);
}

// Realify Hermitian coefficient into triplets: [[Re, -Im], [Im, Re]].
Block::Coeff realify_coeff(int param, const CMatrix& a, bool as_real) {
  Block::Coeff c;
  c.param = param;
  const int d = a.rows();
  if (as_real) {
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) add_coeff_entry(c, i, j, a(i, j).real());
    return c;
  }
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      const double re = a(i, j).real();
      const double im = a(i, j).imag();
      add_coeff_entry(c, i, j, re);
      add_coeff_entry(c, d + i, d + j, re);
      add_coeff_entry(c, i, d + j, -im);
      add_coeff_entry(c, d + i, j, im);
    }
  return c;
}

bool matrix_is_real(const CMatrix& a) {
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      if (a(i, j).imag() != 0.0) return false;
  return true;
}

RMatrix realify_const(const CMatrix& a, bool as_real) {
  const int d = a.rows();
  if (as_real) {
    RMatrix r(d, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) r(i, j) = a(i, j).real();
    return r;
  }
  return complex_to_real_psd(a);
}

void finalize_coeff(Block::Coeff& c, int n) {
  c.use_dense = static_cast<int>(c.v.size()) >= n;
  if (c.use_dense) {
    c.dense = RMatrix(n, n);
    for (size_t k = 0; k < c.v.size(); ++k) c.dense(c.r[k], c.c[k]) += c.v[k];
  }
}

double coeff_dot(const Block::Coeff& c, const RMatrix& m) {
  if (c.use_dense)
    return kernels::dot(c.dense.data(), m.data(), static_cast<size_t>(m.rows()) * m.cols());
  double s = 0.0;
  for (size_t k = 0; k < c.v.size(); ++k) s += c.v[k] * m(c.r[k], c.c[k]);
  return s;
}

void coeff_axpy(const Block::Coeff& c, double a, RMatrix& m) {
  if (a == 0.0) return;
  if (c.use_dense) {
    kernels::axpy(a, c.dense.data(), m.data(), static_cast<size_t>(m.rows()) * m.cols());
    return;
  }
  for (size_t k = 0; k < c.v.size(); ++k) m(c.r[k], c.c[k]) += a * c.v[k];
}

void symmetrize(RMatrix& m) {
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < j; ++i) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
}

// Largest step alpha in [0, 1] with M + alpha*D staying PD (with margin).
double max_step(const RMatrix& m_chol, const RMatrix& d, RMatrix& scratch) {
  const int n = d.rows();
  // scratch = L^{-1} D L^{-T}
  scratch = d;
  // forward solve on columns: L X = D
  for (int j = 0; j < n; ++j) {
    double* col = scratch.col(j);
    for (int k = 0; k < n; ++k) {
      col[k] /= m_chol(k, k);
      if (k + 1 < n) kernels::axpy(-col[k], m_chol.col(k) + k + 1, col + k + 1, n - k - 1);
    }
  }
  // now rows: X L^T = Y  => columns of X^T; use symmetry-free explicit solve
  // Y = scratch * L^{-T}: solve column by column against L from the right.
  for (int i = 0; i < n; ++i) {
    // row i of scratch: solve z L^T = row  <=> L z^T = row^T
    // process sequentially using strided access
    for (int k = 0; k < n; ++k) {
      double v = scratch(i, k) / m_chol(k, k);
      scratch(i, k) = v;
      for (int j = k + 1; j < n; ++j) scratch(i, j) -= v * m_chol(j, k);
    }
  }
  const double lam_min = sym_eigvalues(scratch).back();
  if (lam_min >= -1e-14) return 1e100;
  return 1.0 / (-lam_min);
}

struct Standardized {
  std::vector<Block> blocks;
  std::vector<double> c;  // objective
  double obj_const = 0.0;
  RMatrix E;              // equality rows (e x m)
  std::vector<double> a;  // rhs
  int m = 0;
  int e = 0;
};

}  // namespace

ConicSolution ConicProblem::solve(const SolverOptions& opts) const {
  Standardized sp;
  sp.m = total_params_;
  sp.c = lin_expr_row(objective_, &sp.obj_const);

  // User LMIs
  for (const auto& l : lmis_) {
    bool real = matrix_is_real(l.constant);
    if (real)
      for (const auto& t : l.terms)
        for (const auto& cm : t.coeffs)
          if (!matrix_is_real(cm)) {
            real = false;
            break;
          }
    Block b;
    b.label = l.label;
    b.cdim = real ? 0 : l.dim;
    b.n = real ? l.dim : 2 * l.dim;
    b.constant = realify_const(l.constant, real);
    for (const auto& t : l.terms) {
      const Var& v = vars_.at(t.var_id);
      for (int p = 0; p < v.count; ++p) {
        Block::Coeff c = realify_coeff(v.offset + p, t.coeffs[p], real);
        if (!c.v.empty()) {
          finalize_coeff(c, b.n);
          b.coeffs.push_back(std::move(c));
        }
      }
    }
    sp.blocks.push_back(std::move(b));
  }

  // Sign blocks for nonnegative scalars, PSD blocks for HermitianPsd vars.
  for (const auto& v : vars_) {
    if (v.kind == VarKind::NonnegReal) {
      Block b;
      b.label = "nonneg:" + v.name;
      b.n = 1;
      b.cdim = 0;
      b.constant = RMatrix(1, 1);
      Block::Coeff c;
      c.param = v.offset;
      add_coeff_entry(c, 0, 0, 1.0);
      finalize_coeff(c, 1);
      b.coeffs.push_back(std::move(c));
      sp.blocks.push_back(std::move(b));
    } else if (v.kind == VarKind::HermitianPsd) {
      Block b;
      b.label = "psd:" + v.name;
      b.cdim = v.rows;
      b.n = 2 * v.rows;
      b.constant = RMatrix(b.n, b.n);
      for (int p = 0; p < v.count; ++p) {
        Block::Coeff c = realify_coeff(v.offset + p, basis_element(v, p), false);
        finalize_coeff(c, b.n);
        b.coeffs.push_back(std::move(c));
      }
      sp.blocks.push_back(std::move(b));
    }
  }

  // Scalar inequalities as 1x1 blocks.
  for (const auto& con : ineqs_) {
    double k = 0.0;
    const std::vector<double> row = lin_expr_row(con.expr, &k);
    Block b;
    b.label = con.label;
    b.n = 1;
    b.cdim = 0;
    b.constant = RMatrix(1, 1);
    b.constant(0, 0) = k;
    for (int i = 0; i < sp.m; ++i)
      if (row[i] != 0.0) {
        Block::Coeff c;
        c.param = i;
        add_coeff_entry(c, 0, 0, row[i]);
        finalize_coeff(c, 1);
        b.coeffs.push_back(std::move(c));
      }
    sp.blocks.push_back(std::move(b));
  }

  // Equalities
  sp.e = static_cast<int>(eqs_.size());
  sp.E = RMatrix(sp.e, sp.m);
  sp.a.assign(sp.e, 0.0);
  for (int r = 0; r < sp.e; ++r) {
    double k = 0.0;
    const std::vector<double> row = lin_expr_row(eqs_[r].expr, &k);
    for (int i = 0; i < sp.m; ++i) sp.E(r, i) = row[i];
    sp.a[r] = -k;  // expr = row.x + k == 0  =>  row.x = -k
  }

  const int m = sp.m;
  const int e = sp.e;
  double c_scale = 1.0;
  for (double v : sp.c) c_scale = std::max(c_scale, std::abs(v));

  // Iterates
  std::vector<double> x(m, 0.0), nu(e, 0.0);
  int ntot = 0;
  for (auto& b : sp.blocks) {
    b.cnorm = rfrob(b.constant);
    const double s0 = 1.0 + b.cnorm;
    b.S = RMatrix(b.n, b.n);
    b.Phi = RMatrix(b.n, b.n);
    for (int i = 0; i < b.n; ++i) {
      b.S(i, i) = s0;
      b.Phi(i, i) = 1.0 + c_scale;
    }
    ntot += b.n;
  }

  ConicSolution sol;
  sol.scalar_values.assign(vars_.size(), 0.0);
  sol.matrix_values.assign(vars_.size(), CMatrix());

  auto finish = [&](SolveStatus st, int iters) {
    sol.status = st;
    sol.iterations = iters;
    // export primal values
    for (size_t vi = 0; vi < vars_.size(); ++vi) {
      const Var& v = vars_[vi];
      if (v.count == 1)
        sol.scalar_values[vi] = x[v.offset];
      else
        sol.matrix_values[vi] = assemble_matrix(v, x.data() + v.offset);
    }
    // export duals (complex-domain KKT scale)
    for (const auto& b : sp.blocks) {
      if (b.label.empty()) continue;
      CMatrix phi;
      if (b.cdim == 0) {
        phi = CMatrix(b.n, b.n);
        for (int j = 0; j < b.n; ++j)
          for (int i = 0; i < b.n; ++i) phi(i, j) = 0.5 * (b.Phi(i, j) + b.Phi(j, i));
      } else {
        const int d = b.cdim;
        phi = CMatrix(d, d);
        for (int j = 0; j < d; ++j)
          for (int i = 0; i < d; ++i) {
            const double u =
                0.5 * (b.Phi(i, j) + b.Phi(j, i) + b.Phi(d + i, d + j) + b.Phi(d + j, d + i));
            const double w =
                0.5 * (b.Phi(d + i, j) + b.Phi(j, d + i) - b.Phi(i, d + j) - b.Phi(d + j, i));
            phi(i, j) = cplx(u, w);
          }
        phi = hermitian_part(phi);
      }
      sol.dual_matrices[b.label] = std::move(phi);
    }
    return sol;
  };

  // Scratch shared across iterations
  RMatrix H(m, m), Hfac;
  std::vector<double> rd(m), rhs(m), dx(m), dnu(e), rp_eq(e);
  std::vector<double> rhs_aff(m), dx_aff(m), dnu_aff(e);
  double mu0 = 0.0;

  for (auto& b : sp.blocks) {
    b.Sx = RMatrix(b.n, b.n);
    b.P = RMatrix(b.n, b.n);
    b.dS = RMatrix(b.n, b.n);
    b.dPhi = RMatrix(b.n, b.n);
    b.Rc = RMatrix(b.n, b.n);
  }

  int iter = 0;
  for (; iter <= opts.max_iter; ++iter) {
    // Residuals
    for (auto& b : sp.blocks) {
      b.Sx = b.constant;
      for (const auto& cf : b.coeffs) coeff_axpy(cf, x[cf.param], b.Sx);
      b.P = b.Sx;
      kernels::axpy(-1.0, b.S.data(), b.P.data(), static_cast<size_t>(b.n) * b.n);
    }
    for (int i = 0; i < m; ++i) rd[i] = sp.c[i];
    for (auto& b : sp.blocks)
      for (const auto& cf : b.coeffs) rd[cf.param] -= coeff_dot(cf, b.Phi);
    for (int r = 0; r < e; ++r)
      if (nu[r] != 0.0)
        for (int i = 0; i < m; ++i) rd[i] -= sp.E(r, i) * nu[r];
    for (int r = 0; r < e; ++r) {
      double ax = 0.0;
      for (int i = 0; i < m; ++i) ax += sp.E(r, i) * x[i];
      rp_eq[r] = sp.a[r] - ax;
    }

    double gap_inner = 0.0;
    for (auto& b : sp.blocks) gap_inner += rtrace_prod(b.S, b.Phi);
    const double mu = gap_inner / std::max(1, ntot);
    if (iter == 0) mu0 = mu;

    double p_obj = sp.obj_const, d_obj = sp.obj_const;
    p_obj += kernels::dot(sp.c.data(), x.data(), m);
    for (auto& b : sp.blocks) d_obj -= rtrace_prod(b.Phi, b.constant);
    for (int r = 0; r < e; ++r) d_obj += nu[r] * sp.a[r];

    const double rel_gap = std::abs(p_obj - d_obj) / (1.0 + std::abs(p_obj) + std::abs(d_obj));
    double prim_inf = 0.0;
    for (auto& b : sp.blocks) prim_inf = std::max(prim_inf, rfrob(b.P) / (1.0 + b.cnorm));
    for (int r = 0; r < e; ++r)
      prim_inf = std::max(prim_inf, std::abs(rp_eq[r]) / (1.0 + std::abs(sp.a[r])));
    double dual_inf = 0.0;
    for (int i = 0; i < m; ++i) dual_inf = std::max(dual_inf, std::abs(rd[i]) / c_scale);

    sol.objective = p_obj;
    sol.dual_objective = d_obj;
    sol.duality_gap = rel_gap;
    sol.primal_infeas = prim_inf;
    sol.dual_infeas = dual_inf;
    sol.complementarity = 0.0;
    for (auto& b : sp.blocks) {
      const double denom = 1.0 + rfrob(b.Phi) * rfrob(b.Sx);
      sol.complementarity = std::max(sol.complementarity, std::abs(rtrace_prod(b.Phi, b.Sx)) / denom);
    }

    if (opts.verbose) {
      std::fprintf(stderr, "ipm %3d  pobj %+.6e dobj %+.6e gap %.2e pinf %.2e dinf %.2e mu %.2e\n",
                   iter, p_obj, d_obj, rel_gap, prim_inf, dual_inf, mu);
    }

    if (rel_gap <= opts.gap_tol && prim_inf <= opts.feas_tol && dual_inf <= opts.feas_tol)
      return finish(SolveStatus::Optimal, iter);
    if (iter == opts.max_iter) return finish(SolveStatus::MaxIter, iter);
    if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
      return finish(SolveStatus::MaxIter, iter);

    // Crude divergence certificates (desk-scale heuristics).
    double phinorm = 0.0, xnorm = 0.0;
    for (auto& b : sp.blocks) phinorm = std::max(phinorm, rfrob(b.Phi));
    for (int i = 0; i < m; ++i) xnorm = std::max(xnorm, std::abs(x[i]));
    if (phinorm > 1e12 && prim_inf > 1e3 * opts.feas_tol && mu < 1e-8 * std::max(mu0, 1.0))
      return finish(SolveStatus::Infeasible, iter);
    if ((xnorm > 1e11 || p_obj < -1e13) && dual_inf > 1e3 * opts.feas_tol)
      return finish(SolveStatus::Unbounded, iter);
    if (xnorm > 1e13 || phinorm > 1e14) return finish(SolveStatus::NumericalFailure, iter);

    // Factorizations of S and the Schur complement.
    bool chol_ok = true;
    for (auto& b : sp.blocks) {
      b.chol = b.S;
      if (!cholesky_in_place(b.chol)) {
        chol_ok = false;
        break;
      }
      b.Sinv = chol_inverse(b.chol);
      symmetrize(b.Sinv);
    }
    if (!chol_ok) return finish(SolveStatus::NumericalFailure, iter);

    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) H(i, j) = 0.0;
    for (auto& b : sp.blocks) {
      const int na = static_cast<int>(b.coeffs.size());
      b.B.assign(na, RMatrix());
      for (int ia = 0; ia < na; ++ia) {
        const auto& cf = b.coeffs[ia];
        RMatrix& Bi = b.B[ia];
        if (cf.use_dense) {
          Bi = rmul(b.Phi, rmul(cf.dense, b.Sinv));
        } else {
          Bi = RMatrix(b.n, b.n);
          for (size_t k = 0; k < cf.v.size(); ++k) {
            const int rr = cf.r[k];
            const int cc = cf.c[k];
            const double vv = cf.v[k];
            for (int j = 0; j < b.n; ++j) {
              const double s = vv * b.Sinv(cc, j);
              if (s != 0.0) kernels::axpy(s, b.Phi.col(rr), Bi.col(j), b.n);
            }
          }
        }
      }
      for (int ia = 0; ia < na; ++ia) {
        const int gi = b.coeffs[ia].param;
        for (int ja = 0; ja <= ia; ++ja) {
          const int gj = b.coeffs[ja].param;
          const double hij = coeff_dot(b.coeffs[ja], b.B[ia]);
          if (gi >= gj)
            H(gi, gj) += hij;
          else
            H(gj, gi) += hij;
        }
      }
    }
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < j; ++i) H(i, j) = H(j, i);

    double hmax = 0.0;
    for (int i = 0; i < m; ++i) hmax = std::max(hmax, H(i, i));
    double ridge = 1e-13 * std::max(hmax, 1.0);
    Hfac = H;
    for (int i = 0; i < m; ++i) Hfac(i, i) += ridge;
    int tries = 0;
    while (!cholesky_in_place(Hfac) && tries < 8) {
      ridge *= 100.0;
      Hfac = H;
      for (int i = 0; i < m; ++i) Hfac(i, i) += ridge;
      ++tries;
    }
    if (tries >= 8) return finish(SolveStatus::NumericalFailure, iter);

    // Equality elimination: (E H^-1 E^T) dnu = E H^-1 rhs - rp_eq
    RMatrix Y, M_eq, Mfac;
    if (e > 0) {
      RMatrix Et(m, e);
      for (int r = 0; r < e; ++r)
        for (int i = 0; i < m; ++i) Et(i, r) = sp.E(r, i);
      Y = chol_solve_mat(Hfac, Et);
      M_eq = RMatrix(e, e);
      for (int r = 0; r < e; ++r)
        for (int s2 = 0; s2 < e; ++s2) {
          double acc = 0.0;
          for (int i = 0; i < m; ++i) acc += sp.E(r, i) * Y(i, s2);
          M_eq(r, s2) = acc;
        }
      Mfac = M_eq;
      for (int r = 0; r < e; ++r) Mfac(r, r) += 1e-13 * std::max(1.0, M_eq(r, r));
      if (!cholesky_in_place(Mfac)) return finish(SolveStatus::NumericalFailure, iter);
    }

    auto newton_once = [&](const std::vector<double>& r1, const std::vector<double>& r2,
                           std::vector<double>& dx_out, std::vector<double>& dnu_out) {
      // Solves  H dx - E^T dnu = r1,  E dx = r2  by block elimination.
      dx_out = r1;
      chol_solve_vec(Hfac, dx_out.data());
      dnu_out.assign(e, 0.0);
      if (e > 0) {
        std::vector<double> t(e);
        for (int r = 0; r < e; ++r) {
          double acc = -r2[r];
          for (int i = 0; i < m; ++i) acc += sp.E(r, i) * dx_out[i];
          t[r] = acc;  // = E H^-1 r1 - r2 = -dnu
        }
        chol_solve_vec(Mfac, t.data());
        for (int r = 0; r < e; ++r) dnu_out[r] = -t[r];
        std::vector<double> t2(m, 0.0);
        for (int r = 0; r < e; ++r)
          for (int i = 0; i < m; ++i) t2[i] += sp.E(r, i) * t[r];
        chol_solve_vec(Hfac, t2.data());
        for (int i = 0; i < m; ++i) dx_out[i] -= t2[i];
      }
    };

    auto newton_solve = [&](std::vector<double>& rhs_io, std::vector<double>& dx_out,
                            std::vector<double>& dnu_out) {
      newton_once(rhs_io, rp_eq, dx_out, dnu_out);
      // two rounds of iterative refinement against the un-ridged system
      std::vector<double> res1(m), res2(e), cx(m), cnu(e);
      for (int round = 0; round < 2; ++round) {
        for (int i = 0; i < m; ++i) {
          double acc = rhs_io[i] - kernels::dot(H.col(i), dx_out.data(), m);
          for (int r = 0; r < e; ++r) acc += sp.E(r, i) * dnu_out[r];
          res1[i] = acc;
        }
        for (int r = 0; r < e; ++r) {
          double acc = rp_eq[r];
          for (int i = 0; i < m; ++i) acc -= sp.E(r, i) * dx_out[i];
          res2[r] = acc;
        }
        newton_once(res1, res2, cx, cnu);
        for (int i = 0; i < m; ++i) dx_out[i] += cx[i];
        for (int r = 0; r < e; ++r) dnu_out[r] += cnu[r];
      }
    };

    // The x-part of the Newton system is  H dx - E^T dnu = r1  with
    // r1_i = -rd_i + sum_b tr(S^-1 A_i (Rc - Phi P)).
    auto build_rhs = [&](std::vector<double>& out) {
      out.assign(m, 0.0);
      kernels::axpy(-1.0, rd.data(), out.data(), m);
      for (auto& b : sp.blocks) {
        b.K = b.Rc;
        const RMatrix pp = rmul(b.Phi, b.P);
        kernels::axpy(-1.0, pp.data(), b.K.data(), static_cast<size_t>(b.n) * b.n);
        b.G = rmul(b.Sinv, rtranspose(b.K));
        for (const auto& cf : b.coeffs) out[cf.param] += coeff_dot(cf, b.G);
      }
    };

    auto compute_deltas = [&](const std::vector<double>& dxv) {
      for (auto& b : sp.blocks) {
        b.dS = b.P;
        for (const auto& cf : b.coeffs) coeff_axpy(cf, dxv[cf.param], b.dS);
        // dPhi = (Rc - Phi dS) Sinv, symmetrized
        RMatrix t = b.Rc;
        const RMatrix pds = rmul(b.Phi, b.dS);
        kernels::axpy(-1.0, pds.data(), t.data(), static_cast<size_t>(b.n) * b.n);
        b.dPhi = rmul(t, b.Sinv);
        symmetrize(b.dPhi);
      }
    };

    // Predictor (affine scaling): Rc = -Phi S
    for (auto& b : sp.blocks) {
      b.Rc = rmul(b.Phi, b.S);
      kernels::scal(-1.0, b.Rc.data(), static_cast<size_t>(b.n) * b.n);
    }
    build_rhs(rhs_aff);
    newton_solve(rhs_aff, dx_aff, dnu_aff);
    compute_deltas(dx_aff);

    RMatrix scratch;
    double ap_aff = 1.0, ad_aff = 1.0;
    for (auto& b : sp.blocks) {
      ap_aff = std::min(ap_aff, max_step(b.chol, b.dS, scratch));
      RMatrix phic = b.Phi;
      if (!cholesky_in_place(phic)) return finish(SolveStatus::NumericalFailure, iter);
      ad_aff = std::min(ad_aff, max_step(phic, b.dPhi, scratch));
      b.dS_aff = b.dS;
      b.dPhi_aff = b.dPhi;
    }
    ap_aff = std::min(1.0, 0.99 * ap_aff);
    ad_aff = std::min(1.0, 0.99 * ad_aff);

    double gap_aff = 0.0;
    for (auto& b : sp.blocks) {
      RMatrix s_try = b.S;
      kernels::axpy(ap_aff, b.dS_aff.data(), s_try.data(), static_cast<size_t>(b.n) * b.n);
      RMatrix p_try = b.Phi;
      kernels::axpy(ad_aff, b.dPhi_aff.data(), p_try.data(), static_cast<size_t>(b.n) * b.n);
      gap_aff += rtrace_prod(s_try, p_try);
    }
    const double mu_aff = gap_aff / std::max(1, ntot);
    double sigma = std::pow(std::max(mu_aff, 0.0) / std::max(mu, 1e-300), 3.0);
    sigma = std::clamp(sigma, 1e-8, 1.0);

    // Corrector: Rc = sigma mu I - Phi S - dPhi_aff dS_aff
    for (auto& b : sp.blocks) {
      b.Rc = rmul(b.Phi, b.S);
      kernels::scal(-1.0, b.Rc.data(), static_cast<size_t>(b.n) * b.n);
      for (int i = 0; i < b.n; ++i) b.Rc(i, i) += sigma * mu;
      const RMatrix cross = rmul(b.dPhi_aff, b.dS_aff);
      kernels::axpy(-1.0, cross.data(), b.Rc.data(), static_cast<size_t>(b.n) * b.n);
    }
    build_rhs(rhs);
    newton_solve(rhs, dx, dnu);
    compute_deltas(dx);

    double ap = 1.0, ad = 1.0;
    for (auto& b : sp.blocks) {
      ap = std::min(ap, max_step(b.chol, b.dS, scratch));
      RMatrix phic = b.Phi;
      if (!cholesky_in_place(phic)) return finish(SolveStatus::NumericalFailure, iter);
      ad = std::min(ad, max_step(phic, b.dPhi, scratch));
    }
    ap = std::min(1.0, 0.98 * ap);
    ad = std::min(1.0, 0.98 * ad);
    if (ap < 1e-10 && ad < 1e-10) return finish(SolveStatus::NumericalFailure, iter);

    kernels::axpy(ap, dx.data(), x.data(), m);
    for (int r = 0; r < e; ++r) nu[r] += ad * dnu[r];
    for (auto& b : sp.blocks) {
      kernels::axpy(ap, b.dS.data(), b.S.data(), static_cast<size_t>(b.n) * b.n);
      kernels::axpy(ad, b.dPhi.data(), b.Phi.data(), static_cast<size_t>(b.n) * b.n);
      symmetrize(b.S);
      symmetrize(b.Phi);
    }
  }

  return finish(SolveStatus::MaxIter, opts.max_iter);
}

// ---------------------------------------------------------------------------
// Feasibility check and dump
// ---------------------------------------------------------------------------

FeasibilityReport ConicProblem::check_feasibility(const std::vector<double>& scalar_values,
                                                  const std::vector<CMatrix>& matrix_values) const {
  if (scalar_values.size() != vars_.size() || matrix_values.size() != vars_.size())
    throw std::invalid_argument("check_feasibility: value vectors must have one entry per variable");
  std::vector<double> x(total_params_, 0.0);
  for (size_t vi = 0; vi < vars_.size(); ++vi) {
    const Var& v = vars_[vi];
    if (v.count == 1) {
      x[v.offset] = scalar_values[vi];
    } else {
      const CMatrix& mv = matrix_values[vi];
      if (mv.rows() != v.rows || mv.cols() != v.cols)
        throw std::invalid_argument("check_feasibility: matrix value shape mismatch for " + v.name);
      project_params(v, mv, x.data() + v.offset);
    }
  }

  FeasibilityReport rep;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& l : lmis_) {
    const CMatrix m = eval_lmi(l, x);
    const double margin = m.rows() == 1 ? m(0, 0).real() : min_eigenvalue(m);
    rep.lmi_margins[l.label] = margin;
    worst = std::min(worst, margin);
  }
  for (const auto& v : vars_) {
    if (v.kind == VarKind::NonnegReal) {
      const double margin = x[v.offset];
      rep.lmi_margins["nonneg:" + v.name] = margin;
      worst = std::min(worst, margin);
    } else if (v.kind == VarKind::HermitianPsd) {
      const double margin = min_eigenvalue(assemble_matrix(v, x.data() + v.offset));
      rep.lmi_margins["psd:" + v.name] = margin;
      worst = std::min(worst, margin);
    }
  }
  for (const auto& con : ineqs_) {
    const double val = eval_lin_expr(con.expr, scalar_values, matrix_values);
    rep.ineq_slacks[con.label] = val;
    worst = std::min(worst, val);
  }
  for (const auto& con : eqs_)
    rep.eq_residuals[con.label] = std::abs(eval_lin_expr(con.expr, scalar_values, matrix_values));
  rep.worst_lmi_margin = worst;
  return rep;
}

namespace {
void dump_matrix(std::ostream& os, const CMatrix& m) {
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) {
      const cplx v = m(i, j);
      if (v != 0.0) os << ' ' << i << ' ' << j << ' ' << v.real() << ' ' << v.imag();
    }
  os << '\n';
}
}  // namespace

void ConicProblem::dump(std::ostream& os) const {
  os << "conic-problem v1\n";
  os << "params " << total_params_ << "\n";
  for (const auto& v : vars_) {
    os << "var " << v.name << ' ';
    switch (v.kind) {
      case VarKind::FreeReal: os << "free-real"; break;
      case VarKind::NonnegReal: os << "nonneg-real"; break;
      case VarKind::ComplexMatrix: os << "complex-matrix " << v.rows << ' ' << v.cols; break;
      case VarKind::HermitianFree: os << "hermitian-free " << v.rows; break;
      case VarKind::HermitianPsd: os << "hermitian-psd " << v.rows; break;
    }
    os << " offset " << v.offset << " count " << v.count << '\n';
  }
  double k = 0.0;
  const std::vector<double> obj = lin_expr_row(objective_, &k);
  os << "objective constant " << k << " coeffs";
  for (int i = 0; i < total_params_; ++i)
    if (obj[i] != 0.0) os << ' ' << i << ' ' << obj[i];
  os << '\n';
  for (const auto& l : lmis_) {
    os << "lmi " << l.label << " dim " << l.dim << '\n';
    os << "  const";
    dump_matrix(os, l.constant);
    for (const auto& t : l.terms) {
      const Var& v = vars_.at(t.var_id);
      for (int p = 0; p < v.count; ++p) {
        if (max_abs(t.coeffs[p]) == 0.0) continue;
        os << "  coeff param " << (v.offset + p);
        dump_matrix(os, t.coeffs[p]);
      }
    }
  }
  auto dump_scalar_con = [&](const char* tag, const ScalarCon& con) {
    double kk = 0.0;
    const std::vector<double> row = lin_expr_row(con.expr, &kk);
    os << tag << ' ' << con.label << " constant " << kk << " coeffs";
    for (int i = 0; i < total_params_; ++i)
      if (row[i] != 0.0) os << ' ' << i << ' ' << row[i];
    os << '\n';
  };
  for (const auto& con : ineqs_) dump_scalar_con("ineq-ge0", con);
  for (const auto& con : eqs_) dump_scalar_con("eq0", con);
}

}  // namespace secrelay::conic
