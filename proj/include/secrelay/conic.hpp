#pragma once

#include <chrono>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "secrelay/cmatrix.hpp"
#include "secrelay/linalg.hpp"

namespace secrelay::conic {

// Variable kinds. Matrix variables are expanded into real scalar parameters
// internally; Hermitian variables use (diag, re, im) lower-triangle
// parameters, complex rectangular variables use (re, im) pairs per entry.
enum class VarKind { FreeReal, NonnegReal, ComplexMatrix, HermitianFree, HermitianPsd };

struct VarHandle {
  int id = -1;
  bool valid() const { return id >= 0; }
};
struct LmiHandle {
  int id = -1;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIter, NumericalFailure };
const char* to_string(SolveStatus s);

struct SolverOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 100;
  bool verbose = false;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Real-linear expression over problem variables; matrix terms contribute
// <C, V> = Re tr(C^H V).
class LinExpr {
 public:
  LinExpr& add(VarHandle scalar_var, double coeff);
  LinExpr& add(VarHandle matrix_var, const CMatrix& coeff);
  LinExpr& add_constant(double c);

 private:
  friend class ConicProblem;
  struct ScalarTerm {
    VarHandle var;
    double coeff;
  };
  struct MatrixTerm {
    VarHandle var;
    CMatrix coeff;
  };
  std::vector<ScalarTerm> scalar_terms_;
  std::vector<MatrixTerm> matrix_terms_;
  double constant_ = 0.0;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;       // in the problem's stated sense (min)
  double dual_objective = 0.0;  // lower bound at the returned dual point
  double duality_gap = 0.0;     // relative
  int iterations = 0;

  // KKT residuals at the returned point.
  double primal_infeas = 0.0;
  double dual_infeas = 0.0;
  double complementarity = 0.0;

  // Primal values, keyed by variable id.
  std::vector<double> scalar_values;        // for scalar vars (by id), else 0
  std::vector<CMatrix> matrix_values;       // for matrix vars (by id), else empty

  // Dual PSD matrix per labeled LMI, scaled so that the complex-domain KKT
  // stationarity  c_i = sum_b tr(Phi_b A_bi)  holds.
  std::map<std::string, CMatrix> dual_matrices;

  double scalar(VarHandle v) const { return scalar_values.at(v.id); }
  const CMatrix& matrix(VarHandle v) const { return matrix_values.at(v.id); }
};

struct FeasibilityReport {
  // Minimum eigenvalue per labeled LMI (>= 0 means satisfied).
  std::map<std::string, double> lmi_margins;
  // Signed slack per scalar inequality label (expr value; >= 0 means satisfied).
  std::map<std::string, double> ineq_slacks;
  // |expr| per equality label.
  std::map<std::string, double> eq_residuals;
  double worst_lmi_margin = 0.0;
};

// Standard-form conic problem: minimize a real-linear objective subject to
// affine Hermitian LMI constraints, scalar affine equalities/inequalities,
// sign constraints from variable kinds, and PSD constraints on HermitianPsd
// variables. Complex LMIs are realified before the interior-point solve and
// dual matrices are mapped back to Hermitian form.
class ConicProblem {
 public:
  VarHandle add_free_real(const std::string& name);
  VarHandle add_nonneg_real(const std::string& name);
  VarHandle add_complex_matrix(const std::string& name, int rows, int cols);
  VarHandle add_hermitian(const std::string& name, int dim, bool psd);

  // Objective: minimize expr.
  void set_objective(const LinExpr& expr);

  // M(x) >= 0 (PSD). dim is the complex dimension.
  LmiHandle add_lmi(const std::string& label, int dim);
  void lmi_add_const(LmiHandle lmi, const CMatrix& c);
  void lmi_add_scalar_term(LmiHandle lmi, VarHandle scalar_var, const CMatrix& coeff);
  // Adds the real-linear matrix term map(V). `map` is applied to each basis
  // element of the variable; every image must be Hermitian (checked).
  void lmi_add_matrix_term(LmiHandle lmi, VarHandle matrix_var,
                           const std::function<CMatrix(const CMatrix&)>& map);

  void add_ineq_ge0(const std::string& label, const LinExpr& expr);  // expr >= 0
  void add_eq0(const std::string& label, const LinExpr& expr);       // expr == 0

  ConicSolution solve(const SolverOptions& opts = {}) const;

  // Evaluates feasibility margins of a candidate point (no solve).
  FeasibilityReport check_feasibility(const std::vector<double>& scalar_values,
                                      const std::vector<CMatrix>& matrix_values) const;

  // One-record-per-line text dump for cross-checking against external
  // solvers; the format is documented in docs/conic_dump_format.md.
  void dump(std::ostream& os) const;

  int num_variables() const { return static_cast<int>(vars_.size()); }
  const std::string& variable_name(VarHandle v) const { return vars_.at(v.id).name; }

 private:
  struct Var {
    std::string name;
    VarKind kind;
    int rows = 1, cols = 1;
    int offset = 0;  // first real parameter
    int count = 1;   // number of real parameters
  };
  struct LmiTerm {
    int var_id;
    // Hermitian coefficient per real parameter of the variable (basis order).
    std::vector<CMatrix> coeffs;
  };
  struct Lmi {
    std::string label;
    int dim;
    CMatrix constant;
    std::vector<LmiTerm> terms;
  };
  struct ScalarCon {
    std::string label;
    LinExpr expr;
  };

  // Basis enumeration for matrix variables (real parameterization).
  static int param_count(const Var& v);
  static CMatrix basis_element(const Var& v, int param);
  static CMatrix assemble_matrix(const Var& v, const double* params);
  static void project_params(const Var& v, const CMatrix& value, double* params);

  std::vector<double> lin_expr_row(const LinExpr& e, double* constant) const;
  double eval_lin_expr(const LinExpr& e, const std::vector<double>& scalar_values,
                       const std::vector<CMatrix>& matrix_values) const;
  CMatrix eval_lmi(const Lmi& l, const std::vector<double>& x) const;

  std::vector<Var> vars_;
  std::vector<Lmi> lmis_;
  std::vector<ScalarCon> ineqs_;
  std::vector<ScalarCon> eqs_;
  LinExpr objective_;
  int total_params_ = 0;

  friend class IpmWorkspace;
};

}  // namespace secrelay::conic
