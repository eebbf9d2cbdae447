#include <random>
#include <sstream>

#include "doctest.h"
#include "secrelay/conic.hpp"

using namespace secrelay;
using namespace secrelay::conic;

namespace {

std::mt19937_64 g_rng(555);

CMatrix random_hermitian(int n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  CMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = cplx(d(g_rng), d(g_rng));
  return hermitian_part(m);
}

CMatrix random_pd(int n) {
  const CMatrix a = random_hermitian(n);
  CMatrix m = a * a;  // PSD
  for (int i = 0; i < n; ++i) m(i, i) += 0.2;
  return hermitian_part(m);
}

}  // namespace

TEST_CASE("analytic 2x2: min x s.t. [[x,1],[1,x]] >= 0") {
  ConicProblem p;
  const VarHandle x = p.add_free_real("x");
  LinExpr obj;
  obj.add(x, 1.0);
  p.set_objective(obj);

  const LmiHandle l = p.add_lmi("m", 2);
  CMatrix c0(2, 2);
  c0(0, 1) = 1.0;
  c0(1, 0) = 1.0;
  p.lmi_add_const(l, c0);
  p.lmi_add_scalar_term(l, x, CMatrix::identity(2));

  const ConicSolution sol = p.solve();
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.scalar(x) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-7));
  // weak duality in the minimization sense
  CHECK(sol.objective >= sol.dual_objective - 1e-7);
}

TEST_CASE("analytic complex 2x2 with known dual certificate") {
  // min x s.t. [[x, i], [-i, x]] >= 0  =>  x* = 1, dual = vv^H, v = (1, i)/sqrt 2
  ConicProblem p;
  const VarHandle x = p.add_free_real("x");
  LinExpr obj;
  obj.add(x, 1.0);
  p.set_objective(obj);

  const LmiHandle l = p.add_lmi("m", 2);
  CMatrix c0(2, 2);
  c0(0, 1) = cplx(0.0, 1.0);
  c0(1, 0) = cplx(0.0, -1.0);
  p.lmi_add_const(l, c0);
  p.lmi_add_scalar_term(l, x, CMatrix::identity(2));

  const ConicSolution sol = p.solve();
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.scalar(x) == doctest::Approx(1.0).epsilon(1e-7));
  const CMatrix& phi = sol.dual_matrices.at("m");
  CHECK(phi(0, 0).real() == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(phi(1, 1).real() == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(phi(0, 1).imag() == doctest::Approx(-0.5).epsilon(1e-5));
  CHECK(phi(1, 0).imag() == doctest::Approx(0.5).epsilon(1e-5));
  // complex-domain KKT stationarity: c = tr(phi * I) = 1
  CHECK(trace(phi).real() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("minimum-eigenvalue program with trace equality") {
  // min tr(CX) s.t. tr(X) = 1, X >= 0, C = diag(1,2): value 1 at X = e1 e1^T
  ConicProblem p;
  const VarHandle x = p.add_hermitian("X", 2, /*psd=*/true);
  CMatrix c(2, 2);
  c(0, 0) = 1.0;
  c(1, 1) = 2.0;
  LinExpr obj;
  obj.add(x, c);
  p.set_objective(obj);
  LinExpr tr1;
  tr1.add(x, CMatrix::identity(2)).add_constant(-1.0);
  p.add_eq0("trace", tr1);

  const ConicSolution sol = p.solve();
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-7));
  const CMatrix& xm = sol.matrix(x);
  CHECK(xm(0, 0).real() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(xm(1, 1)) < 1e-6);
}

TEST_CASE("random strictly feasible SDPs reach tight KKT residuals") {
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 5, n = 4;
    ConicProblem p;
    std::vector<VarHandle> xs;
    for (int i = 0; i < m; ++i) xs.push_back(p.add_free_real("x" + std::to_string(i)));

    std::vector<CMatrix> as;
    for (int i = 0; i < m; ++i) as.push_back(random_hermitian(n));
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<double> x0(m);
    for (auto& v : x0) v = d(g_rng);

    // C = S0 - sum A_i x0_i keeps x0 strictly feasible; c_i = tr(Phi0 A_i)
    // makes the dual strictly feasible, hence bounded optimal.
    const CMatrix s0 = random_pd(n);
    CMatrix c0 = s0;
    for (int i = 0; i < m; ++i) c0 -= as[i] * cplx(x0[i]);
    const CMatrix phi0 = random_pd(n);

    LinExpr obj;
    for (int i = 0; i < m; ++i) obj.add(xs[i], trace(phi0 * as[i]).real());
    p.set_objective(obj);
    const LmiHandle l = p.add_lmi("blk", n);
    p.lmi_add_const(l, c0);
    for (int i = 0; i < m; ++i) p.lmi_add_scalar_term(l, xs[i], as[i]);

    const ConicSolution sol = p.solve();
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.duality_gap <= 1e-7);
    CHECK(sol.primal_infeas <= 1e-7);
    CHECK(sol.dual_infeas <= 1e-7);
    CHECK(sol.complementarity <= 1e-6);
    CHECK(sol.objective >= sol.dual_objective - 1e-7 * (1.0 + std::abs(sol.objective)));
  }
}

TEST_CASE("argmin is invariant to objective scaling") {
  ConicProblem p1, p10;
  for (ConicProblem* pp : {&p1, &p10}) {
    const VarHandle x = pp->add_free_real("x");
    const VarHandle y = pp->add_free_real("y");
    LinExpr obj;
    const double s = (pp == &p10) ? 10.0 : 1.0;
    obj.add(x, s * 1.0).add(y, s * 0.5);
    pp->set_objective(obj);
    const LmiHandle l = pp->add_lmi("m", 2);
    CMatrix c0(2, 2);
    c0(0, 1) = 1.0;
    c0(1, 0) = 1.0;
    pp->lmi_add_const(l, c0);
    CMatrix e00(2, 2), e11(2, 2);
    e00(0, 0) = 1.0;
    e11(1, 1) = 1.0;
    pp->lmi_add_scalar_term(l, x, e00);
    pp->lmi_add_scalar_term(l, y, e11);
  }
  SolverOptions tight;
  tight.gap_tol = 1e-11;
  tight.feas_tol = 1e-11;
  const ConicSolution s1 = p1.solve(tight);
  const ConicSolution s10 = p10.solve(tight);
  REQUIRE(s1.status == SolveStatus::Optimal);
  REQUIRE(s10.status == SolveStatus::Optimal);
  CHECK(s1.scalar_values[0] == doctest::Approx(s10.scalar_values[0]).epsilon(1e-6));
  CHECK(s1.scalar_values[1] == doctest::Approx(s10.scalar_values[1]).epsilon(1e-6));
}

TEST_CASE("check_feasibility margins") {
  ConicProblem p;
  const VarHandle x = p.add_hermitian("X", 3, true);
  LinExpr obj;
  obj.add(x, CMatrix::identity(3));
  p.set_objective(obj);

  std::vector<double> sv(1, 0.0);
  std::vector<CMatrix> mv(1);
  mv[0] = CMatrix(3, 3);  // zero point
  FeasibilityReport rep = p.check_feasibility(sv, mv);
  CHECK(rep.lmi_margins.at("psd:X") == doctest::Approx(0.0));

  mv[0] = CMatrix::identity(3);
  rep = p.check_feasibility(sv, mv);
  CHECK(rep.lmi_margins.at("psd:X") == doctest::Approx(1.0));
}

TEST_CASE("solved instance passes its own feasibility check") {
  ConicProblem p;
  const VarHandle x = p.add_free_real("x");
  LinExpr obj;
  obj.add(x, 1.0);
  p.set_objective(obj);
  const LmiHandle l = p.add_lmi("m", 2);
  CMatrix c0(2, 2);
  c0(0, 1) = 1.0;
  c0(1, 0) = 1.0;
  p.lmi_add_const(l, c0);
  p.lmi_add_scalar_term(l, x, CMatrix::identity(2));
  LinExpr cap;  // x <= 5
  cap.add(x, -1.0).add_constant(5.0);
  p.add_ineq_ge0("cap", cap);

  const ConicSolution sol = p.solve();
  REQUIRE(sol.status == SolveStatus::Optimal);
  const FeasibilityReport rep = p.check_feasibility(sol.scalar_values, sol.matrix_values);
  CHECK(rep.worst_lmi_margin >= -1e-8);
  CHECK(rep.ineq_slacks.at("cap") >= -1e-8);
}

TEST_CASE("infeasible and unbounded instances are not reported Optimal") {
  {
    ConicProblem p;
    const VarHandle x = p.add_free_real("x");
    LinExpr obj;
    obj.add(x, 1.0);
    p.set_objective(obj);
    LinExpr lo, hi;
    lo.add(x, 1.0).add_constant(-1.0);   // x >= 1
    hi.add(x, -1.0).add_constant(-1.0);  // x <= -1
    p.add_ineq_ge0("lo", lo);
    p.add_ineq_ge0("hi", hi);
    const ConicSolution sol = p.solve();
    CHECK(sol.status != SolveStatus::Optimal);
  }
  {
    ConicProblem p;
    const VarHandle x = p.add_nonneg_real("x");
    LinExpr obj;
    obj.add(x, -1.0);
    p.set_objective(obj);
    const ConicSolution sol = p.solve();
    CHECK(sol.status != SolveStatus::Optimal);
  }
}

TEST_CASE("problem dump is stable and parseable-looking") {
  ConicProblem p;
  const VarHandle x = p.add_free_real("x");
  LinExpr obj;
  obj.add(x, 1.0);
  p.set_objective(obj);
  const LmiHandle l = p.add_lmi("m", 2);
  CMatrix c0(2, 2);
  c0(0, 1) = 1.0;
  c0(1, 0) = 1.0;
  p.lmi_add_const(l, c0);
  p.lmi_add_scalar_term(l, x, CMatrix::identity(2));

  std::ostringstream os;
  p.dump(os);
  const std::string s = os.str();
  CHECK(s.find("conic-problem v1") == 0);
  CHECK(s.find("var x free-real") != std::string::npos);
  CHECK(s.find("lmi m dim 2") != std::string::npos);
}
