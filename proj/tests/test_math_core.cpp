#include <cmath>
#include <random>

#include "doctest.h"
#include "secrelay/cmatrix.hpp"
#include "secrelay/linalg.hpp"
#include "secrelay/rng.hpp"

using namespace secrelay;

namespace {

std::mt19937_64 g_rng(2024);

CMatrix random_cmatrix(int r, int c) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  CMatrix m(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) m(i, j) = cplx(d(g_rng), d(g_rng));
  return m;
}

CMatrix random_hermitian(int n) {
  const CMatrix a = random_cmatrix(n, n);
  return hermitian_part(a);
}

// Reference product written as plain index loops, independent of the
// kernel-backed operator*.
CMatrix mul_ref(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  return c;
}

cplx trace_ref(const CMatrix& a) {
  cplx t = 0.0;
  for (int i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

}  // namespace

TEST_CASE("kron identity cases") {
  const CMatrix i2 = CMatrix::identity(2);
  const CMatrix k = kron(i2, i2);
  REQUIRE(k.rows() == 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::abs(k(i, j) - (i == j ? 1.0 : 0.0)) < 1e-15);

  CMatrix diag(2, 2);
  diag(0, 0) = cplx(2.0, 1.0);
  diag(1, 1) = cplx(-3.0, 0.5);
  const CMatrix k2 = kron(diag, i2);
  CHECK(std::abs(k2(0, 0) - diag(0, 0)) < 1e-15);
  CHECK(std::abs(k2(1, 1) - diag(0, 0)) < 1e-15);
  CHECK(std::abs(k2(2, 2) - diag(1, 1)) < 1e-15);
  CHECK(std::abs(k2(3, 3) - diag(1, 1)) < 1e-15);
  CHECK(std::abs(k2(0, 1)) < 1e-15);
  CHECK(std::abs(k2(2, 3)) < 1e-15);
}

TEST_CASE("vec follows column-stacking order and unvec round-trips") {
  CMatrix w(2, 2);
  w(0, 0) = 1.0;
  w(1, 0) = 2.0;
  w(0, 1) = 3.0;
  w(1, 1) = 4.0;
  const CVec v = vec(w);
  CHECK(v[0] == cplx(1.0));
  CHECK(v[1] == cplx(2.0));
  CHECK(v[2] == cplx(3.0));
  CHECK(v[3] == cplx(4.0));

  const CMatrix r = random_cmatrix(3, 3);
  const CMatrix rt = unvec(vec(r), 3, 3);
  CHECK(frobenius_norm(rt - r) == 0.0);

  CHECK_THROWS_AS(unvec(v, 3, 2), std::invalid_argument);
}

TEST_CASE("vec(ABC) = (C^T kron A) vec(B) on random 2x2") {
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_cmatrix(2, 2);
    const CMatrix b = random_cmatrix(2, 2);
    const CMatrix c = random_cmatrix(2, 2);
    const CVec lhs = vec(mul_ref(mul_ref(a, b), c));
    const CVec rhs = matvec(kron(transpose(c), a), vec(b));
    for (size_t i = 0; i < lhs.size(); ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-12);
  }
}

TEST_CASE("trace identities from the vectorization calculus") {
  // tr(A^H B C D^H) = vec(A)^H (D^T kron B) vec(C) for Hermitian D (the form
  // the rank-one lift uses, with D = h1 h1^H); for general D the Kronecker
  // factor is conj(D).
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 3;
    const CMatrix a = random_cmatrix(n, n);
    const CMatrix b = random_cmatrix(n, n);
    const CMatrix c = random_cmatrix(n, n);
    const CMatrix d = random_hermitian(n);
    const cplx lhs = trace_ref(mul_ref(mul_ref(mul_ref(adjoint(a), b), c), adjoint(d)));
    const cplx rhs = vdot(vec(a), matvec(kron(transpose(d), b), vec(c)));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
  }
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const CMatrix a = random_cmatrix(n, n);
    const CMatrix b = random_cmatrix(n, n);
    const CMatrix c = random_cmatrix(n, n);
    const CMatrix d = random_cmatrix(n, n);
    const cplx lhs = trace_ref(mul_ref(mul_ref(mul_ref(adjoint(a), b), c), adjoint(d)));
    const cplx rhs = vdot(vec(a), matvec(kron(conjugate(d), b), vec(c)));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
  }
  // tr(A^H B A) = vec(A)^H (I kron B) vec(A)
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_cmatrix(2, 2);
    const CMatrix b = random_cmatrix(2, 2);
    const cplx lhs = trace_ref(mul_ref(mul_ref(adjoint(a), b), a));
    const cplx rhs = vdot(vec(a), matvec(kron(CMatrix::identity(2), b), vec(a)));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("hermitian_eig on analytic cases") {
  CMatrix d(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const EigResult e = hermitian_eig(d);
  CHECK(e.values[0] == doctest::Approx(3.0));
  CHECK(e.values[1] == doctest::Approx(1.0));

  // rank-one vv^H with ||v|| = 2 has spectrum (4, 0, ..., 0)
  CVec v = {cplx(1.0, 1.0), cplx(1.0, 0.0), cplx(0.0, 1.0)};
  const double scale = 2.0 / std::sqrt(vnorm_sq(v));
  for (auto& x : v) x *= scale;
  const EigResult e2 = hermitian_eig(outer(v, v));
  CHECK(e2.values[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(std::abs(e2.values[1]) < 1e-12);
  CHECK(std::abs(e2.values[2]) < 1e-12);
}

TEST_CASE("hermitian_eig reconstruction residual") {
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_hermitian(4);
    const EigResult e = hermitian_eig(a);
    CMatrix lam(4, 4);
    for (int i = 0; i < 4; ++i) lam(i, i) = e.values[i];
    const CMatrix rec = e.vectors * lam * adjoint(e.vectors);
    CHECK(frobenius_norm(rec - a) <= 1e-9 * std::max(1e-30, frobenius_norm(a)));
    // unitarity
    const CMatrix qhq = adjoint(e.vectors) * e.vectors;
    CHECK(frobenius_norm(qhq - CMatrix::identity(4)) < 1e-12);
  }
  CHECK_THROWS_AS(hermitian_eig(random_cmatrix(3, 3)), std::invalid_argument);
}

TEST_CASE("complex_to_real_psd embedding") {
  const RMatrix t = complex_to_real_psd(CMatrix::identity(2));
  REQUIRE(t.rows() == 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(t(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));

  // A = [[0, i], [-i, 0]] has eigenvalues (1, -1); T(A) doubles each.
  CMatrix a(2, 2);
  a(0, 1) = cplx(0.0, 1.0);
  a(1, 0) = cplx(0.0, -1.0);
  const std::vector<double> ev = sym_eigvalues(complex_to_real_psd(a));
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(1.0));
  CHECK(ev[2] == doctest::Approx(-1.0));
  CHECK(ev[3] == doctest::Approx(-1.0));

  // min eig preserved, and sign in particular (PSD-ness)
  for (int trial = 0; trial < 200; ++trial) {
    const CMatrix h = random_hermitian(3 + trial % 3);
    const double me_c = min_eigenvalue(h);
    const double me_r = min_eigenvalue(complex_to_real_psd(h));
    CHECK(me_r == doctest::Approx(me_c).epsilon(1e-10));
  }
}

TEST_CASE("rank_one_factor") {
  // X = 4 e1 e1^T  ->  x = 2 e1 up to phase
  CMatrix x(3, 3);
  x(0, 0) = 4.0;
  const RankOneResult r = rank_one_factor(x);
  REQUIRE(r.ok);
  CHECK(std::abs(r.factor[0]) == doctest::Approx(2.0));
  CHECK(std::abs(r.factor[1]) < 1e-12);
  CHECK(std::abs(r.factor[2]) < 1e-12);

  // ratio 1: flagged as rank failure
  const RankOneResult bad = rank_one_factor(CMatrix::identity(2));
  CHECK_FALSE(bad.ok);
  CHECK(bad.ratio == doctest::Approx(1.0));

  // recovery up to a global phase
  for (int trial = 0; trial < 30; ++trial) {
    CVec v(4);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (auto& e : v) e = cplx(d(g_rng), d(g_rng));
    const CMatrix xx = outer(v, v);
    const RankOneResult rr = rank_one_factor(xx);
    REQUIRE(rr.ok);
    const CMatrix diff = xx - outer(rr.factor, rr.factor);
    CHECK(frobenius_norm(diff) <= 1e-8 * vnorm_sq(v));
  }

  CHECK_THROWS_AS(rank_one_factor(cplx(-1.0, 0.0) * CMatrix::identity(2)), std::invalid_argument);
}

TEST_CASE("complex gaussian sampling statistics") {
  Rng rng(777);
  const int n = 100000;
  double mean_re = 0.0, mean_im = 0.0, power = 0.0;
  for (int i = 0; i < n; ++i) {
    const cplx z = rng.complex_gaussian(1.0);
    mean_re += z.real();
    mean_im += z.imag();
    power += std::norm(z);
  }
  mean_re /= n;
  mean_im /= n;
  power /= n;
  // mean within 3 sigma of zero (sigma = sqrt(0.5/n) per component)
  const double band = 3.0 * std::sqrt(0.5 / n);
  CHECK(std::abs(mean_re) < band);
  CHECK(std::abs(mean_im) < band);
  CHECK(power > 0.98);
  CHECK(power < 1.02);
}

TEST_CASE("fixed seed reproduces identical matrices") {
  Rng a(42), b(42);
  const CMatrix ma = sample_complex_gaussian(a, 4, 5, 2.0);
  const CMatrix mb = sample_complex_gaussian(b, 4, 5, 2.0);
  CHECK(frobenius_norm(ma - mb) == 0.0);

  Rng s1 = Rng::for_stream(10, 0);
  Rng s2 = Rng::for_stream(10, 1);
  const CMatrix w1 = sample_complex_gaussian(s1, 3, 3, 1.0);
  const CMatrix w2 = sample_complex_gaussian(s2, 3, 3, 1.0);
  CHECK(frobenius_norm(w1 - w2) > 1e-3);  // distinct streams
}

TEST_CASE("HermitianMatrix validates and symmetrizes") {
  const CMatrix h = random_hermitian(3);
  const HermitianMatrix hm(h);
  CHECK(frobenius_norm(hm.matrix() - h) < 1e-14);
  CHECK_THROWS_AS(HermitianMatrix(random_cmatrix(3, 3)), std::invalid_argument);
}
