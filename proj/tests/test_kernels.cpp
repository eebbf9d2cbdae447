#include <random>
#include <vector>

#include "doctest.h"
#include "secrelay/kernels.hpp"

using namespace secrelay;

namespace {
std::vector<double> random_vec(std::mt19937_64& g, size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(g);
  return v;
}
std::vector<kernels::cplx> random_cvec(std::mt19937_64& g, size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<kernels::cplx> v(n);
  for (auto& x : v) x = {d(g), d(g)};
  return v;
}
}  // namespace

// Every dispatched kernel must agree with the scalar reference, including on
// lengths that exercise the vector remainder lanes.
TEST_CASE("dispatched kernels match scalar reference") {
  std::mt19937_64 g(12345);
  INFO("backend: ", kernels::active_backend());
  for (size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 33, 64, 100, 257}) {
    auto x = random_vec(g, n);
    auto y = random_vec(g, n);

    const double tol = 1e-13 * (1.0 + static_cast<double>(n));
    CHECK(kernels::dot(x.data(), y.data(), n) ==
          doctest::Approx(kernels::scalar::dot(x.data(), y.data(), n)).epsilon(tol));
    CHECK(kernels::nrm2sq(x.data(), n) ==
          doctest::Approx(kernels::scalar::nrm2sq(x.data(), n)).epsilon(tol));

    auto y1 = y, y2 = y;
    kernels::axpy(0.37, x.data(), y1.data(), n);
    kernels::scalar::axpy(0.37, x.data(), y2.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));

    auto s1 = x, s2 = x;
    kernels::scal(-1.75, s1.data(), n);
    kernels::scalar::scal(-1.75, s2.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(s1[i] == doctest::Approx(s2[i]).epsilon(1e-14));

    auto rx1 = x, ry1 = y, rx2 = x, ry2 = y;
    kernels::rot(rx1.data(), ry1.data(), n, 0.8, 0.6);
    kernels::scalar::rot(rx2.data(), ry2.data(), n, 0.8, 0.6);
    for (size_t i = 0; i < n; ++i) {
      CHECK(rx1[i] == doctest::Approx(rx2[i]).epsilon(1e-14));
      CHECK(ry1[i] == doctest::Approx(ry2[i]).epsilon(1e-14));
    }

    auto cx = random_cvec(g, n);
    auto cy = random_cvec(g, n);
    auto cy1 = cy, cy2 = cy;
    const kernels::cplx a{0.3, -1.1};
    kernels::zaxpy(a, cx.data(), cy1.data(), n);
    kernels::scalar::zaxpy(a, cx.data(), cy2.data(), n);
    for (size_t i = 0; i < n; ++i) {
      CHECK(cy1[i].real() == doctest::Approx(cy2[i].real()).epsilon(1e-14));
      CHECK(cy1[i].imag() == doctest::Approx(cy2[i].imag()).epsilon(1e-14));
    }

    const kernels::cplx d1 = kernels::zdotc(cx.data(), cy.data(), n);
    const kernels::cplx d2 = kernels::scalar::zdotc(cx.data(), cy.data(), n);
    CHECK(std::abs(d1 - d2) <= tol * (1.0 + std::abs(d2)));
  }
}

TEST_CASE("rot is an isometry") {
  std::mt19937_64 g(99);
  auto x = random_vec(g, 37);
  auto y = random_vec(g, 37);
  const double before = kernels::nrm2sq(x.data(), 37) + kernels::nrm2sq(y.data(), 37);
  kernels::rot(x.data(), y.data(), 37, std::cos(0.41), std::sin(0.41));
  const double after = kernels::nrm2sq(x.data(), 37) + kernels::nrm2sq(y.data(), 37);
  CHECK(after == doctest::Approx(before).epsilon(1e-13));
}
