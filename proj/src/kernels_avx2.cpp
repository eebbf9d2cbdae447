// AVX2/FMA variants of the hot vector kernels. Compiled with -mavx2 -mfma;
// never called unless the dispatcher verified cpu support at startup.
#include <immintrin.h>

#include "secrelay/kernels.hpp"

namespace secrelay::kernels::avx2 {

namespace {
inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}
}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double out = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

double nrm2sq(const double* x, std::size_t n) { return dot(x, x, n); }

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void rot(double* x, double* y, std::size_t n, double c, double s) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xi = _mm256_loadu_pd(x + i);
    const __m256d yi = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_fmadd_pd(vs, yi, _mm256_mul_pd(vc, xi)));
    _mm256_storeu_pd(y + i, _mm256_fnmadd_pd(vs, xi, _mm256_mul_pd(vc, yi)));
  }
  for (; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - s * xi;
  }
}

// Interleaved complex y += a*x. Each 256-bit lane holds two complex values
// (re0, im0, re1, im1); the cross product term uses a swapped copy of x.
void zaxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const __m256d are = _mm256_set1_pd(a.real());
  const __m256d aim = _mm256_set1_pd(a.imag());
  const __m256d sign = _mm256_set_pd(1.0, -1.0, 1.0, -1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d xswap = _mm256_permute_pd(xv, 0x5);  // (im, re) pairs
    __m256d acc = _mm256_loadu_pd(yd + 2 * i);
    acc = _mm256_fmadd_pd(are, xv, acc);
    acc = _mm256_fmadd_pd(aim, _mm256_mul_pd(sign, xswap), acc);
    _mm256_storeu_pd(yd + 2 * i, acc);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

cplx zdotc(const cplx* x, const cplx* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  // re += xr*yr + xi*yi ; im += xr*yi - xi*yr
  __m256d accre = _mm256_setzero_pd();
  __m256d accim = _mm256_setzero_pd();
  const __m256d sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    const __m256d yswap = _mm256_permute_pd(yv, 0x5);
    accre = _mm256_fmadd_pd(xv, yv, accre);
    accim = _mm256_fmadd_pd(_mm256_mul_pd(sign, xv), yswap, accim);
  }
  double re = hsum(accre);
  double im = hsum(accim);
  for (; i < n; ++i) {
    const cplx v = std::conj(x[i]) * y[i];
    re += v.real();
    im += v.imag();
  }
  return {re, im};
}

}  // namespace secrelay::kernels::avx2
