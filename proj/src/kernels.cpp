#include "secrelay/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace secrelay::kernels {

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double nrm2sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void rot(double* x, double* y, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - s * xi;
  }
}

void zaxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

cplx zdotc(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx v = std::conj(x[i]) * y[i];
    re += v.real();
    im += v.imag();
  }
  return {re, im};
}

}  // namespace scalar

#if defined(__aarch64__)
namespace neon {

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

double nrm2sq(const double* x, std::size_t n) { return dot(x, x, n); }

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void rot(double* x, double* y, std::size_t n, double c, double s) {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xi = vld1q_f64(x + i);
    const float64x2_t yi = vld1q_f64(y + i);
    vst1q_f64(x + i, vfmaq_f64(vmulq_f64(vc, xi), vs, yi));
    vst1q_f64(y + i, vfmsq_f64(vmulq_f64(vc, yi), vs, xi));
  }
  for (; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - s * xi;
  }
}

}  // namespace neon
#endif  // __aarch64__

#if defined(SECRELAY_HAVE_AVX2_TU)
namespace avx2 {
double dot(const double*, const double*, std::size_t);
double nrm2sq(const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void scal(double, double*, std::size_t);
void rot(double*, double*, std::size_t, double, double);
void zaxpy(cplx, const cplx*, cplx*, std::size_t);
cplx zdotc(const cplx*, const cplx*, std::size_t);
}  // namespace avx2
#endif

namespace {

struct Backend {
  double (*dot)(const double*, const double*, std::size_t) = scalar::dot;
  double (*nrm2sq)(const double*, std::size_t) = scalar::nrm2sq;
  void (*axpy)(double, const double*, double*, std::size_t) = scalar::axpy;
  void (*scal)(double, double*, std::size_t) = scalar::scal;
  void (*rot)(double*, double*, std::size_t, double, double) = scalar::rot;
  void (*zaxpy)(cplx, const cplx*, cplx*, std::size_t) = scalar::zaxpy;
  cplx (*zdotc)(const cplx*, const cplx*, std::size_t) = scalar::zdotc;
  std::string_view name = "scalar";
};

Backend pick_backend() {
  Backend b;
#if defined(SECRELAY_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    b.dot = avx2::dot;
    b.nrm2sq = avx2::nrm2sq;
    b.axpy = avx2::axpy;
    b.scal = avx2::scal;
    b.rot = avx2::rot;
    b.zaxpy = avx2::zaxpy;
    b.zdotc = avx2::zdotc;
    b.name = "avx2";
  }
#elif defined(__aarch64__)
  b.dot = neon::dot;
  b.nrm2sq = neon::nrm2sq;
  b.axpy = neon::axpy;
  b.scal = neon::scal;
  b.rot = neon::rot;
  b.name = "neon";
#endif
  return b;
}

const Backend g_backend = pick_backend();

}  // namespace

double (*dot)(const double*, const double*, std::size_t) = g_backend.dot;
double (*nrm2sq)(const double*, std::size_t) = g_backend.nrm2sq;
void (*axpy)(double, const double*, double*, std::size_t) = g_backend.axpy;
void (*scal)(double, double*, std::size_t) = g_backend.scal;
void (*rot)(double*, double*, std::size_t, double, double) = g_backend.rot;
void (*zaxpy)(cplx, const cplx*, cplx*, std::size_t) = g_backend.zaxpy;
cplx (*zdotc)(const cplx*, const cplx*, std::size_t) = g_backend.zdotc;

std::string_view active_backend() { return g_backend.name; }

}  // namespace secrelay::kernels
