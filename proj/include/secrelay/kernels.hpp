#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace secrelay::kernels {

using cplx = std::complex<double>;

// Scalar reference kernels. These are the semantic ground truth; the
// dispatched variants below must agree with them to rounding error and are
// equivalence-tested against them.
namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double nrm2sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scal(double a, double* x, std::size_t n);
// Plane rotation applied in place: (x, y) <- (c*x + s*y, c*y - s*x).
void rot(double* x, double* y, std::size_t n, double c, double s);
// y += a*x on interleaved complex data.
void zaxpy(cplx a, const cplx* x, cplx* y, std::size_t n);
// conj(x)^T y on interleaved complex data.
cplx zdotc(const cplx* x, const cplx* y, std::size_t n);
}  // namespace scalar

// Dispatched entry points. Bound once at startup to the widest instruction
// set the running CPU supports (scalar fallback otherwise).
extern double (*dot)(const double*, const double*, std::size_t);
extern double (*nrm2sq)(const double*, std::size_t);
extern void (*axpy)(double, const double*, double*, std::size_t);
extern void (*scal)(double, double*, std::size_t);
extern void (*rot)(double*, double*, std::size_t, double, double);
extern void (*zaxpy)(cplx, const cplx*, cplx*, std::size_t);
extern cplx (*zdotc)(const cplx*, const cplx*, std::size_t);

// Name of the backend the dispatcher selected: "scalar", "avx2" or "neon".
std::string_view active_backend();

}  // namespace secrelay::kernels
