#pragma once

namespace secrelay {

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double gammainc_lower(double a, double x);

// Inverse of P(a, .) in x: returns x >= 0 with P(a, x) = p.
// Domain: 0 <= p < 1, a > 0. Bracketing plus Newton refinement; the result
// satisfies |P(a, x) - p| <= 1e-12 (well inside the 1e-10 contract).
double gammaincinv(double p, double a);

}  // namespace secrelay
