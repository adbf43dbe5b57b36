#pragma once

#include <cstdint>

#include "betarate/logreal.hpp"

// Self-contained special-function kernels, everything in log space. These
// back every beta/binomial quantity in the library; raw factorials are
// never materialized.
namespace betarate::specfun {

// ln Gamma(x). Integer arguments below an internal table bound hit a
// precomputed table, everything else goes to std::lgamma.
double ln_gamma(double x);

// ln B(a, b) for a, b > 0.
double ln_beta(double a, double b);

// ln C(n, k) for 0 <= k <= n.
double ln_binomial(std::int64_t n, std::int64_t k);

// Regularized incomplete beta I_x(alpha, beta) for integer alpha >= 1,
// collapsed to the finite sum
//   I_x(alpha, beta) = 1 - sum_{i=0}^{alpha-1} x^i (1-x)^beta
//                                / ((beta+i) B(1+i, beta)),
// each summand evaluated in log space and exponentiated.
double reg_inc_beta_int(double x, std::int64_t alpha, double beta);

// Terminating Gauss series 2F1(-m, b; c; z) for m >= 0, b > 0, c > 0,
// 0 <= z < 1. Alternating terms go into separate positive/negative
// log-sum-exp pools, combined at the end with sign tracking.
LogReal hyp2f1_neg_int_series(std::int64_t m, double b, double c, double z);

// Same, additionally reporting the number of leading digits lost to
// cancellation between the two pools.
LogReal hyp2f1_neg_int_series(std::int64_t m, double b, double c, double z,
                              double& digits_lost);

// The same terminating 2F1 through the Pfaff transformation
//   2F1(-m, b; c; z) = (1-z)^m 2F1(-m, c-b; c; z/(z-1)).
// For c > b every transformed term is positive, so the sum is free of
// cancellation at any z in [0, 1); this is the stable route for the
// payout-comparison shape c - b = beta_B + 1. Requires c > b.
LogReal hyp2f1_neg_int_pfaff(std::int64_t m, double b, double c, double z);

// Jacobi polynomial P_n^{(x,y)}(t) by the standard three-term recurrence
// in degree. Throws numeric_error when a recurrence denominator
// degenerates (possible for negative parameter sums).
double jacobi_poly(std::int64_t n, double x, double y, double t);

// Jacobi-polynomial backend for 2F1(1 - beta_a, a; a + beta_b + 1; z).
// Valid for beta_b >= beta_a >= 2 (unsupported_domain otherwise; callers
// fall back to the series backend). Agrees with hyp2f1_neg_int_series on
// the shared domain.
LogReal hyp2f1_via_jacobi(std::int64_t beta_a, double a, std::int64_t beta_b,
                          double z);

// Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s),
// series branch for x < s+1 and continued fraction otherwise.
double reg_inc_gamma_upper(double s, double x);

}  // namespace betarate::specfun
