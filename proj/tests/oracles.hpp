#pragma once

#include <cstdint>
#include <functional>
#include <vector>

// Independent oracles for the test suites. Everything here is kept apart
// from the library's closed forms: integration is adaptive Gauss-Kronrod
// 7/15, binomial coefficients come from Pascal's triangle, and the Beta
// upper tail is evaluated either by the binomial-sum identity or by a
// continued fraction, never by the finite-sum lemma under test.
namespace oracles {

// Adaptive GK15 refinement of a scalar integrand to the given absolute
// tolerance.
double adaptive_quad(const std::function<double(double)>& f, double lo,
                     double hi, double abs_tol);

// Regularized incomplete beta by continued fraction (works for real a, b).
double ibeta_cf(double x, double a, double b);

// Exact binomial coefficients by Pascal's triangle, C(n, 0..n).
std::vector<long double> pascal_row(int n);

// Pr(phi_B > gamma*phi_A) by outer adaptive quadrature over phi_A with the
// inner Beta_B upper tail evaluated through the binomial-sum identity
// (integer parameters only).
double pr_scaled_quad(std::int64_t alpha_a, std::int64_t beta_a,
                      std::int64_t alpha_b, std::int64_t beta_b, double gamma,
                      double abs_tol = 1e-12);

// Same probability with both integrals adaptive (the inner tail is itself
// integrated numerically); slow, used to certify pr_scaled_quad.
double pr_scaled_quad_nested(std::int64_t alpha_a, std::int64_t beta_a,
                             std::int64_t alpha_b, std::int64_t beta_b,
                             double gamma, double abs_tol = 1e-10);

// Batched oracle for grid sweeps: for fixed (alpha_a, beta_a, gamma) it
// integrates the vector integrand {pdf_A(phi) * tail_{alpha_b,beta_b}(gamma
// phi)} over all alpha_b in [1, max_alpha_b], beta_b in [1, max_beta_b] in
// one adaptive pass. result[(alpha_b-1) * max_beta_b + (beta_b-1)].
std::vector<double> pr_scaled_quad_grid(std::int64_t alpha_a,
                                        std::int64_t beta_a, double gamma,
                                        int max_alpha_b, int max_beta_b,
                                        double abs_tol = 1e-12);

// Terminating 2F1(-m, b; c; z) by direct term recurrence in extended
// precision.
long double hyp2f1_series_ext(std::int64_t m, long double b, long double c,
                              long double z);

// Jacobi polynomial through its hypergeometric series form,
// P_n^{(x,y)}(t) = (x+1)_n / n! * 2F1(-n, n+x+y+1; x+1; (1-t)/2),
// summed term by term in extended precision.
long double jacobi_series_ext(std::int64_t n, long double x, long double y,
                              long double t);

// Fraction of biased +-1 walks (up-probability (1+delta)/(2+delta)) that
// hit +d_star within n_max steps; delta = 0 gives the symmetric null walk.
double walk_hit_frequency(std::int64_t n_max, std::int64_t d_star,
                          double delta, std::int64_t replications,
                          std::uint64_t seed);

}  // namespace oracles
