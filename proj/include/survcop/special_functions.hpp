#pragma once

#include <functional>
#include <vector>

namespace survcop {

// digamma function Psi(x) = d/dx log Gamma(x), x > 0
double digamma(double x);

// log Beta(a, b)
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b) for x in [0, 1], a, b > 0.
double reg_inc_beta(double x, double a, double b);

// log of the Beta(a, b) density at x in (0, 1)
double beta_log_pdf(double x, double a, double b);

// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
double reg_lower_gamma(double a, double x);
double reg_upper_gamma(double a, double x);

// Upper tail of the chi-square distribution with df degrees of freedom.
double chi2_sf(double x, double df);

// Standard normal CDF and quantile.
double normal_cdf(double x);
double normal_quantile(double p);

// Debye function D_1(x) = (1/x) * int_0^x t / (exp(t) - 1) dt.
// Defined for all real x (the integrand is positive on both sides of 0);
// D_1(0) = 1 by continuity.
double debye1(double x);

// Gauss-Legendre nodes and weights on (0, 1).
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadRule gauss_legendre(int n);

// Adaptive integration of f over [a, b] built on composite Gauss-Legendre
// panels with interval halving until the estimate stabilizes below tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

}  // namespace survcop
