#pragma once

#include <span>
#include <string>
#include <utility>

#include "survcop/rng.hpp"

namespace survcop {

enum class CopulaFamily { AMH, Clayton, Frank, GH, Joe };

const char* family_name(CopulaFamily f);
CopulaFamily family_from_name(const std::string& name);

// Dependence parameter theta with its family-specific domain.
// Bivariate domains: AMH [-1, 1]; Clayton (0, inf); Frank R \ {0};
// GH [1, inf); Joe [1, inf). GH/Joe theta = 1 means independence and is
// allowed; other boundaries are excluded.
struct CopulaParam {
  CopulaFamily family = CopulaFamily::Clayton;
  double theta = 1.0;
};

// throws std::domain_error when theta is outside the bivariate domain
void validate_param(const CopulaParam& p);
bool param_in_domain(const CopulaParam& p);

// Additive generator psi_theta(w), w >= 0, and its inverse on (0, 1].
double generator_value(const CopulaParam& p, double w);
double generator_inverse(const CopulaParam& p, double u);

// Copula CDF. d = u.size() >= 2. For d > 2 the domain narrows to the
// general-d parameter ranges (AMH [0, 1], Frank (0, inf)).
double copula_cdf(const CopulaParam& p, std::span<const double> u);
double copula_cdf(const CopulaParam& p, double u1, double u2);

// First partial dC/du_wrt (wrt is 1 or 2), the conditional CDF of the
// other coordinate. Arguments must lie in the open interval (0, 1).
double copula_partial(const CopulaParam& p, double u1, double u2, int wrt);

// Copula density c(u1, u2) = d2C/du1du2 on (0, 1)^2.
double copula_density(const CopulaParam& p, double u1, double u2);

// Log-scale versions used by the likelihood (avoid underflow for extreme
// survival values).
double log_copula_cdf(const CopulaParam& p, double u1, double u2);
double log_copula_partial(const CopulaParam& p, double u1, double u2, int wrt);
double log_copula_density(const CopulaParam& p, double u1, double u2);

// Kendall's tau as a function of theta (closed forms; Debye D1 for Frank,
// digamma for Joe). Accepts theta in the closure of the domain.
double kendall_tau(const CopulaParam& p);

// attainable tau range (closure) for a family
std::pair<double, double> tau_range(CopulaFamily family);

// Inverse of the tau map. AMH clamps tau above 1/3 to theta = 1 (flag set
// through *clamped when provided); unattainable tau values throw.
double tau_inverse(CopulaFamily family, double tau, bool* clamped = nullptr);

// One pair from the copula by the conditional-distribution method:
// closed-form conditional inverses for AMH/Clayton/Frank, monotone
// bisection for GH/Joe.
std::pair<double, double> sample_pair(const CopulaParam& p, Rng& rng);

// Unconstrained parameterization of theta used by the optimizer:
// log theta (Clayton), log(theta - 1) (GH/Joe), atanh theta (AMH),
// identity (Frank).
double theta_to_unconstrained(CopulaFamily family, double theta);
double theta_from_unconstrained(CopulaFamily family, double z);

}  // namespace survcop
