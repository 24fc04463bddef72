#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace survcop {

enum class BaselineFamily { Weibull, ExpWeibull, BP, PE };

const char* baseline_name(BaselineFamily f);
BaselineFamily baseline_from_name(const std::string& name);

// Baseline parameters. The kappa vector holds, by family:
//   Weibull     {alpha, lambda}
//   ExpWeibull  {alpha, lambda, xi}               (data generation only)
//   BP          {gamma_1, ..., gamma_m} with horizon upsilon
//   PE          {lambda_1, ..., lambda_p} with cut grid e_1 < ... < e_p
// The PE hazard extends beyond e_p at rate lambda_p.
struct BaselineParams {
  BaselineFamily family = BaselineFamily::Weibull;
  std::vector<double> kappa;
  double upsilon = 0.0;
  std::vector<double> grid;
};

void validate_baseline(const BaselineParams& b);

double baseline_hazard(const BaselineParams& b, double t);
double baseline_cum_hazard(const BaselineParams& b, double t);
double baseline_survival(const BaselineParams& b, double t);
double baseline_density(const BaselineParams& b, double t);
double baseline_odds(const BaselineParams& b, double t);       // R = exp(H) - 1
double baseline_odds_deriv(const BaselineParams& b, double t); // r = h exp(H)

// Bernstein basis at time t: g_k = (1/upsilon) f_B(t/upsilon; k, m-k+1) and
// G_k = I_{t/upsilon}(k, m-k+1), k = 1..m. Requires 0 <= t <= upsilon.
void bp_basis(int m, double upsilon, double t, std::vector<double>& g, std::vector<double>& G);

// ceil(n^{2/5}): shared size rule for the BP degree and the PE interval count
int structural_size(std::size_t n);

// t such that cum_hazard(t) = H: closed form for Weibull/ExpWeibull/PE,
// monotone bisection over [0, upsilon] for BP.
double cum_hazard_inverse(const BaselineParams& b, double H);

}  // namespace survcop
