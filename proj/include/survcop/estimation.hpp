#pragma once

#include <optional>
#include <string>
#include <vector>

#include "survcop/likelihood.hpp"

namespace survcop {

// Packed-coordinate layout for one ModelSpec on one dataset: resolved
// margin structures plus the unconstrained transforms
// [theta] [log kappa1] [log kappa2] [beta1S] [beta1L?] [beta2S] [beta2L?]
// (beta1L/beta2L only for the YP class; PH ties them, PO zeroes them).
struct PackLayout {
  ModelSpec spec;
  BaselineParams skeleton1, skeleton2;  // family + structural metadata
  std::size_t q1 = 0, q2 = 0;           // covariates per margin

  std::size_t dim() const;
  std::vector<std::string> names() const;
};

// Resolves structural metadata from the data: size = ceil(n^{2/5}) unless
// given, BP horizon = 1.01 * max observed margin time, PE grid at
// empirical quantiles of the margin's uncensored times.
PackLayout make_layout(const ModelSpec& spec, const BivariateSurvivalData& data);

std::vector<double> pack(const ParamSet& params, const PackLayout& layout);
ParamSet unpack(std::span<const double> packed, const PackLayout& layout);

struct FitOptions {
  int max_iterations = 500;
  double grad_tol = 1e-5;
  double rel_tol = 1e-10;
  double fd_grad_rel_step = 1e-6;
  double fd_hess_rel_step = 1e-4;
  int multistart = 3;
  std::uint64_t seed = 20240101;  // jitter stream for restarts
  double level = 0.95;
  std::optional<ParamSet> init;            // warm start
  std::vector<double> init_inv_hessian;    // packed-scale seed for BFGS
  bool compute_information = true;
};

struct FitResult {
  ModelSpec spec;
  PackLayout layout;
  ParamSet params;
  double loglik = 0.0;
  std::vector<double> packed;
  std::vector<double> natural;          // estimates on the natural scale
  std::vector<double> covariance;       // packed scale, row-major dim x dim
  std::vector<double> se_packed;
  std::vector<double> se_natural;       // delta method through the links
  std::vector<std::string> names;
  bool converged = false;
  bool hessian_ok = true;               // false when the pseudo-inverse was used
  int n_params = 0;
  int iterations = 0;
  int restarts = 0;
  std::size_t evaluations = 0;
  std::size_t clamped_values = 0;
  std::string message;
};

// Simultaneous maximum likelihood over all parameters (BFGS in the packed
// space, central finite-difference gradients). Initialization fits each
// margin separately and seeds theta from the empirical Kendall tau of
// complete pairs; non-convergence triggers jittered restarts.
FitResult fit(const BivariateSurvivalData& data, const ModelSpec& spec, const FitOptions& options = {});

// Observed information of the packed negative log-likelihood by central
// finite differences at the fitted point.
std::vector<double> observed_information(const FitResult& fitted, const BivariateSurvivalData& data);
std::vector<double> observed_information_at(LoglikWorkspace& ws, const PackLayout& layout,
                                            std::span<const double> packed, double rel_step);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// natural-scale Wald intervals, estimate -/+ z_{(1+level)/2} * se
std::vector<Interval> wald_intervals(const FitResult& fitted, double level);

double aic(const FitResult& fitted);

struct LrResult {
  double stat = 0.0;
  int df = 0;
  double p_value = 1.0;
};

// 2(l_full - l_reduced) against chi-square; requires the reduced class
// nested in the full one with identical copula/baseline specs.
LrResult lr_test(const FitResult& reduced, const FitResult& full);

struct TauEstimate {
  double tau = 0.0;
  Interval interval;
  bool clipped = false;  // theta interval escaped the family domain
};

// Plug-in Kendall tau with the monotone image of the link-scale theta
// Wald interval.
TauEstimate tau_with_interval(const FitResult& fitted, double level = 0.95);

// Empirical quantile (linear interpolation between order statistics).
double sample_quantile(std::vector<double> values, double prob);

}  // namespace survcop
