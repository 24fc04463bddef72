#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "survcop/estimation.hpp"

namespace survcop {

struct CrossingRequest {
  int margin = 1;
  std::vector<double> x_control, x_treat;
  double bracket_lo = 0.0, bracket_hi = 0.0;  // both zero: default from the data
  std::size_t bootstrap_samples = 1000;
  double level = 0.95;
  std::uint64_t seed = 1;
  int workers = 0;
};

// (1e-6, 1.5 * largest observed time in the margin)
std::pair<double, double> default_bracket(const BivariateSurvivalData& data, int margin);

// Root of S(t | x_control) - S(t | x_treat) = 0 for the requested margin of
// a fitted model, by Brent bracketing (residual < 1e-10, relative interval
// width < 1e-10). The bracket is widened once (x2) when no sign change is
// found; failing that, throws std::runtime_error ("no crossing in
// bracket"), the expected outcome under PH/PO fits.
double crossing_point(const FitResult& fitted, int margin, std::span<const double> x_control,
                      std::span<const double> x_treat, double t_lo, double t_hi);

struct CrossingInterval {
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  bool unreliable = false;  // more than 20% replicate failures
  std::vector<double> replicate_roots;
};

// Nonparametric cluster bootstrap: B resamples of n clusters with
// replacement, warm-started refits, percentile interval over the
// replicate crossing points.
CrossingInterval bootstrap_crossing(const BivariateSurvivalData& data, const ModelSpec& spec,
                                    const FitResult& original, const CrossingRequest& request,
                                    const FitOptions& fit_options = {});

}  // namespace survcop
