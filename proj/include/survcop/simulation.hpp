#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "survcop/estimation.hpp"
#include "survcop/likelihood.hpp"
#include "survcop/rng.hpp"

namespace survcop {

// One data-generation scenario: covariates X_1 ~ Bern(0.5), X_2 ~ N(0, 1)
// shared by both margins, copula pair via the conditional method, times by
// marginal survival inversion, censoring by U(0, a_j) thresholds.
struct Scenario {
  std::size_t n = 500;
  CopulaFamily copula = CopulaFamily::Clayton;
  double tau = 0.25;
  BaselineFamily baseline = BaselineFamily::Weibull;  // Weibull or ExpWeibull
  RegressionClass klass = RegressionClass::YP;
  std::vector<double> kappa1{1.2, 0.8};
  std::vector<double> kappa2{1.6, 1.2};
  std::vector<double> beta1_short{-0.7, 0.4};
  std::vector<double> beta1_long{0.8, -0.6};
  std::vector<double> beta2_short{-0.9, 0.6};
  std::vector<double> beta2_long{1.0, -0.8};
  double censor_cap1 = 6.0;
  double censor_cap2 = 4.0;
  std::uint64_t seed = 1;
  bool tau_clamped = false;  // set by validate_scenario for AMH above 1/3
};

void validate_scenario(Scenario& s);

// truth on the tracked-parameter grid used by MC statistics
struct ScenarioTruth {
  double theta = 0.0;
  double tau = 0.0;
};
ScenarioTruth scenario_truth(const Scenario& s);

BivariateSurvivalData generate_dataset(const Scenario& s, Rng& rng);

// Monte Carlo summary for one tracked quantity.
struct McStats {
  double truth = 0.0;
  double ae = 0.0;   // mean of point estimates
  double sde = 0.0;  // standard deviation of point estimates
  double ase = 0.0;  // mean of standard-error estimates
  double arb = 0.0;  // mean relative bias, percent
  double alb = 0.0;  // mean lower bound
  double aub = 0.0;  // mean upper bound
  double cr = 0.0;   // coverage rate, percent
  std::size_t used = 0;
};

McStats mc_statistics(std::span<const double> estimates, std::span<const double> ses,
                      std::span<const double> lowers, std::span<const double> uppers, double truth);

struct McSpecReport {
  ModelSpec spec;
  std::string label;
  std::map<std::string, McStats> stats;  // keyed by packed-coordinate name or "tau"
  double mean_aic = 0.0;
  double choice_proportion = 0.0;  // smallest AIC among converged specs per replica
  std::size_t converged = 0;
  std::size_t nonconverged = 0;
};

struct McReport {
  Scenario scenario;
  std::size_t replicas = 0;
  std::vector<McSpecReport> specs;
  // per-replica records for file output: [replica][spec] -> (aic, loglik, converged)
  struct ReplicaRecord {
    std::vector<double> aic;
    std::vector<double> loglik;
    std::vector<int> converged;
    std::vector<std::map<std::string, double>> estimates;
  };
  std::vector<ReplicaRecord> records;
};

// Runs M replicas: generate, fit every spec, aggregate. Replica r uses the
// substream (seed, r), so results do not depend on the worker count.
McReport run_mc(const Scenario& s, std::size_t replicas, const std::vector<ModelSpec>& fit_specs,
                int workers, const FitOptions& fit_options = {}, bool keep_records = false);

// failure (event) proportion per margin of a dataset
std::pair<double, double> failure_rates(const BivariateSurvivalData& data);

int default_workers();

}  // namespace survcop
