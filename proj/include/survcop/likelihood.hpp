#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "survcop/baseline.hpp"
#include "survcop/copula.hpp"
#include "survcop/regression.hpp"

namespace survcop {

// n clusters of (y1, d1, y2, d2) with margin-specific covariate rows.
struct BivariateSurvivalData {
  std::vector<double> y1, y2;
  std::vector<int> d1, d2;
  std::vector<std::vector<double>> x1, x2;
  std::vector<std::string> x1_names, x2_names;

  std::size_t size() const { return y1.size(); }
};

// throws std::invalid_argument on nonpositive times, indicators outside
// {0,1}, or ragged covariate rows
void validate_data(const BivariateSurvivalData& data);

// Structural metadata for a fitted margin; zero/empty fields are resolved
// from the data (size = ceil(n^{2/5}), BP horizon = 1.01 * max observed
// time, PE grid at empirical quantiles of the uncensored times).
struct MarginStructure {
  int size = 0;
  double upsilon = 0.0;
  std::vector<double> grid;
};

// Model to fit: one copula, one baseline family and one regression class
// shared by both margins.
struct ModelSpec {
  CopulaFamily copula = CopulaFamily::Clayton;
  BaselineFamily baseline = BaselineFamily::Weibull;
  RegressionClass klass = RegressionClass::YP;
  MarginStructure margin1, margin2;
};

// Full parameter collection {theta, kappa_1, kappa_2, beta^(S), beta^(L)}.
// BaselineParams carry the structural metadata along with kappa so a
// ParamSet evaluates standalone.
struct ParamSet {
  double theta = 1.0;
  BaselineParams baseline1, baseline2;
  std::vector<double> beta1_short, beta1_long, beta2_short, beta2_long;

  RegressionSpec regression1(RegressionClass klass) const;
  RegressionSpec regression2(RegressionClass klass) const;
};

struct LoglikDiagnostics {
  std::size_t evaluations = 0;
  std::size_t clamped_survival_values = 0;
  long first_nonfinite_cluster = -1;
};

struct ClusterObservation {
  double y1 = 0.0, y2 = 0.0;
  int d1 = 0, d2 = 0;
  std::span<const double> x1, x2;
};

// Log of one cluster's likelihood factor, by censoring pattern, with
// u_j = S_j(y_j | x_j):
//   (0,0) log C(u1, u2)
//   (1,0) log dC/du1 + log f1(y1)
//   (0,1) log dC/du2 + log f2(y2)
//   (1,1) log c(u1, u2) + log f1(y1) + log f2(y2)
double cluster_loglik(const CopulaParam& cop, const RegressionSpec& reg1, const BaselineParams& b1,
                      const RegressionSpec& reg2, const BaselineParams& b2,
                      const ClusterObservation& obs, LoglikDiagnostics* diag = nullptr);

// Sequential sum of cluster_loglik over the data (fixed order).
double total_loglik(const ModelSpec& spec, const ParamSet& params,
                    const BivariateSurvivalData& data, LoglikDiagnostics* diag = nullptr);

// Evaluator used by the optimizer. Caches per-margin basis quantities that
// depend only on the data (BP basis rows, PE interval widths, log times)
// and the margin survival/density values at a base point, so finite
// differences that perturb a single block only recompute that block.
class LoglikWorkspace {
 public:
  // skeleton1/skeleton2 carry each margin's baseline family and structural
  // metadata (kappa values are ignored here)
  LoglikWorkspace(const ModelSpec& spec, const BivariateSurvivalData& data,
                  const BaselineParams& skeleton1, const BaselineParams& skeleton2);

  double eval_full(const ParamSet& p);
  // perturbations against the base point set by the last eval_full
  double eval_theta(double theta);
  double eval_margin(int margin, const ParamSet& p);

  // marginal YP log-likelihood sum_i [delta_i log f + (1 - delta_i) log S]
  double eval_marginal(int margin, const BaselineParams& b, std::span<const double> beta_short,
                       std::span<const double> beta_long);

  const LoglikDiagnostics& diagnostics() const { return diag_; }
  void reset_diagnostics() { diag_ = {}; }
  const ModelSpec& spec() const { return spec_; }

 private:
  struct MarginCache {
    std::vector<double> y;
    std::vector<int> dd;
    std::vector<double> log_y;
    std::vector<std::vector<double>> bp_g, bp_G;
    std::vector<int> pe_idx;
    std::vector<std::vector<double>> pe_w;
  };

  void build_cache(MarginCache& mc, std::span<const double> y, std::span<const int> dd,
                   const BaselineParams& skeleton);
  void margin_values(const MarginCache& mc, const BaselineParams& b,
                     std::span<const double> beta_short, std::span<const double> beta_long,
                     const std::vector<std::vector<double>>& x,
                     std::vector<double>& log_s, std::vector<double>& log_f) const;
  double combine(double theta, const std::vector<double>& ls1, const std::vector<double>& lf1,
                 const std::vector<double>& ls2, const std::vector<double>& lf2);

  ModelSpec spec_;
  const BivariateSurvivalData& data_;
  MarginCache m1_, m2_;
  std::vector<double> ls1_, lf1_, ls2_, lf2_;
  std::vector<double> scratch_ls_, scratch_lf_;
  double base_theta_ = 1.0;
  LoglikDiagnostics diag_;
};

// Kendall's tau of paired samples (concordant/discordant counting).
double empirical_kendall_tau(std::span<const double> x, std::span<const double> y);

}  // namespace survcop
