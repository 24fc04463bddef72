#include "survcop/simulation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace survcop {

void validate_scenario(Scenario& s) {
  if (s.n < 1) throw std::invalid_argument("scenario: needs n >= 1");
  if (!(s.censor_cap1 > 0.0) || !(s.censor_cap2 > 0.0)) {
    throw std::invalid_argument("scenario: censoring caps must be positive");
  }
  if (s.baseline != BaselineFamily::Weibull && s.baseline != BaselineFamily::ExpWeibull) {
    throw std::invalid_argument("scenario: generation baseline must be weibull or expweibull");
  }
  std::size_t nk = s.baseline == BaselineFamily::Weibull ? 2 : 3;
  if (s.kappa1.size() != nk || s.kappa2.size() != nk) {
    throw std::invalid_argument("scenario: kappa length does not match the generation baseline");
  }
  if (s.beta1_short.size() != s.beta1_long.size() || s.beta2_short.size() != s.beta2_long.size()) {
    throw std::invalid_argument("scenario: beta vectors must have matching lengths");
  }
  try {
    bool clamped = false;
    tau_inverse(s.copula, s.tau, &clamped);
    if (clamped) s.tau_clamped = true;
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(std::string("scenario: ") + e.what());
  }
  // class constraints materialized so the truth grid is complete
  if (s.klass == RegressionClass::PH) {
    s.beta1_long = s.beta1_short;
    s.beta2_long = s.beta2_short;
  } else if (s.klass == RegressionClass::PO) {
    s.beta1_long.assign(s.beta1_short.size(), 0.0);
    s.beta2_long.assign(s.beta2_short.size(), 0.0);
  }
}

ScenarioTruth scenario_truth(const Scenario& s) {
  Scenario copy = s;
  validate_scenario(copy);
  ScenarioTruth t;
  t.theta = tau_inverse(copy.copula, copy.tau);
  t.tau = kendall_tau({copy.copula, t.theta});
  return t;
}

BivariateSurvivalData generate_dataset(const Scenario& s_in, Rng& rng) {
  Scenario s = s_in;
  validate_scenario(s);
  const double theta = tau_inverse(s.copula, s.tau);
  CopulaParam cop{s.copula, theta};

  BaselineParams b1{s.baseline, s.kappa1, 0.0, {}};
  BaselineParams b2{s.baseline, s.kappa2, 0.0, {}};
  RegressionSpec r1 = make_regression(RegressionClass::YP, s.beta1_short, s.beta1_long);
  RegressionSpec r2 = make_regression(RegressionClass::YP, s.beta2_short, s.beta2_long);

  BivariateSurvivalData data;
  data.y1.resize(s.n);
  data.y2.resize(s.n);
  data.d1.resize(s.n);
  data.d2.resize(s.n);
  data.x1.resize(s.n);
  data.x2.resize(s.n);
  data.x1_names = {"treat", "z"};
  data.x2_names = {"treat", "z"};
  for (std::size_t i = 0; i < s.n; ++i) {
    double xb = rng.bernoulli(0.5) ? 1.0 : 0.0;
    double xn = rng.normal();
    std::vector<double> x{xb, xn};
    auto [u1, u2] = sample_pair(cop, rng);
    double t1 = yp_inverse_survival(r1, x, b1, u1);
    double t2 = yp_inverse_survival(r2, x, b2, u2);
    double a1 = rng.uniform(0.0, s.censor_cap1);
    double a2 = rng.uniform(0.0, s.censor_cap2);
    data.y1[i] = std::min(t1, a1);
    data.d1[i] = t1 <= a1 ? 1 : 0;
    data.y2[i] = std::min(t2, a2);
    data.d2[i] = t2 <= a2 ? 1 : 0;
    data.x1[i] = x;
    data.x2[i] = std::move(x);
  }
  return data;
}

McStats mc_statistics(std::span<const double> estimates, std::span<const double> ses,
                      std::span<const double> lowers, std::span<const double> uppers, double truth) {
  const std::size_t m = estimates.size();
  if (ses.size() != m || lowers.size() != m || uppers.size() != m) {
    throw std::invalid_argument("mc_statistics: input lengths disagree");
  }
  if (m == 0) throw std::invalid_argument("mc_statistics: empty inputs");
  if (truth == 0.0) throw std::invalid_argument("mc_statistics: relative bias undefined at truth = 0");
  McStats st;
  st.truth = truth;
  st.used = m;
  double sum = 0.0, sum_se = 0.0, sum_rb = 0.0, sum_lo = 0.0, sum_hi = 0.0;
  std::size_t covered = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sum += estimates[i];
    sum_se += ses[i];
    sum_rb += (estimates[i] - truth) / std::fabs(truth);
    sum_lo += lowers[i];
    sum_hi += uppers[i];
    if (lowers[i] <= truth && truth <= uppers[i]) ++covered;
  }
  st.ae = sum / m;
  st.ase = sum_se / m;
  st.arb = 100.0 * sum_rb / m;
  st.alb = sum_lo / m;
  st.aub = sum_hi / m;
  st.cr = 100.0 * static_cast<double>(covered) / m;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) ss += (estimates[i] - st.ae) * (estimates[i] - st.ae);
  st.sde = m > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
  return st;
}

std::pair<double, double> failure_rates(const BivariateSurvivalData& data) {
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    e1 += data.d1[i];
    e2 += data.d2[i];
  }
  double n = static_cast<double>(data.size());
  return {e1 / n, e2 / n};
}

int default_workers() {
  if (const char* env = std::getenv("SURVCOP_WORKERS")) {
    int w = std::atoi(env);
    if (w >= 1) return w;
  }
  unsigned int hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace {

struct ReplicaResult {
  struct PerSpec {
    bool converged = false;
    double aic = 0.0;
    double loglik = 0.0;
    std::map<std::string, std::array<double, 4>> values;  // est, se, lo, hi
  };
  std::vector<PerSpec> specs;
};

std::map<std::string, double> truth_map(const Scenario& s, const ScenarioTruth& t, const ModelSpec& spec) {
  std::map<std::string, double> truths;
  truths["tau"] = t.tau;
  if (spec.copula == s.copula) truths["theta"] = t.theta;
  if (spec.baseline == s.baseline && s.baseline == BaselineFamily::Weibull) {
    truths["alpha1"] = s.kappa1[0];
    truths["lambda1"] = s.kappa1[1];
    truths["alpha2"] = s.kappa2[0];
    truths["lambda2"] = s.kappa2[1];
  }
  const bool beta_truths = spec.klass == RegressionClass::YP || spec.klass == s.klass;
  if (beta_truths) {
    for (std::size_t l = 0; l < s.beta1_short.size(); ++l) {
      truths["beta1S_" + std::to_string(l + 1)] = s.beta1_short[l];
      truths["beta2S_" + std::to_string(l + 1)] = s.beta2_short[l];
      if (spec.klass == RegressionClass::YP) {
        truths["beta1L_" + std::to_string(l + 1)] = s.beta1_long[l];
        truths["beta2L_" + std::to_string(l + 1)] = s.beta2_long[l];
      }
    }
  }
  return truths;
}

}  // namespace

McReport run_mc(const Scenario& s_in, std::size_t replicas, const std::vector<ModelSpec>& fit_specs,
                int workers, const FitOptions& fit_options, bool keep_records) {
  Scenario s = s_in;
  validate_scenario(s);
  if (replicas < 1) throw std::invalid_argument("run_mc: needs at least one replica");
  if (fit_specs.empty()) throw std::invalid_argument("run_mc: needs at least one fit spec");
  if (workers < 1) workers = default_workers();

  std::vector<ReplicaResult> results(replicas);
  std::atomic<std::size_t> next{0};

  auto worker_fn = [&]() {
    for (;;) {
      std::size_t r = next.fetch_add(1);
      if (r >= replicas) return;
      Rng rng = Rng::substream(s.seed, r);
      BivariateSurvivalData data = generate_dataset(s, rng);
      ReplicaResult& out = results[r];
      out.specs.resize(fit_specs.size());
      for (std::size_t k = 0; k < fit_specs.size(); ++k) {
        FitOptions opts = fit_options;
        opts.seed = s.seed ^ (0x9E3779B97F4A7C15ULL * (r * fit_specs.size() + k + 1));
        auto& slot = out.specs[k];
        try {
          FitResult f = fit(data, fit_specs[k], opts);
          slot.converged = f.converged;
          slot.loglik = f.loglik;
          slot.aic = aic(f);
          if (f.converged) {
            auto intervals = wald_intervals(f, opts.level);
            for (std::size_t i = 0; i < f.names.size(); ++i) {
              slot.values[f.names[i]] = {f.natural[i], f.se_natural[i], intervals[i].lower, intervals[i].upper};
            }
            TauEstimate te = tau_with_interval(f, opts.level);
            // delta-method tau standard error through the tau(theta) map
            double h = 1e-5 * std::max(1.0, std::fabs(f.params.theta));
            double dtau = 0.0;
            CopulaParam cp{f.spec.copula, f.params.theta};
            if (param_in_domain({cp.family, cp.theta + h}) && param_in_domain({cp.family, cp.theta - h})) {
              dtau = (kendall_tau({cp.family, cp.theta + h}) - kendall_tau({cp.family, cp.theta - h})) / (2.0 * h);
            }
            double se_tau = std::fabs(dtau) * (f.se_natural.empty() ? 0.0 : f.se_natural[0]);
            slot.values["tau"] = {te.tau, se_tau, te.interval.lower, te.interval.upper};
          }
        } catch (const std::exception&) {
          slot.converged = false;
        }
      }
    }
  };

  if (workers == 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn);
    for (auto& th : pool) th.join();
  }

  ScenarioTruth truth = scenario_truth(s);
  McReport report;
  report.scenario = s;
  report.replicas = replicas;

  // AIC choice per replica among converged fits
  std::vector<std::size_t> choice_counts(fit_specs.size(), 0);
  std::size_t choice_total = 0;
  for (std::size_t r = 0; r < replicas; ++r) {
    double best = std::numeric_limits<double>::infinity();
    long pick = -1;
    for (std::size_t k = 0; k < fit_specs.size(); ++k) {
      const auto& slot = results[r].specs[k];
      if (slot.converged && slot.aic < best) {
        best = slot.aic;
        pick = static_cast<long>(k);
      }
    }
    if (pick >= 0) {
      ++choice_counts[pick];
      ++choice_total;
    }
  }

  for (std::size_t k = 0; k < fit_specs.size(); ++k) {
    McSpecReport sr;
    sr.spec = fit_specs[k];
    sr.label = std::string(family_name(fit_specs[k].copula)) + "/" +
               baseline_name(fit_specs[k].baseline) + "/" + class_name(fit_specs[k].klass);
    double aic_sum = 0.0;
    std::vector<std::size_t> used;
    for (std::size_t r = 0; r < replicas; ++r) {
      if (results[r].specs[k].converged) {
        used.push_back(r);
        aic_sum += results[r].specs[k].aic;
      } else {
        ++sr.nonconverged;
      }
    }
    sr.converged = used.size();
    sr.mean_aic = used.empty() ? 0.0 : aic_sum / static_cast<double>(used.size());
    sr.choice_proportion = choice_total ? static_cast<double>(choice_counts[k]) / choice_total : 0.0;

    auto truths = truth_map(s, truth, fit_specs[k]);
    if (!used.empty()) {
      for (const auto& [name, tval] : truths) {
        if (tval == 0.0) continue;
        std::vector<double> est, se, lo, hi;
        bool have_all = true;
        for (std::size_t r : used) {
          auto it = results[r].specs[k].values.find(name);
          if (it == results[r].specs[k].values.end()) {
            have_all = false;
            break;
          }
          est.push_back(it->second[0]);
          se.push_back(it->second[1]);
          lo.push_back(it->second[2]);
          hi.push_back(it->second[3]);
        }
        if (have_all && !est.empty()) sr.stats[name] = mc_statistics(est, se, lo, hi, tval);
      }
    }
    report.specs.push_back(std::move(sr));
  }

  if (keep_records) {
    report.records.resize(replicas);
    for (std::size_t r = 0; r < replicas; ++r) {
      auto& rec = report.records[r];
      for (std::size_t k = 0; k < fit_specs.size(); ++k) {
        const auto& slot = results[r].specs[k];
        rec.aic.push_back(slot.aic);
        rec.loglik.push_back(slot.loglik);
        rec.converged.push_back(slot.converged ? 1 : 0);
        std::map<std::string, double> ests;
        for (const auto& [name, vals] : slot.values) ests[name] = vals[0];
        rec.estimates.push_back(std::move(ests));
      }
    }
  }
  return report;
}

}  // namespace survcop
