#include "survcop/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace survcop {

namespace {

constexpr double kUnitClampLo = 1e-15;
constexpr double kUnitClampHi = 1.0 - 1e-15;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double clamp_unit(double u, LoglikDiagnostics* diag) {
  if (u < kUnitClampLo || u > kUnitClampHi) {
    if (diag) ++diag->clamped_survival_values;
    return std::clamp(u, kUnitClampLo, kUnitClampHi);
  }
  return u;
}

}  // namespace

RegressionSpec ParamSet::regression1(RegressionClass klass) const {
  return make_regression(klass, beta1_short, klass == RegressionClass::YP ? beta1_long : std::vector<double>{});
}

RegressionSpec ParamSet::regression2(RegressionClass klass) const {
  return make_regression(klass, beta2_short, klass == RegressionClass::YP ? beta2_long : std::vector<double>{});
}

void validate_data(const BivariateSurvivalData& data) {
  const std::size_t n = data.size();
  if (data.y2.size() != n || data.d1.size() != n || data.d2.size() != n ||
      data.x1.size() != n || data.x2.size() != n) {
    throw std::invalid_argument("data: column lengths disagree");
  }
  std::size_t q1 = n ? data.x1[0].size() : 0;
  std::size_t q2 = n ? data.x2[0].size() : 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(data.y1[i] > 0.0) || !(data.y2[i] > 0.0) ||
        !std::isfinite(data.y1[i]) || !std::isfinite(data.y2[i])) {
      throw std::invalid_argument("data: survival times must be strictly positive (cluster " +
                                  std::to_string(i) + ")");
    }
    if ((data.d1[i] != 0 && data.d1[i] != 1) || (data.d2[i] != 0 && data.d2[i] != 1)) {
      throw std::invalid_argument("data: censoring indicators must be 0 or 1 (cluster " +
                                  std::to_string(i) + ")");
    }
    if (data.x1[i].size() != q1 || data.x2[i].size() != q2) {
      throw std::invalid_argument("data: ragged covariate rows (cluster " + std::to_string(i) + ")");
    }
    for (double v : data.x1[i]) {
      if (!std::isfinite(v)) throw std::invalid_argument("data: non-finite covariate");
    }
    for (double v : data.x2[i]) {
      if (!std::isfinite(v)) throw std::invalid_argument("data: non-finite covariate");
    }
  }
}

double cluster_loglik(const CopulaParam& cop, const RegressionSpec& reg1, const BaselineParams& b1,
                      const RegressionSpec& reg2, const BaselineParams& b2,
                      const ClusterObservation& obs, LoglikDiagnostics* diag) {
  double u1 = clamp_unit(yp_survival(reg1, obs.x1, b1, obs.y1), diag);
  double u2 = clamp_unit(yp_survival(reg2, obs.x2, b2, obs.y2), diag);
  double ll = 0.0;
  if (obs.d1 == 0 && obs.d2 == 0) {
    ll = log_copula_cdf(cop, u1, u2);
  } else if (obs.d1 == 1 && obs.d2 == 0) {
    ll = log_copula_partial(cop, u1, u2, 1) + yp_log_density(reg1, obs.x1, b1, obs.y1);
  } else if (obs.d1 == 0 && obs.d2 == 1) {
    ll = log_copula_partial(cop, u1, u2, 2) + yp_log_density(reg2, obs.x2, b2, obs.y2);
  } else {
    ll = log_copula_density(cop, u1, u2) + yp_log_density(reg1, obs.x1, b1, obs.y1) +
         yp_log_density(reg2, obs.x2, b2, obs.y2);
  }
  return ll;
}

double total_loglik(const ModelSpec& spec, const ParamSet& params,
                    const BivariateSurvivalData& data, LoglikDiagnostics* diag) {
  CopulaParam cop{spec.copula, params.theta};
  RegressionSpec reg1 = params.regression1(spec.klass);
  RegressionSpec reg2 = params.regression2(spec.klass);
  double sum = 0.0;
  if (diag) ++diag->evaluations;
  for (std::size_t i = 0; i < data.size(); ++i) {
    ClusterObservation obs{data.y1[i], data.y2[i], data.d1[i], data.d2[i],
                           data.x1[i], data.x2[i]};
    double ll = cluster_loglik(cop, reg1, params.baseline1, reg2, params.baseline2, obs, diag);
    if (!std::isfinite(ll)) {
      if (diag && diag->first_nonfinite_cluster < 0) diag->first_nonfinite_cluster = static_cast<long>(i);
      return kNegInf;
    }
    sum += ll;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// LoglikWorkspace

LoglikWorkspace::LoglikWorkspace(const ModelSpec& spec, const BivariateSurvivalData& data,
                                 const BaselineParams& skeleton1, const BaselineParams& skeleton2)
    : spec_(spec), data_(data) {
  validate_data(data);
  if (data.size() == 0) throw std::invalid_argument("LoglikWorkspace: empty dataset");
  build_cache(m1_, data_.y1, data_.d1, skeleton1);
  build_cache(m2_, data_.y2, data_.d2, skeleton2);
}

void LoglikWorkspace::build_cache(MarginCache& mc, std::span<const double> y,
                                  std::span<const int> dd, const BaselineParams& skeleton) {
  const std::size_t n = y.size();
  mc.y.assign(y.begin(), y.end());
  mc.dd.assign(dd.begin(), dd.end());
  mc.log_y.resize(n);
  for (std::size_t i = 0; i < n; ++i) mc.log_y[i] = std::log(y[i]);
  if (skeleton.family == BaselineFamily::BP) {
    int m = static_cast<int>(skeleton.kappa.size());
    mc.bp_g.assign(n, {});
    mc.bp_G.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] > skeleton.upsilon) {
        throw std::domain_error("LoglikWorkspace: observed time beyond the BP horizon");
      }
      bp_basis(m, skeleton.upsilon, y[i], mc.bp_g[i], mc.bp_G[i]);
    }
  } else if (skeleton.family == BaselineFamily::PE) {
    const auto& grid = skeleton.grid;
    mc.pe_idx.resize(n);
    mc.pe_w.assign(n, std::vector<double>(grid.size(), 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      double prev = 0.0;
      int idx = static_cast<int>(grid.size()) - 1;
      for (std::size_t k = 0; k < grid.size(); ++k) {
        if (y[i] <= grid[k]) {
          mc.pe_w[i][k] = y[i] - prev;
          idx = static_cast<int>(k);
          break;
        }
        mc.pe_w[i][k] = grid[k] - prev;
        prev = grid[k];
      }
      if (y[i] > grid.back()) mc.pe_w[i].back() = y[i] - (grid.size() > 1 ? grid[grid.size() - 2] : 0.0);
      mc.pe_idx[i] = idx;
    }
  }
}

void LoglikWorkspace::margin_values(const MarginCache& mc, const BaselineParams& b,
                                    std::span<const double> beta_short,
                                    std::span<const double> beta_long,
                                    const std::vector<std::vector<double>>& x,
                                    std::vector<double>& log_s, std::vector<double>& log_f) const {
  const std::size_t n = mc.y.size();
  log_s.resize(n);
  log_f.resize(n);
  const std::size_t q = beta_short.size();
  for (std::size_t i = 0; i < n; ++i) {
    double H0 = 0.0, h0 = 0.0;
    switch (b.family) {
      case BaselineFamily::Weibull: {
        const double alpha = b.kappa[0], lambda = b.kappa[1];
        H0 = lambda * std::exp(alpha * mc.log_y[i]);
        if (mc.dd[i]) h0 = alpha * H0 / mc.y[i];
        break;
      }
      case BaselineFamily::BP: {
        H0 = 0.0;
        const auto& G = mc.bp_G[i];
        for (std::size_t k = 0; k < b.kappa.size(); ++k) H0 += b.kappa[k] * G[k];
        if (mc.dd[i]) {
          const auto& g = mc.bp_g[i];
          for (std::size_t k = 0; k < b.kappa.size(); ++k) h0 += b.kappa[k] * g[k];
        }
        break;
      }
      case BaselineFamily::PE: {
        H0 = 0.0;
        const auto& w = mc.pe_w[i];
        for (std::size_t k = 0; k < b.kappa.size(); ++k) H0 += b.kappa[k] * w[k];
        if (mc.dd[i]) h0 = b.kappa[mc.pe_idx[i]];
        break;
      }
      case BaselineFamily::ExpWeibull: {
        H0 = baseline_cum_hazard(b, mc.y[i]);
        if (mc.dd[i]) h0 = baseline_hazard(b, mc.y[i]);
        break;
      }
    }
    double etaS = 0.0, etaL = 0.0;
    const auto& xi = x[i];
    for (std::size_t l = 0; l < q; ++l) {
      etaS += xi[l] * beta_short[l];
      etaL += xi[l] * beta_long[l];
    }
    const double phiS = std::exp(etaS);
    const double phiL = std::exp(etaL);
    const double R0 = std::expm1(H0);
    const double ls = -phiL * std::log1p(phiS / phiL * R0);
    log_s[i] = ls;
    if (mc.dd[i]) {
      const double S0 = std::exp(-H0);
      log_f[i] = etaS + etaL + std::log(h0) - std::log(phiS * (1.0 - S0) + phiL * S0) + ls;
    } else {
      log_f[i] = 0.0;
    }
  }
}

double LoglikWorkspace::combine(double theta, const std::vector<double>& ls1,
                                const std::vector<double>& lf1, const std::vector<double>& ls2,
                                const std::vector<double>& lf2) {
  ++diag_.evaluations;
  CopulaParam cop{spec_.copula, theta};
  if (!param_in_domain(cop)) return kNegInf;
  const std::size_t n = data_.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double u1 = clamp_unit(std::exp(ls1[i]), &diag_);
    double u2 = clamp_unit(std::exp(ls2[i]), &diag_);
    double ll;
    const int d1 = m1_.dd[i], d2 = m2_.dd[i];
    if (d1 == 0 && d2 == 0) {
      ll = log_copula_cdf(cop, u1, u2);
    } else if (d1 == 1 && d2 == 0) {
      ll = log_copula_partial(cop, u1, u2, 1) + lf1[i];
    } else if (d1 == 0 && d2 == 1) {
      ll = log_copula_partial(cop, u1, u2, 2) + lf2[i];
    } else {
      ll = log_copula_density(cop, u1, u2) + lf1[i] + lf2[i];
    }
    if (!std::isfinite(ll)) {
      if (diag_.first_nonfinite_cluster < 0) diag_.first_nonfinite_cluster = static_cast<long>(i);
      return kNegInf;
    }
    sum += ll;
  }
  return sum;
}

double LoglikWorkspace::eval_full(const ParamSet& p) {
  margin_values(m1_, p.baseline1, p.beta1_short, p.beta1_long, data_.x1, ls1_, lf1_);
  margin_values(m2_, p.baseline2, p.beta2_short, p.beta2_long, data_.x2, ls2_, lf2_);
  base_theta_ = p.theta;
  return combine(p.theta, ls1_, lf1_, ls2_, lf2_);
}

double LoglikWorkspace::eval_theta(double theta) {
  return combine(theta, ls1_, lf1_, ls2_, lf2_);
}

double LoglikWorkspace::eval_margin(int margin, const ParamSet& p) {
  if (margin == 1) {
    margin_values(m1_, p.baseline1, p.beta1_short, p.beta1_long, data_.x1, scratch_ls_, scratch_lf_);
    return combine(base_theta_, scratch_ls_, scratch_lf_, ls2_, lf2_);
  }
  margin_values(m2_, p.baseline2, p.beta2_short, p.beta2_long, data_.x2, scratch_ls_, scratch_lf_);
  return combine(base_theta_, ls1_, lf1_, scratch_ls_, scratch_lf_);
}

double LoglikWorkspace::eval_marginal(int margin, const BaselineParams& b,
                                      std::span<const double> beta_short,
                                      std::span<const double> beta_long) {
  ++diag_.evaluations;
  const MarginCache& mc = (margin == 1) ? m1_ : m2_;
  const auto& x = (margin == 1) ? data_.x1 : data_.x2;
  margin_values(mc, b, beta_short, beta_long, x, scratch_ls_, scratch_lf_);
  double sum = 0.0;
  for (std::size_t i = 0; i < mc.y.size(); ++i) {
    double ll = mc.dd[i] ? scratch_lf_[i] : scratch_ls_[i];
    if (!std::isfinite(ll)) return -std::numeric_limits<double>::infinity();
    sum += ll;
  }
  return sum;
}

double empirical_kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("empirical_kendall_tau: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("empirical_kendall_tau: needs at least two pairs");
  long long conc = 0, disc = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = (x[i] - x[j]) * (y[i] - y[j]);
      if (s > 0.0) {
        ++conc;
      } else if (s < 0.0) {
        ++disc;
      }
    }
  }
  double total = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return static_cast<double>(conc - disc) / total;
}

}  // namespace survcop
