#include "survcop/regression.hpp"

#include <cmath>
#include <stdexcept>

namespace survcop {

const char* class_name(RegressionClass c) {
  switch (c) {
    case RegressionClass::PH: return "ph";
    case RegressionClass::PO: return "po";
    case RegressionClass::YP: return "yp";
  }
  return "?";
}

RegressionClass class_from_name(const std::string& name) {
  if (name == "ph") return RegressionClass::PH;
  if (name == "po") return RegressionClass::PO;
  if (name == "yp") return RegressionClass::YP;
  throw std::invalid_argument("unknown regression class: " + name);
}

RegressionSpec make_regression(RegressionClass klass, std::vector<double> beta_short,
                               std::vector<double> beta_long) {
  RegressionSpec r;
  r.klass = klass;
  r.beta_short = std::move(beta_short);
  switch (klass) {
    case RegressionClass::PH:
      r.beta_long = r.beta_short;
      break;
    case RegressionClass::PO:
      r.beta_long.assign(r.beta_short.size(), 0.0);
      break;
    case RegressionClass::YP:
      if (beta_long.size() != r.beta_short.size()) {
        throw std::invalid_argument("YP regression needs beta_long with the same length as beta_short");
      }
      r.beta_long = std::move(beta_long);
      break;
  }
  return r;
}

void validate_regression(const RegressionSpec& r) {
  if (r.beta_long.size() != r.beta_short.size()) {
    throw std::invalid_argument("regression: beta_short and beta_long must have equal length");
  }
  for (size_t l = 0; l < r.beta_short.size(); ++l) {
    if (!std::isfinite(r.beta_short[l]) || !std::isfinite(r.beta_long[l])) {
      throw std::invalid_argument("regression: coefficients must be finite");
    }
    if (r.klass == RegressionClass::PH && r.beta_long[l] != r.beta_short[l]) {
      throw std::invalid_argument("PH regression requires beta_long == beta_short");
    }
    if (r.klass == RegressionClass::PO && r.beta_long[l] != 0.0) {
      throw std::invalid_argument("PO regression requires beta_long == 0");
    }
  }
}

std::pair<double, double> short_long_ratios(const RegressionSpec& r, std::span<const double> x) {
  if (x.size() != r.beta_short.size()) {
    throw std::invalid_argument("short_long_ratios: covariate length does not match coefficients");
  }
  double etaS = 0.0, etaL = 0.0;
  for (size_t l = 0; l < x.size(); ++l) {
    etaS += x[l] * r.beta_short[l];
    etaL += x[l] * r.beta_long[l];
  }
  return {std::exp(etaS), std::exp(etaL)};
}

double yp_log_survival(const RegressionSpec& r, std::span<const double> x, const BaselineParams& b, double t) {
  auto [phiS, phiL] = short_long_ratios(r, x);
  double H0 = baseline_cum_hazard(b, t);
  double R0 = std::expm1(H0);
  return -phiL * std::log1p(phiS / phiL * R0);
}

double yp_survival(const RegressionSpec& r, std::span<const double> x, const BaselineParams& b, double t) {
  return std::exp(yp_log_survival(r, x, b, t));
}

double yp_hazard(const RegressionSpec& r, std::span<const double> x, const BaselineParams& b, double t) {
  auto [phiS, phiL] = short_long_ratios(r, x);
  double H0 = baseline_cum_hazard(b, t);
  double S0 = std::exp(-H0);
  double F0 = -std::expm1(-H0);
  double h0 = baseline_hazard(b, t);
  return phiS * phiL * h0 / (phiS * F0 + phiL * S0);
}

double yp_log_density(const RegressionSpec& r, std::span<const double> x, const BaselineParams& b, double t) {
  auto [phiS, phiL] = short_long_ratios(r, x);
  double H0 = baseline_cum_hazard(b, t);
  double S0 = std::exp(-H0);
  double F0 = -std::expm1(-H0);
  double h0 = baseline_hazard(b, t);
  double loghaz = std::log(phiS) + std::log(phiL) + std::log(h0) - std::log(phiS * F0 + phiL * S0);
  return loghaz - phiL * std::log1p(phiS / phiL * std::expm1(H0));
}

double yp_density(const RegressionSpec& r, std::span<const double> x, const BaselineParams& b, double t) {
  return std::exp(yp_log_density(r, x, b, t));
}

double yp_inverse_survival(const RegressionSpec& r, std::span<const double> x, const BaselineParams& b, double u) {
  if (!(u > 0.0) || !(u < 1.0)) throw std::domain_error("yp_inverse_survival: requires u in (0, 1)");
  auto [phiS, phiL] = short_long_ratios(r, x);
  double R0 = phiL / phiS * std::expm1(-std::log(u) / phiL);
  double H0 = std::log1p(R0);
  return cum_hazard_inverse(b, H0);
}

}  // namespace survcop
