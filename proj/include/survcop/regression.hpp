#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "survcop/baseline.hpp"

namespace survcop {

enum class RegressionClass { PH, PO, YP };

const char* class_name(RegressionClass c);
RegressionClass class_from_name(const std::string& name);

// Short/long-term coefficient pair. PH ties beta_long to beta_short and PO
// zeroes beta_long; both are materialized here so every class evaluates
// through the same YP expressions.
struct RegressionSpec {
  RegressionClass klass = RegressionClass::YP;
  std::vector<double> beta_short;
  std::vector<double> beta_long;
};

// builds a spec with the class constraint applied to beta_long
RegressionSpec make_regression(RegressionClass klass, std::vector<double> beta_short,
                               std::vector<double> beta_long = {});

void validate_regression(const RegressionSpec& r);

// (phi_S, phi_L) = (exp(x' beta_short), exp(x' beta_long))
std::pair<double, double> short_long_ratios(const RegressionSpec& r, std::span<const double> x);

// S(t | x) = [1 + (phi_S/phi_L) R0(t)]^{-phi_L}
double yp_survival(const RegressionSpec& r, std::span<const double> x, const BaselineParams& b, double t);
double yp_log_survival(const RegressionSpec& r, std::span<const double> x, const BaselineParams& b, double t);

// h(t | x) = phi_S phi_L h0(t) / [phi_S F0(t) + phi_L S0(t)]
double yp_hazard(const RegressionSpec& r, std::span<const double> x, const BaselineParams& b, double t);

double yp_density(const RegressionSpec& r, std::span<const double> x, const BaselineParams& b, double t);
double yp_log_density(const RegressionSpec& r, std::span<const double> x, const BaselineParams& b, double t);

// t with S(t | x) = u, via R0 = (phi_L/phi_S)(u^{-1/phi_L} - 1) and the
// baseline cumulative-hazard inverse
double yp_inverse_survival(const RegressionSpec& r, std::span<const double> x, const BaselineParams& b, double u);

}  // namespace survcop
