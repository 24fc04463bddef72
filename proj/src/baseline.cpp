#include "survcop/baseline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "survcop/special_functions.hpp"

namespace survcop {

namespace {

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("baseline: requires t > 0");
}

void check_bp_horizon(const BaselineParams& b, double t) {
  if (t > b.upsilon) {
    throw std::domain_error("baseline: t = " + std::to_string(t) +
                            " beyond the BP horizon upsilon = " + std::to_string(b.upsilon));
  }
}

double log1m_exp(double a) {
  if (a > -0.6931471805599453) return std::log(-std::expm1(a));
  return std::log1p(-std::exp(a));
}

// log S for the exponentiated Weibull, S = 1 - (1 - e^{-lambda t^alpha})^xi
double ew_log_survival(const BaselineParams& b, double t) {
  double alpha = b.kappa[0], lambda = b.kappa[1], xi = b.kappa[2];
  double g = lambda * std::exp(alpha * std::log(t));
  double logw = std::log(-std::expm1(-g));  // log(1 - e^{-g})
  return log1m_exp(xi * logw);
}

}  // namespace

const char* baseline_name(BaselineFamily f) {
  switch (f) {
    case BaselineFamily::Weibull: return "weibull";
    case BaselineFamily::ExpWeibull: return "expweibull";
    case BaselineFamily::BP: return "bp";
    case BaselineFamily::PE: return "pe";
  }
  return "?";
}

BaselineFamily baseline_from_name(const std::string& name) {
  if (name == "weibull") return BaselineFamily::Weibull;
  if (name == "expweibull" || name == "ew") return BaselineFamily::ExpWeibull;
  if (name == "bp" || name == "bernstein") return BaselineFamily::BP;
  if (name == "pe" || name == "piecewise") return BaselineFamily::PE;
  throw std::invalid_argument("unknown baseline family: " + name);
}

void validate_baseline(const BaselineParams& b) {
  switch (b.family) {
    case BaselineFamily::Weibull:
      if (b.kappa.size() != 2) throw std::invalid_argument("Weibull baseline needs kappa = {alpha, lambda}");
      break;
    case BaselineFamily::ExpWeibull:
      if (b.kappa.size() != 3) throw std::invalid_argument("ExpWeibull baseline needs kappa = {alpha, lambda, xi}");
      break;
    case BaselineFamily::BP:
      if (b.kappa.empty()) throw std::invalid_argument("BP baseline needs at least one gamma coefficient");
      if (!(b.upsilon > 0.0)) throw std::invalid_argument("BP baseline needs upsilon > 0");
      break;
    case BaselineFamily::PE:
      if (b.kappa.empty()) throw std::invalid_argument("PE baseline needs at least one rate");
      if (b.grid.size() != b.kappa.size()) throw std::invalid_argument("PE baseline needs one cut point per rate");
      {
        double prev = 0.0;
        for (double e : b.grid) {
          if (!(e > prev)) throw std::invalid_argument("PE grid must be strictly increasing and positive");
          prev = e;
        }
      }
      break;
  }
  for (double k : b.kappa) {
    if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("baseline parameters must be strictly positive");
  }
}

void bp_basis(int m, double upsilon, double t, std::vector<double>& g, std::vector<double>& G) {
  if (m < 1) throw std::invalid_argument("bp_basis: requires m >= 1");
  if (!(upsilon > 0.0)) throw std::invalid_argument("bp_basis: requires upsilon > 0");
  if (t < 0.0 || t > upsilon) {
    throw std::domain_error("bp_basis: t must lie in [0, upsilon]");
  }
  g.assign(m, 0.0);
  G.assign(m, 0.0);
  double x = t / upsilon;
  if (x == 0.0) {
    g[0] = m / upsilon;  // Beta(1, m) density at 0
    return;
  }
  if (x == 1.0) {
    for (int k = 1; k <= m; ++k) {
      G[k - 1] = 1.0;
      g[k - 1] = (k == m) ? m / upsilon : 0.0;
    }
    return;
  }
  for (int k = 1; k <= m; ++k) {
    g[k - 1] = std::exp(beta_log_pdf(x, k, m - k + 1)) / upsilon;
    G[k - 1] = reg_inc_beta(x, k, m - k + 1);
  }
}

double baseline_hazard(const BaselineParams& b, double t) {
  validate_baseline(b);
  check_time(t);
  switch (b.family) {
    case BaselineFamily::Weibull: {
      double alpha = b.kappa[0], lambda = b.kappa[1];
      return lambda * alpha * std::exp((alpha - 1.0) * std::log(t));
    }
    case BaselineFamily::ExpWeibull: {
      double alpha = b.kappa[0], lambda = b.kappa[1], xi = b.kappa[2];
      double g = lambda * std::exp(alpha * std::log(t));
      double logw = std::log(-std::expm1(-g));
      double logf = std::log(xi) + (xi - 1.0) * logw + std::log(lambda * alpha) +
                    (alpha - 1.0) * std::log(t) - g;
      return std::exp(logf - ew_log_survival(b, t));
    }
    case BaselineFamily::BP: {
      check_bp_horizon(b, t);
      std::vector<double> g, G;
      bp_basis(static_cast<int>(b.kappa.size()), b.upsilon, t, g, G);
      double h = 0.0;
      for (size_t k = 0; k < b.kappa.size(); ++k) h += b.kappa[k] * g[k];
      return h;
    }
    case BaselineFamily::PE: {
      for (size_t k = 0; k < b.grid.size(); ++k) {
        if (t <= b.grid[k]) return b.kappa[k];
      }
      return b.kappa.back();
    }
  }
  return 0.0;
}

double baseline_cum_hazard(const BaselineParams& b, double t) {
  validate_baseline(b);
  check_time(t);
  switch (b.family) {
    case BaselineFamily::Weibull:
      return b.kappa[1] * std::exp(b.kappa[0] * std::log(t));
    case BaselineFamily::ExpWeibull:
      return -ew_log_survival(b, t);
    case BaselineFamily::BP: {
      check_bp_horizon(b, t);
      std::vector<double> g, G;
      bp_basis(static_cast<int>(b.kappa.size()), b.upsilon, t, g, G);
      double H = 0.0;
      for (size_t k = 0; k < b.kappa.size(); ++k) H += b.kappa[k] * G[k];
      return H;
    }
    case BaselineFamily::PE: {
      double H = 0.0, prev = 0.0;
      for (size_t k = 0; k < b.grid.size(); ++k) {
        if (t <= b.grid[k]) return H + b.kappa[k] * (t - prev);
        H += b.kappa[k] * (b.grid[k] - prev);
        prev = b.grid[k];
      }
      return H + b.kappa.back() * (t - prev);
    }
  }
  return 0.0;
}

double baseline_survival(const BaselineParams& b, double t) {
  if (b.family == BaselineFamily::ExpWeibull) {
    validate_baseline(b);
    check_time(t);
    return std::exp(ew_log_survival(b, t));
  }
  return std::exp(-baseline_cum_hazard(b, t));
}

double baseline_density(const BaselineParams& b, double t) {
  return baseline_hazard(b, t) * baseline_survival(b, t);
}

double baseline_odds(const BaselineParams& b, double t) {
  return std::expm1(baseline_cum_hazard(b, t));
}

double baseline_odds_deriv(const BaselineParams& b, double t) {
  return baseline_hazard(b, t) * std::exp(baseline_cum_hazard(b, t));
}

int structural_size(std::size_t n) {
  if (n < 1) throw std::invalid_argument("structural_size: requires n >= 1");
  return static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 0.4) - 1e-9));
}

double cum_hazard_inverse(const BaselineParams& b, double H) {
  validate_baseline(b);
  if (H < 0.0 || !std::isfinite(H)) throw std::domain_error("cum_hazard_inverse: requires H >= 0");
  if (H == 0.0) return 0.0;
  switch (b.family) {
    case BaselineFamily::Weibull:
      return std::exp(std::log(H / b.kappa[1]) / b.kappa[0]);
    case BaselineFamily::ExpWeibull: {
      double alpha = b.kappa[0], lambda = b.kappa[1], xi = b.kappa[2];
      // S = e^{-H}  =>  (1 - e^{-g})^xi = 1 - e^{-H},  g = lambda t^alpha
      double logq = log1m_exp(-H) / xi;
      double g = -std::log1p(-std::exp(logq));
      return std::exp(std::log(g / lambda) / alpha);
    }
    case BaselineFamily::BP: {
      double total = 0.0;
      for (double gk : b.kappa) total += gk;
      if (H > total) {
        throw std::domain_error("cum_hazard_inverse: H exceeds the BP cumulative hazard at upsilon");
      }
      double lo = 0.0, hi = b.upsilon;
      for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        double val = (mid > 0.0) ? baseline_cum_hazard(b, mid) : 0.0;
        if (val < H) {
          lo = mid;
        } else {
          hi = mid;
        }
        if (hi - lo < 1e-14 * b.upsilon) break;
      }
      return 0.5 * (lo + hi);
    }
    case BaselineFamily::PE: {
      double acc = 0.0, prev = 0.0;
      for (size_t k = 0; k < b.grid.size(); ++k) {
        double seg = b.kappa[k] * (b.grid[k] - prev);
        if (H <= acc + seg) return prev + (H - acc) / b.kappa[k];
        acc += seg;
        prev = b.grid[k];
      }
      return prev + (H - acc) / b.kappa.back();
    }
  }
  return 0.0;
}

}  // namespace survcop
