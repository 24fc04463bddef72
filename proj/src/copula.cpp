#include "survcop/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "survcop/special_functions.hpp"

namespace survcop {

namespace {

constexpr double kAmhTauMin = (5.0 - 8.0 * 0.6931471805599453) / 3.0;  // (5 - 8 ln 2)/3

double logaddexp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// log(1 - exp(a)) for a < 0
double log1m_exp(double a) {
  if (a > -0.6931471805599453) return std::log(-std::expm1(a));
  return std::log1p(-std::exp(a));
}

void check_open_unit(double u, const char* what) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::domain_error(std::string(what) + ": argument must lie strictly inside (0, 1)");
  }
}

double safe_log(double x) { return std::log(std::max(x, 1e-300)); }

// ---- Frank small-theta expansion (removable singularity at theta = 0) ----
// C = uv + t*uv(1-u)(1-v)/2 + t^2*b2(u,v) + O(t^3), with
// b2 = uv*a2 + u^2 v^2 a1 + u^3 v^3 / 3,
// a1 = (1-u-v)/2, a2 = 1/12 - (u+v)/4 + (u^2+v^2)/6 + uv/4.

double frank_taylor_cdf(double t, double u, double v) {
  double a1 = 0.5 * (1.0 - u - v);
  double a2 = 1.0 / 12.0 - 0.25 * (u + v) + (u * u + v * v) / 6.0 + 0.25 * u * v;
  double uv = u * v;
  double b2 = uv * a2 + uv * uv * a1 + uv * uv * uv / 3.0;
  return uv + t * 0.5 * uv * (1.0 - u) * (1.0 - v) + t * t * b2;
}

double frank_taylor_partial(double t, double u, double v) {
  // d/du of the expansion above
  double a1 = 0.5 * (1.0 - u - v);
  double da2 = -0.25 + u / 3.0 + 0.25 * v;
  double a2 = 1.0 / 12.0 - 0.25 * (u + v) + (u * u + v * v) / 6.0 + 0.25 * u * v;
  double db2 = v * a2 + u * v * da2 + 2.0 * u * v * v * a1 - 0.5 * u * u * v * v + u * u * v * v * v;
  return v + t * 0.5 * v * (1.0 - v) * (1.0 - 2.0 * u) + t * t * db2;
}

double frank_taylor_density(double t, double u, double v) {
  double a1 = 0.5 * (1.0 - u - v);
  double a2 = 1.0 / 12.0 - 0.25 * (u + v) + (u * u + v * v) / 6.0 + 0.25 * u * v;
  double da2u = -0.25 + u / 3.0 + 0.25 * v;
  double da2v = -0.25 + v / 3.0 + 0.25 * u;
  double d2b2 = a2 + v * da2v + u * da2u + 0.25 * u * v + 4.0 * u * v * a1 -
                u * v * v - u * u * v + 3.0 * u * u * v * v;
  return 1.0 + t * 0.5 * (1.0 - 2.0 * u) * (1.0 - 2.0 * v) + t * t * d2b2;
}

constexpr double kFrankTaylorCut = 1e-5;

}  // namespace

const char* family_name(CopulaFamily f) {
  switch (f) {
    case CopulaFamily::AMH: return "amh";
    case CopulaFamily::Clayton: return "clayton";
    case CopulaFamily::Frank: return "frank";
    case CopulaFamily::GH: return "gh";
    case CopulaFamily::Joe: return "joe";
  }
  return "?";
}

CopulaFamily family_from_name(const std::string& name) {
  if (name == "amh") return CopulaFamily::AMH;
  if (name == "clayton") return CopulaFamily::Clayton;
  if (name == "frank") return CopulaFamily::Frank;
  if (name == "gh" || name == "gumbel" || name == "gumbel-hougaard") return CopulaFamily::GH;
  if (name == "joe") return CopulaFamily::Joe;
  throw std::invalid_argument("unknown copula family: " + name);
}

bool param_in_domain(const CopulaParam& p) {
  if (!std::isfinite(p.theta)) return false;
  switch (p.family) {
    case CopulaFamily::AMH: return p.theta > -1.0 && p.theta < 1.0;
    case CopulaFamily::Clayton: return p.theta > 0.0;
    case CopulaFamily::Frank: return p.theta != 0.0;
    case CopulaFamily::GH: return p.theta >= 1.0;
    case CopulaFamily::Joe: return p.theta >= 1.0;
  }
  return false;
}

void validate_param(const CopulaParam& p) {
  if (!param_in_domain(p)) {
    throw std::domain_error(std::string("theta = ") + std::to_string(p.theta) +
                            " outside the " + family_name(p.family) + " domain");
  }
}

double generator_value(const CopulaParam& p, double w) {
  validate_param(p);
  if (w < 0.0) throw std::domain_error("generator_value: requires w >= 0");
  switch (p.family) {
    case CopulaFamily::AMH:
      return (1.0 - p.theta) / (std::exp(w) - p.theta);
    case CopulaFamily::Clayton:
      return std::exp(-std::log1p(p.theta * w) / p.theta);
    case CopulaFamily::Frank:
      if (std::fabs(p.theta) < kFrankTaylorCut) return std::exp(-w);
      return -std::log1p(std::expm1(-p.theta) * std::exp(-w)) / p.theta;
    case CopulaFamily::GH:
      return std::exp(-std::pow(w, 1.0 / p.theta));
    case CopulaFamily::Joe: {
      if (w == 0.0) return 1.0;
      // 1 - (1 - e^{-w})^{1/theta}
      return -std::expm1(log1m_exp(-w) / p.theta);
    }
  }
  return 0.0;
}

double generator_inverse(const CopulaParam& p, double u) {
  validate_param(p);
  if (!(u > 0.0) || u > 1.0) throw std::domain_error("generator_inverse: requires u in (0, 1]");
  if (u == 1.0) return 0.0;
  switch (p.family) {
    case CopulaFamily::AMH:
      return std::log1p(-p.theta * (1.0 - u)) - std::log(u);
    case CopulaFamily::Clayton:
      return std::expm1(-p.theta * std::log(u)) / p.theta;
    case CopulaFamily::Frank:
      if (std::fabs(p.theta) < kFrankTaylorCut) return -std::log(u);
      return -std::log(std::expm1(-p.theta * u) / std::expm1(-p.theta));
    case CopulaFamily::GH:
      return std::pow(-std::log(u), p.theta);
    case CopulaFamily::Joe:
      return -log1m_exp(p.theta * std::log1p(-u));
  }
  return 0.0;
}

double copula_cdf(const CopulaParam& p, std::span<const double> u) {
  const size_t d = u.size();
  if (d < 2) throw std::invalid_argument("copula_cdf: requires dimension >= 2");
  for (double uj : u) {
    if (!(uj >= 0.0) || uj > 1.0) throw std::domain_error("copula_cdf: components must lie in [0, 1]");
  }
  if (d > 2) {
    // general-d parameter ranges
    if (p.family == CopulaFamily::AMH && (p.theta < 0.0 || p.theta >= 1.0)) {
      throw std::domain_error("copula_cdf: AMH with d > 2 requires theta in [0, 1)");
    }
    if (p.family == CopulaFamily::Frank && !(p.theta > 0.0)) {
      throw std::domain_error("copula_cdf: Frank with d > 2 requires theta > 0");
    }
  }
  validate_param(p);

  // boundaries are exact: any zero grounds the copula, ones drop out
  std::vector<double> v;
  v.reserve(d);
  for (double uj : u) {
    if (uj == 0.0) return 0.0;
    if (uj < 1.0) v.push_back(uj);
  }
  if (v.empty()) return 1.0;
  if (v.size() == 1) return v[0];
  if (v.size() == 2) return copula_cdf(p, v[0], v[1]);

  switch (p.family) {
    case CopulaFamily::AMH: {
      double prod = 1.0;
      for (double uj : v) prod *= (1.0 - p.theta * (1.0 - uj)) / uj;
      return (1.0 - p.theta) / (prod - p.theta);
    }
    case CopulaFamily::Clayton: {
      double s = 0.0;
      for (double uj : v) s += std::expm1(-p.theta * std::log(uj));
      return std::exp(-std::log1p(s) / p.theta);
    }
    case CopulaFamily::Frank: {
      // -(1/t) log{1 - prod(1 - e^{-t u_j}) / (1 - e^{-t})^{d-1}}
      double logprod = 0.0;
      for (double uj : v) logprod += std::log(-std::expm1(-p.theta * uj));
      double logden = (static_cast<double>(v.size()) - 1.0) * std::log(-std::expm1(-p.theta));
      return -std::log1p(-std::exp(logprod - logden)) / p.theta;
    }
    case CopulaFamily::GH: {
      double ls = -std::numeric_limits<double>::infinity();
      for (double uj : v) ls = logaddexp(ls, p.theta * std::log(-std::log(uj)));
      return std::exp(-std::exp(ls / p.theta));
    }
    case CopulaFamily::Joe: {
      double logprod = 0.0;
      for (double uj : v) logprod += log1m_exp(p.theta * std::log1p(-uj));
      return -std::expm1(log1m_exp(logprod) / p.theta);
    }
  }
  return 0.0;
}

double copula_cdf(const CopulaParam& p, double u1, double u2) {
  if (!(u1 >= 0.0) || u1 > 1.0 || !(u2 >= 0.0) || u2 > 1.0) {
    throw std::domain_error("copula_cdf: components must lie in [0, 1]");
  }
  validate_param(p);
  if (u1 == 0.0 || u2 == 0.0) return 0.0;
  if (u1 == 1.0) return u2;
  if (u2 == 1.0) return u1;
  switch (p.family) {
    case CopulaFamily::AMH:
      return u1 * u2 / (1.0 - p.theta * (1.0 - u1) * (1.0 - u2));
    case CopulaFamily::Clayton:
    case CopulaFamily::GH:
    case CopulaFamily::Joe:
      return std::exp(log_copula_cdf(p, u1, u2));
    case CopulaFamily::Frank: {
      if (std::fabs(p.theta) < kFrankTaylorCut) return frank_taylor_cdf(p.theta, u1, u2);
      double e1 = std::expm1(-p.theta * u1);
      double e2 = std::expm1(-p.theta * u2);
      double e = std::expm1(-p.theta);
      return -std::log1p(e1 * e2 / e) / p.theta;
    }
  }
  return 0.0;
}

double log_copula_cdf(const CopulaParam& p, double u1, double u2) {
  check_open_unit(u1, "log_copula_cdf");
  check_open_unit(u2, "log_copula_cdf");
  validate_param(p);
  switch (p.family) {
    case CopulaFamily::AMH:
      return std::log(u1) + std::log(u2) -
             std::log1p(-p.theta * (1.0 - u1) * (1.0 - u2));
    case CopulaFamily::Clayton: {
      double s = std::expm1(-p.theta * std::log(u1)) + std::expm1(-p.theta * std::log(u2));
      return -std::log1p(s) / p.theta;
    }
    case CopulaFamily::Frank:
      return safe_log(copula_cdf(p, u1, u2));
    case CopulaFamily::GH: {
      double ls = logaddexp(p.theta * std::log(-std::log(u1)),
                            p.theta * std::log(-std::log(u2)));
      return -std::exp(ls / p.theta);
    }
    case CopulaFamily::Joe: {
      double lq1 = p.theta * std::log1p(-u1);
      double lq2 = p.theta * std::log1p(-u2);
      double big = logaddexp(lq1, lq2);
      double ls = big + std::log1p(-std::exp(lq1 + lq2 - big));  // log(x + y - xy)
      return log1m_exp(ls / p.theta);
    }
  }
  return 0.0;
}

double log_copula_partial(const CopulaParam& p, double u1, double u2, int wrt) {
  if (wrt != 1 && wrt != 2) throw std::invalid_argument("log_copula_partial: wrt must be 1 or 2");
  if (wrt == 2) std::swap(u1, u2);
  check_open_unit(u1, "log_copula_partial");
  check_open_unit(u2, "log_copula_partial");
  validate_param(p);
  switch (p.family) {
    case CopulaFamily::AMH: {
      double den = 1.0 - p.theta * (1.0 - u1) * (1.0 - u2);
      double num = u2 * (1.0 - p.theta * (1.0 - u2));
      return safe_log(num) - 2.0 * std::log(den);
    }
    case CopulaFamily::Clayton: {
      double s = std::expm1(-p.theta * std::log(u1)) + std::expm1(-p.theta * std::log(u2));
      return -(p.theta + 1.0) * std::log(u1) - (1.0 / p.theta + 1.0) * std::log1p(s);
    }
    case CopulaFamily::Frank: {
      if (std::fabs(p.theta) < kFrankTaylorCut) {
        return safe_log(frank_taylor_partial(p.theta, u1, u2));
      }
      double e1 = std::expm1(-p.theta * u1);
      double e2 = std::expm1(-p.theta * u2);
      double e = std::expm1(-p.theta);
      double den = e + e1 * e2;  // same sign as e
      return -p.theta * u1 + safe_log(std::fabs(e2)) - safe_log(std::fabs(den));
    }
    case CopulaFamily::GH: {
      double llx = std::log(-std::log(u1));
      double lly = std::log(-std::log(u2));
      double ls = logaddexp(p.theta * llx, p.theta * lly);
      double z = std::exp(ls / p.theta);
      return -z + (1.0 / p.theta - 1.0) * ls + (p.theta - 1.0) * llx - std::log(u1);
    }
    case CopulaFamily::Joe: {
      double lq1 = p.theta * std::log1p(-u1);
      double lq2 = p.theta * std::log1p(-u2);
      double big = logaddexp(lq1, lq2);
      double ls = big + std::log1p(-std::exp(lq1 + lq2 - big));
      return (1.0 / p.theta - 1.0) * ls + log1m_exp(lq2) +
             (p.theta - 1.0) * std::log1p(-u1);
    }
  }
  return 0.0;
}

double log_copula_density(const CopulaParam& p, double u1, double u2) {
  check_open_unit(u1, "log_copula_density");
  check_open_unit(u2, "log_copula_density");
  validate_param(p);
  switch (p.family) {
    case CopulaFamily::AMH: {
      double th = p.theta;
      double den = 1.0 - th * (1.0 - u1) * (1.0 - u2);
      double nprime = (1.0 - th) + 2.0 * th * u2;
      double n = u2 * ((1.0 - th) + th * u2);
      double c = (nprime * den - 2.0 * th * (1.0 - u1) * n) / (den * den * den);
      return safe_log(c);
    }
    case CopulaFamily::Clayton: {
      double lu1 = std::log(u1), lu2 = std::log(u2);
      double s = std::expm1(-p.theta * lu1) + std::expm1(-p.theta * lu2);
      return std::log1p(p.theta) - (p.theta + 1.0) * (lu1 + lu2) -
             (1.0 / p.theta + 2.0) * std::log1p(s);
    }
    case CopulaFamily::Frank: {
      if (std::fabs(p.theta) < kFrankTaylorCut) {
        return safe_log(frank_taylor_density(p.theta, u1, u2));
      }
      double e1 = std::expm1(-p.theta * u1);
      double e2 = std::expm1(-p.theta * u2);
      double e = std::expm1(-p.theta);
      double den = e + e1 * e2;
      return safe_log(-p.theta * e) - p.theta * (u1 + u2) - 2.0 * safe_log(std::fabs(den));
    }
    case CopulaFamily::GH: {
      double llx = std::log(-std::log(u1));
      double lly = std::log(-std::log(u2));
      double ls = logaddexp(p.theta * llx, p.theta * lly);
      double z = std::exp(ls / p.theta);
      return -z + (1.0 / p.theta - 2.0) * ls + (p.theta - 1.0) * (llx + lly) +
             std::log(z + p.theta - 1.0) - std::log(u1) - std::log(u2);
    }
    case CopulaFamily::Joe: {
      double lq1 = p.theta * std::log1p(-u1);
      double lq2 = p.theta * std::log1p(-u2);
      double big = logaddexp(lq1, lq2);
      double ls = big + std::log1p(-std::exp(lq1 + lq2 - big));
      double s = std::exp(ls);
      double mx = -std::expm1(lq1);
      double my = -std::expm1(lq2);
      return (p.theta - 1.0) * (std::log1p(-u1) + std::log1p(-u2)) +
             (1.0 / p.theta - 2.0) * ls +
             std::log((p.theta - 1.0) * mx * my + p.theta * s);
    }
  }
  return 0.0;
}

double copula_partial(const CopulaParam& p, double u1, double u2, int wrt) {
  return std::exp(log_copula_partial(p, u1, u2, wrt));
}

double copula_density(const CopulaParam& p, double u1, double u2) {
  return std::exp(log_copula_density(p, u1, u2));
}

double kendall_tau(const CopulaParam& p) {
  double th = p.theta;
  switch (p.family) {
    case CopulaFamily::AMH: {
      if (th < -1.0 || th > 1.0) throw std::domain_error("kendall_tau: AMH requires theta in [-1, 1]");
      if (th == 1.0) return 1.0 / 3.0;
      if (std::fabs(th) < 1e-3) {
        return th * (2.0 / 9.0 + th * (1.0 / 18.0 + th / 45.0));
      }
      double r = 1.0 - th;
      return (3.0 * th - 2.0) / (3.0 * th) - 2.0 * r * r * std::log(r) / (3.0 * th * th);
    }
    case CopulaFamily::Clayton:
      if (!(th > 0.0)) throw std::domain_error("kendall_tau: Clayton requires theta > 0");
      return th / (th + 2.0);
    case CopulaFamily::Frank: {
      if (th == 0.0) return 0.0;
      if (std::fabs(th) < 0.02) {
        double t2 = th * th;
        return th * (1.0 / 9.0 - t2 / 900.0 + t2 * t2 / 52920.0);
      }
      return 1.0 + 4.0 * (debye1(th) - 1.0) / th;
    }
    case CopulaFamily::GH:
      if (!(th >= 1.0)) throw std::domain_error("kendall_tau: GH requires theta >= 1");
      return (th - 1.0) / th;
    case CopulaFamily::Joe: {
      if (!(th >= 1.0)) throw std::domain_error("kendall_tau: Joe requires theta >= 1");
      if (std::fabs(th - 2.0) < 1e-5) {
        // removable singularity at theta = 2; trigamma/tetragamma expansion
        const double tau2 = 2.0 - M_PI * M_PI / 6.0;
        const double slope = 0.22143858184431605;
        return tau2 + slope * (th - 2.0);
      }
      return 1.0 + 2.0 / (2.0 - th) * (digamma(2.0) - digamma(2.0 / th + 1.0));
    }
  }
  return 0.0;
}

std::pair<double, double> tau_range(CopulaFamily family) {
  switch (family) {
    case CopulaFamily::AMH: return {kAmhTauMin, 1.0 / 3.0};
    case CopulaFamily::Clayton: return {0.0, 1.0};
    case CopulaFamily::Frank: return {-1.0, 1.0};
    case CopulaFamily::GH: return {0.0, 1.0};
    case CopulaFamily::Joe: return {0.0, 1.0};
  }
  return {0.0, 0.0};
}

namespace {

// bisection for theta with tau(theta) monotone increasing
double tau_bisect(CopulaFamily family, double tau, double lo, double hi) {
  auto tau_at = [&](double th) { return kendall_tau({family, th}); };
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (tau_at(mid) < tau) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-13 * std::max(1.0, std::fabs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

[[noreturn]] void throw_unattainable(CopulaFamily family, double tau) {
  auto [lo, hi] = tau_range(family);
  throw std::domain_error("tau = " + std::to_string(tau) + " not attainable by the " +
                          family_name(family) + " copula (range [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "])");
}

}  // namespace

double tau_inverse(CopulaFamily family, double tau, bool* clamped) {
  if (clamped) *clamped = false;
  switch (family) {
    case CopulaFamily::AMH: {
      if (tau > 1.0 / 3.0) {
        // truncated to the upper limit of the AMH tau range
        if (clamped) *clamped = true;
        return 1.0 - 1e-10;
      }
      if (tau < kAmhTauMin) throw_unattainable(family, tau);
      if (tau >= 1.0 / 3.0) return 1.0 - 1e-10;
      return tau_bisect(family, tau, -1.0 + 1e-12, 1.0 - 1e-12);
    }
    case CopulaFamily::Clayton:
      if (!(tau > 0.0) || !(tau < 1.0)) throw_unattainable(family, tau);
      return 2.0 * tau / (1.0 - tau);
    case CopulaFamily::Frank: {
      if (!(std::fabs(tau) < 1.0) || tau == 0.0) throw_unattainable(family, tau);
      double sign = tau > 0.0 ? 1.0 : -1.0;
      double a = std::fabs(tau);
      double hi = 1.0;
      while (kendall_tau({family, hi}) < a) {
        hi *= 2.0;
        if (hi > 1e6) throw_unattainable(family, tau);
      }
      return sign * tau_bisect(family, a, 1e-12, hi);
    }
    case CopulaFamily::GH:
      if (tau < 0.0 || !(tau < 1.0)) throw_unattainable(family, tau);
      return 1.0 / (1.0 - tau);
    case CopulaFamily::Joe: {
      if (tau < 0.0 || !(tau < 1.0)) throw_unattainable(family, tau);
      if (tau == 0.0) return 1.0;
      double hi = 2.0;
      while (kendall_tau({family, hi}) < tau) {
        hi *= 2.0;
        if (hi > 1e6) throw_unattainable(family, tau);
      }
      return tau_bisect(family, tau, 1.0, hi);
    }
  }
  throw std::logic_error("tau_inverse: unreachable");
}

namespace {

// solve dC/du1(u1, u2) = v for u2 by monotone bisection
double conditional_bisect(const CopulaParam& p, double u1, double v) {
  double lo = 1e-15, hi = 1.0 - 1e-15;
  double flo = copula_partial(p, u1, lo, 1);
  double fhi = copula_partial(p, u1, hi, 1);
  if (v <= flo) return lo;
  if (v >= fhi) return hi;
  for (int i = 0; i < 90; ++i) {
    double mid = 0.5 * (lo + hi);
    if (copula_partial(p, u1, mid, 1) < v) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::pair<double, double> sample_pair(const CopulaParam& p, Rng& rng) {
  validate_param(p);
  double u1 = rng.uniform();
  double v = rng.uniform();
  double th = p.theta;
  switch (p.family) {
    case CopulaFamily::AMH: {
      if (std::fabs(th) < 1e-12) return {u1, v};
      // quadratic in t = 1 - u2 from the conditional CDF
      double a = 1.0 - u1;
      double A = th * (th * a * a * v - 1.0);
      double B = 1.0 + th - 2.0 * th * a * v;
      double C = v - 1.0;
      double t;
      if (std::fabs(A) < 1e-14) {
        t = -C / B;
      } else {
        double disc = std::sqrt(std::max(B * B - 4.0 * A * C, 0.0));
        double q = -0.5 * (B + (B >= 0.0 ? disc : -disc));
        double t1 = q / A;
        double t2 = C / q;
        t = (t1 >= 0.0 && t1 <= 1.0) ? t1 : t2;
      }
      return {u1, std::clamp(1.0 - t, 1e-15, 1.0 - 1e-15)};
    }
    case CopulaFamily::Clayton: {
      double w = std::expm1(-th / (1.0 + th) * std::log(v)) * std::exp(-th * std::log(u1));
      double u2 = std::exp(-std::log1p(w) / th);
      return {u1, std::clamp(u2, 1e-15, 1.0 - 1e-15)};
    }
    case CopulaFamily::Frank: {
      if (std::fabs(th) < 1e-9) return {u1, v};
      double e1 = std::expm1(-th * u1);
      double e = std::expm1(-th);
      double u2 = -std::log1p(v * e / ((1.0 + e1) * (1.0 - v) + v)) / th;
      return {u1, std::clamp(u2, 1e-15, 1.0 - 1e-15)};
    }
    case CopulaFamily::GH:
    case CopulaFamily::Joe: {
      if (th == 1.0) return {u1, v};
      return {u1, conditional_bisect(p, u1, v)};
    }
  }
  return {u1, v};
}

double theta_to_unconstrained(CopulaFamily family, double theta) {
  switch (family) {
    case CopulaFamily::AMH: return std::atanh(theta);
    case CopulaFamily::Clayton: return std::log(theta);
    case CopulaFamily::Frank: return theta;
    case CopulaFamily::GH:
    case CopulaFamily::Joe: return std::log(theta - 1.0);
  }
  return theta;
}

double theta_from_unconstrained(CopulaFamily family, double z) {
  switch (family) {
    case CopulaFamily::AMH: return std::tanh(z);
    case CopulaFamily::Clayton: return std::exp(z);
    case CopulaFamily::Frank: return z;
    case CopulaFamily::GH:
    case CopulaFamily::Joe: return 1.0 + std::exp(z);
  }
  return z;
}

}  // namespace survcop
