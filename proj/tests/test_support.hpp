#pragma once

// Independent numeric oracles shared by the test suites. These stay on
// brute-force paths (finite differences, quadrature, bisection) so they
// never reuse the analytic expressions they are meant to check.

#include <cmath>
#include <functional>
#include <vector>

#include "survcop/copula.hpp"
#include "survcop/special_functions.hpp"

namespace oracle {

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double second_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

inline double mixed_diff(const std::function<double(double, double)>& f, double x, double y,
                         double hx, double hy) {
  return (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy)) /
         (4.0 * hx * hy);
}

// Richardson-extrapolated variants (O(h^4) truncation) for tight tolerances
inline double central_diff_rich(const std::function<double(double)>& f, double x, double h) {
  return (4.0 * central_diff(f, x, 0.5 * h) - central_diff(f, x, h)) / 3.0;
}

inline double mixed_diff_rich(const std::function<double(double, double)>& f, double x, double y,
                              double hx, double hy) {
  return (4.0 * mixed_diff(f, x, y, 0.5 * hx, 0.5 * hy) - mixed_diff(f, x, y, hx, hy)) / 3.0;
}

// adaptive Simpson, independent of survcop::integrate
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2) ++n;
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Time integral int_0^t f with a power substitution s = t^5 that absorbs
// integrable singularities at 0 (bathtub hazards, densities with
// alpha*xi < 1). Midpoint rule; split points handle step discontinuities.
inline double graded_time_integral(const std::function<double(double)>& f, double t,
                                   std::vector<double> splits = {}, int n = 200000) {
  splits.push_back(0.0);
  splits.push_back(t);
  std::sort(splits.begin(), splits.end());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < splits.size(); ++k) {
    double lo = splits[k], hi = std::min(splits[k + 1], t);
    if (!(hi > lo) || lo >= t) continue;
    double a = std::pow(lo, 0.2), b = std::pow(hi, 0.2);
    double h = (b - a) / n;
    for (int i = 0; i < n; ++i) {
      double s = a + (i + 0.5) * h;
      double s4 = s * s * s * s;
      acc += 5.0 * s4 * f(s4 * s) * h;
    }
  }
  return acc;
}

// Kendall tau by the defining double integral 4 int C dC - 1 on a
// Gauss-Legendre product grid
inline double tau_by_quadrature(const survcop::CopulaParam& p, int grid = 160) {
  survcop::QuadRule rule = survcop::gauss_legendre(grid);
  double acc = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      double u = rule.nodes[i], v = rule.nodes[j];
      acc += rule.weights[i] * rule.weights[j] * survcop::copula_cdf(p, u, v) *
             survcop::copula_density(p, u, v);
    }
  }
  return 4.0 * acc - 1.0;
}

// Kolmogorov-Smirnov distance of a sample against the uniform law
inline double ks_uniform(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  double d = 0.0;
  const double n = static_cast<double>(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double lo = i / n, hi = (i + 1.0) / n;
    d = std::max(d, std::max(std::fabs(sample[i] - lo), std::fabs(sample[i] - hi)));
  }
  return d;
}

inline double erf_inv_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace oracle
