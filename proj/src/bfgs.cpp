#include "survcop/bfgs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace survcop {

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

BfgsResult minimize_bfgs(const ObjectiveFn& f, const GradientFn& grad,
                         std::span<const double> x0, const BfgsOptions& opts,
                         std::span<const double> init_inv_hessian) {
  const std::size_t p = x0.size();
  BfgsResult res;
  res.x.assign(x0.begin(), x0.end());
  res.f = f(res.x);
  if (!std::isfinite(res.f)) {
    throw std::invalid_argument("minimize_bfgs: objective not finite at the starting point");
  }
  res.gradient.assign(p, 0.0);
  grad(res.x, res.gradient);

  // inverse-Hessian approximation H
  std::vector<double> H(p * p, 0.0);
  bool h_seeded = false;
  if (init_inv_hessian.size() == p * p) {
    H.assign(init_inv_hessian.begin(), init_inv_hessian.end());
    h_seeded = true;
  } else {
    for (std::size_t i = 0; i < p; ++i) H[i * p + i] = 1.0;
  }

  std::vector<double> dir(p), x_new(p), g_new(p), s(p), yv(p), Hy(p);
  bool scaled = h_seeded;
  const double c1 = 1e-4;

  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it;
    if (max_abs(res.gradient) < opts.grad_tol) {
      res.converged = true;
      break;
    }

    // d = -H g
    for (std::size_t i = 0; i < p; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < p; ++j) acc += H[i * p + j] * res.gradient[j];
      dir[i] = -acc;
    }
    double gtd = 0.0;
    for (std::size_t i = 0; i < p; ++i) gtd += res.gradient[i] * dir[i];
    if (!(gtd < 0.0)) {
      // not a descent direction; reset to steepest descent
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) H[i * p + j] = (i == j) ? 1.0 : 0.0;
        dir[i] = -res.gradient[i];
      }
      gtd = 0.0;
      for (std::size_t i = 0; i < p; ++i) gtd += res.gradient[i] * dir[i];
      scaled = true;
    }

    // backtracking Armijo search
    double alpha = 1.0;
    double f_new = res.f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < p; ++i) x_new[i] = res.x[i] + alpha * dir[i];
      f_new = f(x_new);
      if (std::isfinite(f_new) && f_new <= res.f + c1 * alpha * gtd) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      ++res.line_search_failures;
      res.converged = max_abs(res.gradient) < 10.0 * opts.grad_tol;
      break;
    }

    grad(x_new, g_new);
    double df = res.f - f_new;
    for (std::size_t i = 0; i < p; ++i) {
      s[i] = x_new[i] - res.x[i];
      yv[i] = g_new[i] - res.gradient[i];
    }
    res.x = x_new;
    res.f = f_new;
    res.gradient = g_new;

    if (df <= opts.rel_f_tol * std::max(1.0, std::fabs(res.f))) {
      res.converged = true;
      ++res.iterations;
      break;
    }

    double sy = 0.0, yy = 0.0, snorm = 0.0, ynorm = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      sy += s[i] * yv[i];
      yy += yv[i] * yv[i];
      snorm += s[i] * s[i];
      ynorm += yv[i] * yv[i];
    }
    if (sy > 1e-10 * std::sqrt(snorm * ynorm)) {
      if (!scaled) {
        // initial scaling from the first curvature pair (Nocedal-Wright 6.20)
        double scale = sy / yy;
        for (std::size_t i = 0; i < p; ++i) {
          for (std::size_t j = 0; j < p; ++j) H[i * p + j] = (i == j) ? scale : 0.0;
        }
        scaled = true;
      }
      // H <- (I - rho s y') H (I - rho y s') + rho s s'
      double rho = 1.0 / sy;
      for (std::size_t i = 0; i < p; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < p; ++j) acc += H[i * p + j] * yv[j];
        Hy[i] = acc;
      }
      double yHy = 0.0;
      for (std::size_t i = 0; i < p; ++i) yHy += yv[i] * Hy[i];
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
          H[i * p + j] += -rho * (Hy[i] * s[j] + s[i] * Hy[j]) +
                          rho * rho * yHy * s[i] * s[j] + rho * s[i] * s[j];
        }
      }
    }
  }

  res.inv_hessian = std::move(H);
  return res;
}

std::vector<double> fd_hessian(const ObjectiveFn& f, std::span<const double> x, double rel_step) {
  const std::size_t p = x.size();
  std::vector<double> h(p);
  for (std::size_t i = 0; i < p; ++i) h[i] = rel_step * std::max(1.0, std::fabs(x[i]));
  std::vector<double> H(p * p, 0.0);
  std::vector<double> xp(x.begin(), x.end());
  const double f0 = f(xp);
  for (std::size_t i = 0; i < p; ++i) {
    xp[i] = x[i] + h[i];
    double fp = f(xp);
    xp[i] = x[i] - h[i];
    double fm = f(xp);
    xp[i] = x[i];
    H[i * p + i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      xp[i] = x[i] + h[i];
      xp[j] = x[j] + h[j];
      double fpp = f(xp);
      xp[j] = x[j] - h[j];
      double fpm = f(xp);
      xp[i] = x[i] - h[i];
      double fmm = f(xp);
      xp[j] = x[j] + h[j];
      double fmp = f(xp);
      xp[i] = x[i];
      xp[j] = x[j];
      double v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
      H[i * p + j] = v;
      H[j * p + i] = v;
    }
  }
  return H;
}

}  // namespace survcop
