#pragma once

#include <functional>
#include <span>
#include <vector>

namespace survcop {

struct BfgsOptions {
  int max_iterations = 500;
  double grad_tol = 1e-5;    // max-norm of the gradient
  double rel_f_tol = 1e-10;  // relative change of the objective
};

struct BfgsResult {
  std::vector<double> x;
  double f = 0.0;
  std::vector<double> gradient;
  bool converged = false;
  int iterations = 0;
  std::size_t line_search_failures = 0;
  std::vector<double> inv_hessian;  // p x p row-major approximation at exit
};

using ObjectiveFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<void(std::span<const double>, std::span<double>)>;

// Dense BFGS minimizer with backtracking Armijo line search. Non-finite
// objective values reject the trial step. init_inv_hessian, when nonempty,
// seeds the inverse-Hessian approximation (p x p row-major).
BfgsResult minimize_bfgs(const ObjectiveFn& f, const GradientFn& grad,
                         std::span<const double> x0, const BfgsOptions& opts,
                         std::span<const double> init_inv_hessian = {});

// Central finite-difference Hessian with per-coordinate relative steps,
// returned row-major.
std::vector<double> fd_hessian(const ObjectiveFn& f, std::span<const double> x, double rel_step);

}  // namespace survcop
