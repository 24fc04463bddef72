#include "survcop/crossing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "survcop/rng.hpp"
#include "survcop/simulation.hpp"

namespace survcop {

namespace {

struct SurvivalDiff {
  const RegressionSpec* reg;
  const BaselineParams* baseline;
  std::span<const double> x_control, x_treat;

  double operator()(double t) const {
    return yp_survival(*reg, x_control, *baseline, t) - yp_survival(*reg, x_treat, *baseline, t);
  }
};

// Brent's method on a sign-changing bracket: residual below 1e-10 and
// interval width below 1e-10 relative
double brent_root(const SurvivalDiff& g, double x1, double x2, double f1, double f2) {
  double a = x1, b = x2, c = x2;
  double fa = f1, fb = f2, fc = f2;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < 300; ++iter) {
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) + 0.5e-10 * std::fabs(b);
    double xm = 0.5 * (c - b);
    if (fb == 0.0 || (std::fabs(xm) <= tol1 && std::fabs(fb) < 1e-10)) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        double r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
      double min2 = std::fabs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm >= 0.0 ? tol1 : -tol1);
    fb = g(b);
  }
  return b;
}

}  // namespace

std::pair<double, double> default_bracket(const BivariateSurvivalData& data, int margin) {
  const auto& y = margin == 1 ? data.y1 : data.y2;
  if (y.empty()) throw std::invalid_argument("default_bracket: empty data");
  double ymax = *std::max_element(y.begin(), y.end());
  return {1e-6, 1.5 * ymax};
}

double crossing_point(const FitResult& fitted, int margin, std::span<const double> x_control,
                      std::span<const double> x_treat, double t_lo, double t_hi) {
  if (margin != 1 && margin != 2) throw std::invalid_argument("crossing_point: margin must be 1 or 2");
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw std::invalid_argument("crossing_point: bad bracket");
  if (x_control.size() != x_treat.size()) {
    throw std::invalid_argument("crossing_point: covariate rows differ in length");
  }
  bool identical = std::equal(x_control.begin(), x_control.end(), x_treat.begin());
  if (identical) {
    throw std::invalid_argument("crossing_point: control and treatment covariates coincide; S_C - S_T vanishes identically");
  }

  RegressionSpec reg = margin == 1 ? fitted.params.regression1(fitted.spec.klass)
                                   : fitted.params.regression2(fitted.spec.klass);
  const BaselineParams& b = margin == 1 ? fitted.params.baseline1 : fitted.params.baseline2;
  SurvivalDiff g{&reg, &b, x_control, x_treat};

  // BP baselines cannot be evaluated beyond their horizon
  if (b.family == BaselineFamily::BP) t_hi = std::min(t_hi, b.upsilon);

  double fa = g(t_lo), fb = g(t_hi);
  if (fa == 0.0) return t_lo;
  if (fb == 0.0) return t_hi;
  if (fa * fb > 0.0) {
    // widen once
    double wide = b.family == BaselineFamily::BP ? std::min(2.0 * t_hi, b.upsilon) : 2.0 * t_hi;
    double fw = g(wide);
    if (fa * fw > 0.0) {
      throw std::runtime_error("crossing_point: no crossing in bracket");
    }
    t_hi = wide;
    fb = fw;
  }
  return brent_root(g, t_lo, t_hi, fa, fb);
}

CrossingInterval bootstrap_crossing(const BivariateSurvivalData& data, const ModelSpec& spec,
                                    const FitResult& original, const CrossingRequest& request,
                                    const FitOptions& fit_options) {
  if (request.bootstrap_samples < 1) throw std::invalid_argument("bootstrap_crossing: needs B >= 1");
  if (!original.converged) throw std::invalid_argument("bootstrap_crossing: original fit did not converge");

  auto [blo, bhi] = (request.bracket_lo > 0.0 && request.bracket_hi > request.bracket_lo)
                        ? std::pair<double, double>{request.bracket_lo, request.bracket_hi}
                        : default_bracket(data, request.margin);

  CrossingInterval out;
  out.point = crossing_point(original, request.margin, request.x_control, request.x_treat, blo, bhi);

  const std::size_t n = data.size();
  const std::size_t B = request.bootstrap_samples;
  std::vector<double> roots(B, std::numeric_limits<double>::quiet_NaN());
  std::atomic<std::size_t> next{0};

  auto worker_fn = [&]() {
    for (;;) {
      std::size_t bi = next.fetch_add(1);
      if (bi >= B) return;
      Rng rng = Rng::substream(request.seed, bi);
      BivariateSurvivalData sample;
      sample.y1.resize(n);
      sample.y2.resize(n);
      sample.d1.resize(n);
      sample.d2.resize(n);
      sample.x1.resize(n);
      sample.x2.resize(n);
      sample.x1_names = data.x1_names;
      sample.x2_names = data.x2_names;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = rng.below(n);
        sample.y1[i] = data.y1[j];
        sample.y2[i] = data.y2[j];
        sample.d1[i] = data.d1[j];
        sample.d2[i] = data.d2[j];
        sample.x1[i] = data.x1[j];
        sample.x2[i] = data.x2[j];
      }
      try {
        FitOptions opts = fit_options;
        opts.init = original.params;
        opts.init_inv_hessian = original.covariance;
        opts.compute_information = false;
        opts.multistart = 1;
        opts.seed = request.seed ^ (0x9E3779B97F4A7C15ULL * (bi + 1));
        FitResult refit = fit(sample, spec, opts);
        if (!refit.converged) continue;
        auto [rlo, rhi] = default_bracket(sample, request.margin);
        if (request.bracket_lo > 0.0 && request.bracket_hi > request.bracket_lo) {
          rlo = request.bracket_lo;
          rhi = request.bracket_hi;
        }
        roots[bi] = crossing_point(refit, request.margin, request.x_control, request.x_treat, rlo, rhi);
      } catch (const std::exception&) {
        // counted below as a failed replicate
      }
    }
  };

  int workers = request.workers >= 1 ? request.workers : default_workers();
  if (workers == 1 || B == 1) {
    worker_fn();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn);
    for (auto& th : pool) th.join();
  }

  for (double r : roots) {
    if (std::isfinite(r)) {
      out.replicate_roots.push_back(r);
    } else {
      ++out.failures;
    }
  }
  out.successes = out.replicate_roots.size();
  if (out.successes == 0) {
    throw std::runtime_error("bootstrap_crossing: every bootstrap replicate failed");
  }
  double alpha = 1.0 - request.level;
  out.lower = sample_quantile(out.replicate_roots, 0.5 * alpha);
  out.upper = sample_quantile(out.replicate_roots, 1.0 - 0.5 * alpha);
  out.unreliable = static_cast<double>(out.failures) > 0.2 * static_cast<double>(B);
  return out;
}

}  // namespace survcop
