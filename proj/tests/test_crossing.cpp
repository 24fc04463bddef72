#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "survcop/crossing.hpp"
#include "survcop/simulation.hpp"
#include "test_support.hpp"

using namespace survcop;

namespace {

// FitResult carrying the first-margin simulation truths
FitResult truth_fit() {
  FitResult f;
  f.spec.copula = CopulaFamily::Clayton;
  f.spec.baseline = BaselineFamily::Weibull;
  f.spec.klass = RegressionClass::YP;
  f.converged = true;
  f.params.theta = 2.0 / 3.0;
  f.params.baseline1 = {BaselineFamily::Weibull, {1.2, 0.8}, 0.0, {}};
  f.params.baseline2 = {BaselineFamily::Weibull, {1.6, 1.2}, 0.0, {}};
  f.params.beta1_short = {-0.7, 0.4};
  f.params.beta1_long = {0.8, -0.6};
  f.params.beta2_short = {-0.9, 0.6};
  f.params.beta2_long = {1.0, -0.8};
  return f;
}

// plain bisection to 1e-12 on the survival difference, independent of Brent
double bisect_truth(const FitResult& f, int margin, const std::vector<double>& xc,
                    const std::vector<double>& xt, double lo, double hi) {
  RegressionSpec reg = margin == 1 ? f.params.regression1(f.spec.klass)
                                   : f.params.regression2(f.spec.klass);
  const BaselineParams& b = margin == 1 ? f.params.baseline1 : f.params.baseline2;
  auto g = [&](double t) { return yp_survival(reg, xc, b, t) - yp_survival(reg, xt, b, t); };
  double flo = g(lo);
  REQUIRE(flo * g(hi) < 0.0);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) * flo > 0.0) {
      lo = mid;
      flo = g(mid);
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("crossing point at the simulation truths") {
  FitResult f = truth_fit();
  std::vector<double> xc{0.0, 0.0}, xt{1.0, 0.0};
  double oracle_root = bisect_truth(f, 1, xc, xt, 1e-6, 30.0);
  double root = crossing_point(f, 1, xc, xt, 1e-6, 30.0);
  CHECK(root == doctest::Approx(oracle_root).epsilon(1e-9));
  CHECK(root > 2.1);
  CHECK(root < 2.3);
  // the reported root satisfies the residual contract
  RegressionSpec reg = f.params.regression1(f.spec.klass);
  double resid = yp_survival(reg, xc, f.params.baseline1, root) -
                 yp_survival(reg, xt, f.params.baseline1, root);
  CHECK(std::fabs(resid) < 1e-10);
}

TEST_CASE("degenerate and non-crossing requests") {
  FitResult f = truth_fit();
  std::vector<double> x{1.0, 0.0};
  CHECK_THROWS_AS(crossing_point(f, 1, x, x, 1e-6, 30.0), std::invalid_argument);

  // a PH fit cannot cross: S_T = S_C^phi keeps a fixed ordering
  FitResult ph = truth_fit();
  ph.spec.klass = RegressionClass::PH;
  ph.params.beta1_long = ph.params.beta1_short;
  std::vector<double> xc{0.0, 0.0};
  CHECK_THROWS_AS(crossing_point(ph, 1, xc, x, 1e-6, 30.0), std::runtime_error);
  CHECK_THROWS_WITH_AS(crossing_point(ph, 1, xc, x, 1e-6, 30.0),
                       "crossing_point: no crossing in bracket", std::runtime_error);
}

TEST_CASE("bracket widening finds late crossings") {
  FitResult f = truth_fit();
  std::vector<double> xc{0.0, 0.0}, xt{1.0, 0.0};
  // deliberately short bracket; one doubling reaches the root near 2.19
  double root = crossing_point(f, 1, xc, xt, 1e-6, 1.2);
  CHECK(root == doctest::Approx(bisect_truth(f, 1, xc, xt, 1e-6, 30.0)).epsilon(1e-9));
}

TEST_CASE("bootstrap crossing interval on a small dataset") {
  Scenario s;
  s.n = 160;
  s.seed = 314;
  Rng rng(314);
  BivariateSurvivalData data = generate_dataset(s, rng);
  ModelSpec spec;  // Clayton Weibull YP
  FitResult original = fit(data, spec);
  REQUIRE(original.converged);

  CrossingRequest req;
  req.margin = 1;
  req.x_control = {0.0, 0.0};
  req.x_treat = {1.0, 0.0};
  req.bootstrap_samples = 12;
  req.seed = 9;
  req.workers = 1;
  CrossingInterval ci = bootstrap_crossing(data, spec, original, req);
  CHECK(ci.successes + ci.failures == 12);
  CHECK(ci.successes > 0);
  CHECK(ci.lower <= ci.upper);
  CHECK(ci.point > 0.0);

  // deterministic under a fixed seed, independent of worker count
  CrossingInterval again = bootstrap_crossing(data, spec, original, req);
  CHECK(again.lower == doctest::Approx(ci.lower).epsilon(1e-15));
  CHECK(again.upper == doctest::Approx(ci.upper).epsilon(1e-15));
  CrossingRequest req2 = req;
  req2.workers = 3;
  CrossingInterval multi = bootstrap_crossing(data, spec, original, req2);
  CHECK(multi.lower == doctest::Approx(ci.lower).epsilon(1e-15));
  CHECK(multi.upper == doctest::Approx(ci.upper).epsilon(1e-15));

  // B = 1 degenerates to that replicate's root
  CrossingRequest one = req;
  one.bootstrap_samples = 1;
  CrossingInterval deg = bootstrap_crossing(data, spec, original, one);
  if (deg.successes == 1) {
    CHECK(deg.lower == doctest::Approx(deg.upper));
    CHECK(deg.lower == doctest::Approx(deg.replicate_roots[0]));
  }
}
