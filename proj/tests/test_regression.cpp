#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "survcop/regression.hpp"
#include "survcop/rng.hpp"
#include "test_support.hpp"

using namespace survcop;

namespace {

const BaselineParams kExpo{BaselineFamily::Weibull, {1.0, 1.0}, 0.0, {}};
const BaselineParams kWeibull1{BaselineFamily::Weibull, {1.2, 0.8}, 0.0, {}};

// the first-margin coefficient sets from the simulation scenario
const RegressionSpec kYp = make_regression(RegressionClass::YP, {-0.7, 0.4}, {0.8, -0.6});

}  // namespace

TEST_CASE("short/long ratios") {
  std::vector<double> zero{0.0, 0.0};
  auto [s0, l0] = short_long_ratios(kYp, zero);
  CHECK(s0 == doctest::Approx(1.0));
  CHECK(l0 == doctest::Approx(1.0));
  std::vector<double> x{1.0, 0.0};
  auto [s1, l1] = short_long_ratios(kYp, x);
  CHECK(s1 == doctest::Approx(std::exp(-0.7)).epsilon(1e-14));
  CHECK(l1 == doctest::Approx(std::exp(0.8)).epsilon(1e-14));
  RegressionSpec po = make_regression(RegressionClass::PO, {-0.7, 0.4});
  auto [ps, pl] = short_long_ratios(po, x);
  CHECK(pl == doctest::Approx(1.0));
  CHECK(ps == doctest::Approx(std::exp(-0.7)));
  std::vector<double> bad{1.0};
  CHECK_THROWS_AS(short_long_ratios(kYp, bad), std::invalid_argument);
}

TEST_CASE("survival reductions") {
  // x = 0 reduces to the baseline survival
  std::vector<double> zero{0.0, 0.0};
  CHECK(yp_survival(kYp, zero, kExpo, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-13));
  // PH constraint: S = exp(-phi H0)
  Rng rng(21);
  RegressionSpec ph = make_regression(RegressionClass::PH, {-0.7, 0.4});
  RegressionSpec yp_tied = make_regression(RegressionClass::YP, {-0.7, 0.4}, {-0.7, 0.4});
  for (int k = 0; k < 50; ++k) {
    std::vector<double> x{rng.bernoulli(0.5) ? 1.0 : 0.0, rng.normal()};
    double t = rng.uniform(0.05, 4.0);
    auto [phiS, phiL] = short_long_ratios(ph, x);
    double H0 = baseline_cum_hazard(kWeibull1, t);
    CHECK(yp_survival(ph, x, kWeibull1, t) ==
          doctest::Approx(std::exp(-phiS * H0)).epsilon(1e-12));
    CHECK(yp_survival(yp_tied, x, kWeibull1, t) ==
          doctest::Approx(std::exp(-phiS * H0)).epsilon(1e-12));
    (void)phiL;
  }
  // PO constraint: S = [1 + phiS R0]^{-1}
  RegressionSpec po = make_regression(RegressionClass::PO, {std::log(2.0), 0.0});
  RegressionSpec yp_zeroed = make_regression(RegressionClass::YP, {std::log(2.0), 0.0}, {0.0, 0.0});
  for (int k = 0; k < 50; ++k) {
    std::vector<double> x{1.0, rng.normal()};
    double t = rng.uniform(0.05, 4.0);
    auto [phiS, phiL] = short_long_ratios(po, x);
    double R0 = baseline_odds(kWeibull1, t);
    CHECK(yp_survival(po, x, kWeibull1, t) == doctest::Approx(1.0 / (1.0 + phiS * R0)).epsilon(1e-12));
    CHECK(yp_survival(yp_zeroed, x, kWeibull1, t) ==
          doctest::Approx(1.0 / (1.0 + phiS * R0)).epsilon(1e-12));
    (void)phiL;
  }
}

TEST_CASE("hazard forms agree and reduce") {
  std::vector<double> zero{0.0, 0.0};
  Rng rng(9);
  for (int k = 0; k < 40; ++k) {
    double t = rng.uniform(0.05, 4.0);
    CHECK(yp_hazard(kYp, zero, kWeibull1, t) ==
          doctest::Approx(baseline_hazard(kWeibull1, t)).epsilon(1e-12));
    std::vector<double> x{rng.bernoulli(0.5) ? 1.0 : 0.0, rng.normal()};
    auto [phiS, phiL] = short_long_ratios(kYp, x);
    double r0 = baseline_odds_deriv(kWeibull1, t);
    double R0 = baseline_odds(kWeibull1, t);
    // second algebraic route: phiS phiL r0 / (phiL + phiS R0)
    double alt = phiS * phiL * r0 / (phiL + phiS * R0);
    CHECK(yp_hazard(kYp, x, kWeibull1, t) == doctest::Approx(alt).epsilon(1e-12));
  }
}

TEST_CASE("short and long-term hazard-ratio limits") {
  std::vector<double> zero{0.0, 0.0};
  std::vector<double> x{1.0, 0.0};
  auto [phiS, phiL] = short_long_ratios(kYp, x);
  double t0 = 1e-8;
  double ratio0 = yp_hazard(kYp, x, kExpo, t0) / yp_hazard(kYp, zero, kExpo, t0);
  CHECK(ratio0 == doctest::Approx(phiS).epsilon(1e-4));
  // H0(t) = 20 at t = 20 under the unit exponential baseline
  double tinf = 20.0;
  double ratio1 = yp_hazard(kYp, x, kExpo, tinf) / yp_hazard(kYp, zero, kExpo, tinf);
  CHECK(ratio1 == doctest::Approx(phiL).epsilon(1e-4));
}

TEST_CASE("density matches the survival derivative") {
  std::vector<double> zero{0.0, 0.0};
  CHECK(yp_density(kYp, zero, kExpo, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  Rng rng(33);
  for (int k = 0; k < 30; ++k) {
    std::vector<double> x{rng.bernoulli(0.5) ? 1.0 : 0.0, rng.normal()};
    double t = rng.uniform(0.1, 3.5);
    double fd = -oracle::central_diff([&](double s) { return yp_survival(kYp, x, kWeibull1, s); },
                                      t, 1e-6);
    CHECK(yp_density(kYp, x, kWeibull1, t) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(yp_density(kYp, x, kWeibull1, t) >= 0.0);
    CHECK(yp_density(kYp, x, kWeibull1, t) ==
          doctest::Approx(yp_hazard(kYp, x, kWeibull1, t) * yp_survival(kYp, x, kWeibull1, t))
              .epsilon(1e-12));
  }
}

TEST_CASE("survival inversion") {
  std::vector<double> zero{0.0, 0.0};
  CHECK(yp_inverse_survival(kYp, zero, kExpo, 0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // u -> 1 gives t -> 0
  CHECK(yp_inverse_survival(kYp, zero, kExpo, 1.0 - 1e-12) < 1e-10);
  Rng rng(41);
  for (int k = 0; k < 40; ++k) {
    std::vector<double> x{rng.bernoulli(0.5) ? 1.0 : 0.0, rng.normal()};
    double u = rng.uniform(0.02, 0.98);
    double t = yp_inverse_survival(kYp, x, kWeibull1, u);
    CHECK(yp_survival(kYp, x, kWeibull1, t) == doctest::Approx(u).epsilon(1e-9));
  }
  CHECK_THROWS_AS(yp_inverse_survival(kYp, zero, kExpo, 0.0), std::domain_error);
}

TEST_CASE("monotone decreasing survival") {
  Rng rng(55);
  for (int k = 0; k < 10; ++k) {
    std::vector<double> x{rng.bernoulli(0.5) ? 1.0 : 0.0, rng.normal()};
    double prev = 1.0;
    for (double t : {0.2, 0.6, 1.2, 2.0, 3.5, 6.0}) {
      double s = yp_survival(kYp, x, kWeibull1, t);
      CHECK(s < prev);
      prev = s;
    }
  }
}

TEST_CASE("crossing condition under opposite-sign coefficients") {
  // q = 1, beta_S * beta_L < 0: survival difference changes sign exactly once
  RegressionSpec yp = make_regression(RegressionClass::YP, {-0.7}, {0.8});
  std::vector<double> c{0.0}, tr{1.0};
  int sign_changes = 0;
  double prev = yp_survival(yp, c, kWeibull1, 0.01) - yp_survival(yp, tr, kWeibull1, 0.01);
  for (double t = 0.02; t < 40.0; t += 0.01) {
    double g = yp_survival(yp, c, kWeibull1, t) - yp_survival(yp, tr, kWeibull1, t);
    if ((g > 0.0) != (prev > 0.0)) ++sign_changes;
    prev = g;
  }
  CHECK(sign_changes == 1);
  // same-sign coefficients (PH) never cross
  RegressionSpec ph = make_regression(RegressionClass::PH, {-0.7});
  prev = yp_survival(ph, c, kWeibull1, 0.01) - yp_survival(ph, tr, kWeibull1, 0.01);
  sign_changes = 0;
  for (double t = 0.02; t < 40.0; t += 0.01) {
    double g = yp_survival(ph, c, kWeibull1, t) - yp_survival(ph, tr, kWeibull1, t);
    if ((g > 0.0) != (prev > 0.0)) ++sign_changes;
    prev = g;
  }
  CHECK(sign_changes == 0);
}

TEST_CASE("class constraint validation") {
  CHECK_THROWS_AS(make_regression(RegressionClass::YP, {1.0, 2.0}, {1.0}), std::invalid_argument);
  RegressionSpec bad_ph{RegressionClass::PH, {1.0}, {2.0}};
  CHECK_THROWS_AS(validate_regression(bad_ph), std::invalid_argument);
  RegressionSpec bad_po{RegressionClass::PO, {1.0}, {0.5}};
  CHECK_THROWS_AS(validate_regression(bad_po), std::invalid_argument);
}
