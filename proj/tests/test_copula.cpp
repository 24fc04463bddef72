#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "survcop/copula.hpp"
#include "survcop/likelihood.hpp"
#include "survcop/rng.hpp"
#include "test_support.hpp"

using namespace survcop;

namespace {

// mid-range dependence per family, used all over the suite
const std::vector<CopulaParam> kTestParams = {
    {CopulaFamily::AMH, 0.5},    {CopulaFamily::AMH, -0.6},   {CopulaFamily::AMH, 0.95},
    {CopulaFamily::Clayton, 0.6}, {CopulaFamily::Clayton, 2.0}, {CopulaFamily::Clayton, 6.0},
    {CopulaFamily::Frank, -4.0}, {CopulaFamily::Frank, 1.0},  {CopulaFamily::Frank, 8.0},
    {CopulaFamily::GH, 1.2},     {CopulaFamily::GH, 2.0},     {CopulaFamily::GH, 4.0},
    {CopulaFamily::Joe, 1.3},    {CopulaFamily::Joe, 2.0},    {CopulaFamily::Joe, 3.5}};

const std::array<double, 9> kGrid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

}  // namespace

TEST_CASE("generator values at known points") {
  for (const auto& p : kTestParams) {
    CHECK(generator_value(p, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(generator_value({CopulaFamily::Clayton, 1.0}, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(generator_value({CopulaFamily::GH, 2.0}, 4.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  // decreasing in w with limit 0
  for (const auto& p : kTestParams) {
    double prev = 1.0;
    for (double w : {0.5, 1.0, 2.0, 5.0, 20.0}) {
      double v = generator_value(p, w);
      CHECK(v < prev);
      CHECK(v >= 0.0);
      prev = v;
    }
  }
  CHECK_THROWS_AS(generator_value({CopulaFamily::Clayton, -1.0}, 1.0), std::domain_error);
}

TEST_CASE("generator inverse") {
  CHECK(generator_inverse({CopulaFamily::Joe, 2.0}, 1.0) == 0.0);
  CHECK(generator_inverse({CopulaFamily::Clayton, 2.0}, 0.5) == doctest::Approx(1.5).epsilon(1e-13));
  for (const auto& p : kTestParams) {
    for (double u : kGrid) {
      CHECK(generator_value(p, generator_inverse(p, u)) == doctest::Approx(u).epsilon(1e-12));
    }
  }
}

TEST_CASE("bivariate cdf values and boundaries") {
  CHECK(copula_cdf({CopulaFamily::Clayton, 2.0}, 0.5, 0.5) ==
        doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-14));
  for (const auto& p : kTestParams) {
    CHECK(copula_cdf(p, 0.4, 1.0) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(copula_cdf(p, 0.7, 0.0) == 0.0);
    CHECK(copula_cdf(p, 0.0, 0.7) == 0.0);
    for (double u : kGrid) {
      CHECK(std::fabs(copula_cdf(p, u, 1.0) - u) < 1e-12);
      CHECK(std::fabs(copula_cdf(p, 1.0, u) - u) < 1e-12);
    }
  }
}

TEST_CASE("cdf agrees with the Archimedean generator construction") {
  for (const auto& p : kTestParams) {
    for (double u1 : kGrid) {
      for (double u2 : kGrid) {
        double direct = copula_cdf(p, u1, u2);
        double via_psi = generator_value(p, generator_inverse(p, u1) + generator_inverse(p, u2));
        CHECK(direct == doctest::Approx(via_psi).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("d > 2 cdf reduces and respects the general-d domain") {
  std::vector<double> u{0.3, 0.5, 0.7};
  CopulaParam frank{CopulaFamily::Frank, 2.0};
  double c3 = copula_cdf(frank, u);
  // C(u1, u2, 1) == C(u1, u2)
  std::vector<double> u_with_one{0.3, 0.5, 1.0};
  CHECK(copula_cdf(frank, u_with_one) == doctest::Approx(copula_cdf(frank, 0.3, 0.5)).epsilon(1e-13));
  CHECK(c3 > 0.0);
  CHECK(c3 < 0.3);
  // generator construction consistency at d = 3
  double via_psi = generator_value(frank, generator_inverse(frank, 0.3) +
                                              generator_inverse(frank, 0.5) +
                                              generator_inverse(frank, 0.7));
  CHECK(c3 == doctest::Approx(via_psi).epsilon(1e-12));
  // negative dependence is bivariate-only
  CHECK_THROWS_AS(copula_cdf({CopulaFamily::Frank, -2.0}, u), std::domain_error);
  CHECK_THROWS_AS(copula_cdf({CopulaFamily::AMH, -0.3}, u), std::domain_error);
  CHECK_NOTHROW(copula_cdf({CopulaFamily::AMH, -0.3}, 0.3, 0.5));
}

TEST_CASE("partial derivatives match finite differences of the cdf") {
  for (const auto& p : kTestParams) {
    for (double u1 : kGrid) {
      for (double u2 : kGrid) {
        double fd1 = oracle::central_diff(
            [&](double t) { return copula_cdf(p, t, u2); }, u1, 1e-6);
        double fd2 = oracle::central_diff(
            [&](double t) { return copula_cdf(p, u1, t); }, u2, 1e-6);
        CHECK(copula_partial(p, u1, u2, 1) == doctest::Approx(fd1).epsilon(2e-6));
        CHECK(copula_partial(p, u1, u2, 2) == doctest::Approx(fd2).epsilon(2e-6));
      }
    }
  }
}

TEST_CASE("spec partial examples") {
  // Clayton near the independence limit
  CHECK(copula_partial({CopulaFamily::Clayton, 1e-12}, 0.3, 0.8, 1) ==
        doctest::Approx(0.8).epsilon(1e-9));
  double fd = oracle::central_diff(
      [&](double t) { return copula_cdf({CopulaFamily::Frank, 3.0}, t, 0.5); }, 0.5, 1e-6);
  CHECK(std::fabs(copula_partial({CopulaFamily::Frank, 3.0}, 0.5, 0.5, 1) - fd) < 1e-6);
  double fd2 = oracle::central_diff(
      [&](double t) { return copula_cdf({CopulaFamily::GH, 2.0}, 0.2, t); }, 0.9, 1e-6);
  CHECK(std::fabs(copula_partial({CopulaFamily::GH, 2.0}, 0.2, 0.9, 2) - fd2) < 1e-6);
  CHECK_THROWS_AS(copula_partial({CopulaFamily::GH, 2.0}, 0.0, 0.5, 1), std::domain_error);
  // conditional CDF is nondecreasing in the free argument
  for (const auto& p : kTestParams) {
    double prev = 0.0;
    for (double u2 : kGrid) {
      double v = copula_partial(p, 0.4, u2, 1);
      CHECK(v >= prev - 1e-12);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("densities match second-order finite differences") {
  CHECK(copula_density({CopulaFamily::Clayton, 1e-12}, 0.37, 0.82) ==
        doctest::Approx(1.0).epsilon(1e-8));
  double amh_fd = oracle::mixed_diff(
      [&](double a, double b) { return copula_cdf({CopulaFamily::AMH, 0.5}, a, b); }, 0.5, 0.5,
      1e-4, 1e-4);
  CHECK(std::fabs(copula_density({CopulaFamily::AMH, 0.5}, 0.5, 0.5) - amh_fd) < 1e-5);
  for (const auto& p : kTestParams) {
    for (double u1 : {0.2, 0.5, 0.8}) {
      for (double u2 : {0.3, 0.6, 0.9}) {
        double fd = oracle::mixed_diff(
            [&](double a, double b) { return copula_cdf(p, a, b); }, u1, u2, 1e-4, 1e-4);
        CHECK(copula_density(p, u1, u2) == doctest::Approx(fd).epsilon(5e-5));
      }
    }
  }
}

TEST_CASE("Frank small-theta expansion matches the exact form") {
  // expm1-based closed forms are stable down to tiny theta; use them as the
  // oracle inside the expansion region
  auto exact_cdf = [](double th, double u, double v) {
    return -std::log1p(std::expm1(-th * u) * std::expm1(-th * v) / std::expm1(-th)) / th;
  };
  auto exact_partial = [](double th, double u, double v) {
    double e1 = std::expm1(-th * u), e2 = std::expm1(-th * v), e = std::expm1(-th);
    return (1.0 + e1) * e2 / (e + e1 * e2);
  };
  auto exact_density = [](double th, double u, double v) {
    double e1 = std::expm1(-th * u), e2 = std::expm1(-th * v), e = std::expm1(-th);
    double den = e + e1 * e2;
    return -th * e * (1.0 + e1) * (1.0 + e2) / (den * den);
  };
  for (double th : {5e-6, -5e-6, 9.9e-6, -9.9e-6}) {
    CopulaParam p{CopulaFamily::Frank, th};
    for (double u1 : {0.2, 0.5, 0.9}) {
      for (double u2 : {0.1, 0.6, 0.8}) {
        CHECK(copula_cdf(p, u1, u2) == doctest::Approx(exact_cdf(th, u1, u2)).epsilon(1e-12));
        CHECK(copula_partial(p, u1, u2, 1) ==
              doctest::Approx(exact_partial(th, u1, u2)).epsilon(1e-11));
        CHECK(copula_density(p, u1, u2) ==
              doctest::Approx(exact_density(th, u1, u2)).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("two-increasing property on random rectangles") {
  Rng rng(7);
  for (const auto& p : kTestParams) {
    for (int k = 0; k < 300; ++k) {
      double a1 = rng.uniform(), b1 = rng.uniform();
      double a2 = rng.uniform(), b2 = rng.uniform();
      if (a1 > b1) std::swap(a1, b1);
      if (a2 > b2) std::swap(a2, b2);
      double vol = copula_cdf(p, b1, b2) - copula_cdf(p, a1, b2) - copula_cdf(p, b1, a2) +
                   copula_cdf(p, a1, a2);
      CHECK(vol >= -1e-12);
    }
  }
}

TEST_CASE("Kendall tau closed forms") {
  CHECK(kendall_tau({CopulaFamily::Clayton, 2.0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(kendall_tau({CopulaFamily::AMH, 1.0}) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(kendall_tau({CopulaFamily::GH, 1.0}) == doctest::Approx(0.0));
  CHECK(kendall_tau({CopulaFamily::GH, 4.0 / 3.0}) == doctest::Approx(0.25).epsilon(1e-14));
  // AMH lower endpoint (5 - 8 log 2) / 3
  CHECK(kendall_tau({CopulaFamily::AMH, -1.0}) ==
        doctest::Approx((5.0 - 8.0 * std::log(2.0)) / 3.0).epsilon(1e-13));
  // Joe theta = 2 equals the trigamma limit 2 - pi^2/6
  CHECK(kendall_tau({CopulaFamily::Joe, 2.0}) ==
        doctest::Approx(2.0 - M_PI * M_PI / 6.0).epsilon(1e-10));
  // expansion branch joins the direct formula across the theta = 2 cut
  CHECK(std::fabs(kendall_tau({CopulaFamily::Joe, 2.0 + 9.9e-6}) -
                  kendall_tau({CopulaFamily::Joe, 2.0 + 1.01e-5})) < 1e-7);
  // Frank antisymmetry
  CHECK(kendall_tau({CopulaFamily::Frank, 5.0}) ==
        doctest::Approx(-kendall_tau({CopulaFamily::Frank, -5.0})).epsilon(1e-12));
}

TEST_CASE("Kendall tau against the defining integral") {
  const std::vector<CopulaParam> probes = {
      {CopulaFamily::AMH, 0.5},     {CopulaFamily::AMH, -0.5},   {CopulaFamily::AMH, 0.9},
      {CopulaFamily::Clayton, 0.667}, {CopulaFamily::Clayton, 2.0},
      {CopulaFamily::Frank, 2.0},   {CopulaFamily::Frank, 5.0},  {CopulaFamily::Frank, -3.0},
      {CopulaFamily::GH, 4.0 / 3.0}, {CopulaFamily::GH, 2.0},
      {CopulaFamily::Joe, 1.5},     {CopulaFamily::Joe, 2.8}};
  for (const auto& p : probes) {
    CHECK(kendall_tau(p) == doctest::Approx(oracle::tau_by_quadrature(p)).epsilon(1e-3));
  }
}

TEST_CASE("tau is strictly increasing in theta") {
  auto check_grid = [](CopulaFamily fam, std::vector<double> thetas) {
    double prev = -2.0;
    for (double th : thetas) {
      double t = kendall_tau({fam, th});
      CHECK(t > prev);
      prev = t;
    }
  };
  check_grid(CopulaFamily::AMH, {-0.99, -0.6, -0.2, 0.0, 0.3, 0.7, 0.95, 1.0});
  check_grid(CopulaFamily::Clayton, {0.05, 0.3, 1.0, 2.0, 5.0, 12.0});
  check_grid(CopulaFamily::Frank, {-12.0, -4.0, -0.5, -0.001, 0.001, 0.5, 4.0, 12.0});
  check_grid(CopulaFamily::GH, {1.0, 1.2, 1.7, 2.5, 5.0, 11.0});
  check_grid(CopulaFamily::Joe, {1.0, 1.4, 1.9, 1.99999, 2.0, 2.00001, 2.6, 5.0, 11.0});
}

TEST_CASE("tau inverse") {
  CHECK(tau_inverse(CopulaFamily::Clayton, 0.25) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(tau_inverse(CopulaFamily::GH, 0.25) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  CHECK(kendall_tau({CopulaFamily::Frank, tau_inverse(CopulaFamily::Frank, 0.5)}) ==
        doctest::Approx(0.5).epsilon(1e-8));
  for (CopulaFamily fam : {CopulaFamily::AMH, CopulaFamily::Clayton, CopulaFamily::Frank,
                           CopulaFamily::GH, CopulaFamily::Joe}) {
    for (double tau : {0.05, 0.25, 0.32}) {
      double th = tau_inverse(fam, tau);
      CHECK(std::fabs(kendall_tau({fam, th}) - tau) < 1e-8);
    }
  }
  // negative dependence families
  CHECK(std::fabs(kendall_tau({CopulaFamily::Frank, tau_inverse(CopulaFamily::Frank, -0.4)}) + 0.4) < 1e-8);
  CHECK(std::fabs(kendall_tau({CopulaFamily::AMH, tau_inverse(CopulaFamily::AMH, -0.1)}) + 0.1) < 1e-8);
  // AMH clamps above its upper tau limit
  bool clamped = false;
  double th = tau_inverse(CopulaFamily::AMH, 0.5, &clamped);
  CHECK(clamped);
  CHECK(th == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(tau_inverse(CopulaFamily::Clayton, -0.2), std::domain_error);
  CHECK_THROWS_AS(tau_inverse(CopulaFamily::GH, -0.05), std::domain_error);
  CHECK_THROWS_AS(tau_inverse(CopulaFamily::AMH, -0.5), std::domain_error);
}

TEST_CASE("sampler recovers the dependence level") {
  const std::size_t n = 4000;
  for (const auto fam : {CopulaFamily::AMH, CopulaFamily::Clayton, CopulaFamily::Frank,
                         CopulaFamily::GH, CopulaFamily::Joe}) {
    CopulaParam p{fam, tau_inverse(fam, 0.3)};
    Rng rng(11);
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto [a, b] = sample_pair(p, rng);
      u[i] = a;
      v[i] = b;
    }
    CHECK(empirical_kendall_tau(u, v) == doctest::Approx(0.3).epsilon(0.18));
  }
}

TEST_CASE("sampler determinism") {
  CopulaParam p{CopulaFamily::Joe, 2.0};
  Rng a(99), b(99);
  for (int i = 0; i < 50; ++i) {
    auto pa = sample_pair(p, a);
    auto pb = sample_pair(p, b);
    CHECK(pa.first == pb.first);
    CHECK(pa.second == pb.second);
  }
}

TEST_CASE("theta link transforms") {
  for (const auto& p : kTestParams) {
    double z = theta_to_unconstrained(p.family, p.theta);
    CHECK(theta_from_unconstrained(p.family, z) == doctest::Approx(p.theta).epsilon(1e-12));
  }
  CHECK(theta_to_unconstrained(CopulaFamily::Clayton, 1.0) == doctest::Approx(0.0));
}
