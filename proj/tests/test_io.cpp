#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "survcop/io.hpp"
#include "survcop/simulation.hpp"

using namespace survcop;

namespace {

std::string temp_path(const std::string& name) { return "/tmp/survcop_test_" + name; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
}

}  // namespace

TEST_CASE("dataset roundtrip preserves 15+ significant digits") {
  Scenario s;
  s.n = 40;
  s.seed = 3;
  Rng rng(3);
  BivariateSurvivalData data = generate_dataset(s, rng);
  std::string path = temp_path("roundtrip.csv");
  write_dataset(data, path);
  BivariateSurvivalData back = read_dataset(path);
  REQUIRE(back.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(back.y1[i] == data.y1[i]);
    CHECK(back.y2[i] == data.y2[i]);
    CHECK(back.d1[i] == data.d1[i]);
    CHECK(back.d2[i] == data.d2[i]);
    CHECK(back.x1[i] == data.x1[i]);
    CHECK(back.x2[i] == data.x2[i]);
  }
  CHECK(back.x1_names == data.x1_names);
  std::remove(path.c_str());
}

TEST_CASE("malformed datasets are rejected with line numbers") {
  std::string path = temp_path("bad.csv");
  write_file(path, "cluster_id,y1,d1,y2,d2,x1_a,x2_a\n1,0.5,1,0.7,0,1.0,1.0\n2,,1,0.7,0,1.0,1.0\n");
  try {
    read_dataset(path);
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  write_file(path, "cluster_id,y1,d1,y2,d2\n1,0.5,2,0.7,0\n");
  CHECK_THROWS_AS(read_dataset(path), std::invalid_argument);
  write_file(path, "y1,d1\n");
  CHECK_THROWS_AS(read_dataset(path), std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("semi-competing construction") {
  std::vector<SemiCompetingRow> rows(3);
  rows[0] = {2.0, 5.0, 10.0, {1.0}};
  rows[1] = {std::numeric_limits<double>::quiet_NaN(), 5.0, 3.0, {0.0}};
  rows[2] = {4.0, 4.0, 10.0, {0.5}};
  PrepareResult prep = prepare_semicompeting(rows, {"z"});
  // progression observed before death
  CHECK(prep.data.y1[0] == doctest::Approx(2.0));
  CHECK(prep.data.d1[0] == 1);
  CHECK(prep.data.y2[0] == doctest::Approx(5.0));
  CHECK(prep.data.d2[0] == 1);
  // no progression, censored before death
  CHECK(prep.data.y1[1] == doctest::Approx(3.0));
  CHECK(prep.data.d1[1] == 0);
  CHECK(prep.data.y2[1] == doctest::Approx(3.0));
  CHECK(prep.data.d2[1] == 0);
  // progression == death: tie resolved toward the terminal event, flagged
  CHECK(prep.data.y1[2] == doctest::Approx(4.0));
  CHECK(prep.data.d1[2] == 0);
  CHECK(prep.data.d2[2] == 1);
  REQUIRE(prep.tie_rows.size() == 1);
  CHECK(prep.tie_rows[0] == 2);

  std::vector<SemiCompetingRow> bad(1);
  bad[0] = {0.0, 5.0, 10.0, {}};
  CHECK_THROWS_AS(prepare_semicompeting(bad, {}), std::invalid_argument);
}

TEST_CASE("semi-competing CSV front end") {
  std::string path = temp_path("raw.csv");
  write_file(path, "progression,death,censor,z\n2,5,10,0.4\nNA,5,3,-1.2\n,2.5,8,0.0\n");
  PrepareResult prep = prepare_semicompeting_file(path);
  REQUIRE(prep.data.size() == 3);
  CHECK(prep.data.d1[0] == 1);
  CHECK(prep.data.d1[1] == 0);
  CHECK(prep.data.y1[2] == doctest::Approx(2.5));
  CHECK(prep.data.d2[2] == 1);
  CHECK(prep.data.x1_names == std::vector<std::string>{"z"});
  std::remove(path.c_str());
}

TEST_CASE("covariate standardization") {
  std::vector<SemiCompetingRow> rows(3);
  rows[0] = {1.0, 2.0, 9.0, {10.0}};
  rows[1] = {1.5, 3.0, 9.0, {20.0}};
  rows[2] = {2.0, 4.0, 9.0, {30.0}};
  PrepareResult prep = prepare_semicompeting(rows, {"z"});
  standardize_covariates(prep.data);
  double mean = 0.0;
  for (const auto& row : prep.data.x1) mean += row[0];
  CHECK(mean == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(prep.data.x1[0][0] == doctest::Approx(-1.0));
  CHECK(prep.data.x1[2][0] == doctest::Approx(1.0));
  CHECK(prep.data.x2[1][0] == doctest::Approx(0.0));
}

TEST_CASE("config parsing and key validation") {
  std::string path = temp_path("cfg.json");
  write_file(path, R"({
    "seed": 11,
    "model": {"copula": "gh", "baseline": "pe", "class": "yp"},
    "fit": {"max_iterations": 300, "grad_tol": 1e-5},
    "scenario": {"n": 100, "copula": "clayton", "tau": 0.25, "baseline": "weibull",
                 "class": "yp", "kappa1": [1.2, 0.8], "kappa2": [1.6, 1.2],
                 "beta1_short": [-0.7, 0.4], "beta1_long": [0.8, -0.6],
                 "beta2_short": [-0.9, 0.6], "beta2_long": [1.0, -0.8],
                 "censor_caps": [6, 4]},
    "mc": {"replicas": 5, "specs": [{"copula": "clayton", "baseline": "weibull", "class": "yp"}]},
    "crossing": {"margin": 1, "x_control": [0, 0], "x_treat": [1, 0], "bootstrap_samples": 50}
  })");
  RunConfig cfg = load_config(path);
  CHECK(cfg.seed == 11);
  REQUIRE(cfg.model.has_value());
  CHECK(cfg.model->copula == CopulaFamily::GH);
  CHECK(cfg.model->baseline == BaselineFamily::PE);
  CHECK(cfg.fit.max_iterations == 300);
  REQUIRE(cfg.scenario.has_value());
  CHECK(cfg.scenario->n == 100);
  CHECK(cfg.mc_replicas == 5);
  REQUIRE(cfg.crossing.has_value());
  CHECK(cfg.crossing->bootstrap_samples == 50);

  write_file(path, R"({"seed": 1, "unknown_key": 2})");
  CHECK_THROWS_AS(load_config(path), std::invalid_argument);
  write_file(path, R"({"model": {"copula": "clayton", "baseline": "weibull", "class": "yp", "typo": 1}})");
  CHECK_THROWS_AS(load_config(path), std::invalid_argument);
  write_file(path, "not json");
  CHECK_THROWS_AS(load_config(path), std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("report schemas are stable") {
  Scenario s;
  s.n = 120;
  s.klass = RegressionClass::PH;
  s.seed = 8;
  Rng rng(8);
  BivariateSurvivalData data = generate_dataset(s, rng);
  ModelSpec spec;
  spec.klass = RegressionClass::PH;
  FitResult r = fit(data, spec);
  std::string rep = fit_report_json(r, 0.95);
  for (const char* key : {"\"model\"", "\"converged\"", "\"loglik\"", "\"aic\"", "\"estimates\"",
                          "\"tau\"", "\"diagnostics\"", "\"n_params\""}) {
    CHECK(rep.find(key) != std::string::npos);
  }

  McReport mc = run_mc(s, 2, {spec}, 1, {}, true);
  std::string mcj = mc_report_json(mc);
  for (const char* key : {"\"replicas\"", "\"scenario\"", "\"specs\"", "\"mean_aic\"",
                          "\"choice_proportion\"", "\"stats\"", "\"arb\"", "\"cr\""}) {
    CHECK(mcj.find(key) != std::string::npos);
  }
  std::string csv = mc_records_csv(mc);
  CHECK(csv.find("replica,spec,quantity,value") == 0);
  CHECK(csv.find("aic") != std::string::npos);

  // atomic writer leaves no temp file behind
  std::string out = temp_path("report.json");
  write_text_atomic(rep, out);
  std::ifstream back(out);
  CHECK(back.good());
  std::ifstream tmp(out + ".tmp");
  CHECK_FALSE(tmp.good());
  std::remove(out.c_str());
}
