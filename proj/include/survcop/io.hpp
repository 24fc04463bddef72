#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "survcop/crossing.hpp"
#include "survcop/estimation.hpp"
#include "survcop/simulation.hpp"

namespace survcop {

// Delimited dataset with header
//   cluster_id,y1,d1,y2,d2,x1_<name>...,x2_<name>...
// Times must be positive, indicators 0/1; missing fields are rejected with
// their line numbers. Numbers are written with full precision.
BivariateSurvivalData read_dataset(const std::string& path);
void write_dataset(const BivariateSurvivalData& data, const std::string& path);

// Semi-competing construction: per subject, a nonterminal time T (absent
// if never observed), a terminal time T*, and an independent censoring
// time A give
//   y1 = min(T, T*, A),  d1 = 1{y1 == T}
//   y2 = min(T*, A),     d2 = 1{y2 == T*}
// Ties T == T* resolve toward the terminal event (d1 = 0) and are flagged.
struct SemiCompetingRow {
  double progression = std::numeric_limits<double>::quiet_NaN();  // NaN: not observed
  double death = std::numeric_limits<double>::quiet_NaN();
  double censor = 0.0;
  std::vector<double> covariates;
};

struct PrepareResult {
  BivariateSurvivalData data;
  std::vector<std::size_t> tie_rows;  // 0-based input row indices
};

PrepareResult prepare_semicompeting(const std::vector<SemiCompetingRow>& rows,
                                    const std::vector<std::string>& covariate_names);

// CSV front end: header progression,death,censor,<covariates...> with
// empty or NA fields for unobserved events
PrepareResult prepare_semicompeting_file(const std::string& in_path);

// center and scale every covariate column to mean 0, sd 1 (both margins)
void standardize_covariates(BivariateSurvivalData& data);

// Strictly validated run configuration (unknown keys rejected).
struct RunConfig {
  std::uint64_t seed = 1;
  int workers = 0;  // 0: SURVCOP_WORKERS env or hardware concurrency
  std::optional<ModelSpec> model;
  FitOptions fit;
  std::optional<Scenario> scenario;
  std::size_t mc_replicas = 0;
  std::vector<ModelSpec> mc_specs;
  bool mc_keep_records = true;
  std::optional<CrossingRequest> crossing;
};

RunConfig load_config(const std::string& path);

// report writers (JSON, atomic temp + rename)
void write_text_atomic(const std::string& text, const std::string& path);
std::string fit_report_json(const FitResult& fit, double level);
std::string mc_report_json(const McReport& report);
std::string mc_records_csv(const McReport& report);
std::string crossing_report_json(const CrossingInterval& ci, const CrossingRequest& req);
std::string lr_report_json(const FitResult& reduced, const FitResult& full, const LrResult& lr,
                           double level);

}  // namespace survcop
