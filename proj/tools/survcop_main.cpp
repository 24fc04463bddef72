#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "survcop/crossing.hpp"
#include "survcop/estimation.hpp"
#include "survcop/io.hpp"
#include "survcop/simulation.hpp"

namespace {

using namespace survcop;

int run_fit(const std::string& dataset_path, const std::string& config_path,
            const std::string& out_path, std::uint64_t seed_override, bool have_seed) {
  RunConfig cfg = load_config(config_path);
  if (!cfg.model) throw std::invalid_argument("fit: config needs a 'model' block");
  if (have_seed) cfg.seed = seed_override;
  BivariateSurvivalData data = read_dataset(dataset_path);
  FitOptions opts = cfg.fit;
  opts.seed = cfg.seed;
  FitResult result = fit(data, *cfg.model, opts);
  std::string report = fit_report_json(result, opts.level);
  if (out_path.empty()) {
    std::cout << report;
  } else {
    write_text_atomic(report, out_path);
  }
  if (!result.converged) {
    std::cerr << "fit did not converge: " << result.message << "\n";
    return 2;
  }
  return 0;
}

int run_sweep(const std::string& dataset_path, const std::string& config_path,
              const std::string& out_path, std::uint64_t seed_override, bool have_seed) {
  RunConfig cfg = load_config(config_path);
  if (have_seed) cfg.seed = seed_override;
  BivariateSurvivalData data = read_dataset(dataset_path);
  static const CopulaFamily copulas[] = {CopulaFamily::AMH, CopulaFamily::Clayton,
                                         CopulaFamily::Frank, CopulaFamily::GH, CopulaFamily::Joe};
  static const BaselineFamily baselines[] = {BaselineFamily::Weibull, BaselineFamily::BP,
                                             BaselineFamily::PE};
  static const RegressionClass classes[] = {RegressionClass::PH, RegressionClass::PO,
                                            RegressionClass::YP};
  std::string out = "copula,baseline,class,converged,loglik,n_params,aic\n";
  for (auto cop : copulas) {
    for (auto cls : classes) {
      for (auto base : baselines) {
        ModelSpec spec;
        spec.copula = cop;
        spec.baseline = base;
        spec.klass = cls;
        if (cfg.model) {
          spec.margin1 = cfg.model->margin1;
          spec.margin2 = cfg.model->margin2;
        }
        FitOptions opts = cfg.fit;
        opts.seed = cfg.seed;
        std::string row = std::string(family_name(cop)) + "," + baseline_name(base) + "," +
                          class_name(cls);
        try {
          FitResult r = fit(data, spec, opts);
          char buf[120];
          std::snprintf(buf, sizeof(buf), ",%d,%.6f,%d,%.6f\n", r.converged ? 1 : 0, r.loglik,
                        r.n_params, aic(r));
          out += row + buf;
        } catch (const std::exception& e) {
          out += row + ",0,nan,0,nan\n";
        }
        std::cerr << "sweep: finished " << row << "\n";
      }
    }
  }
  if (out_path.empty()) {
    std::cout << out;
  } else {
    write_text_atomic(out, out_path);
  }
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& out_path,
                 std::uint64_t seed_override, bool have_seed) {
  RunConfig cfg = load_config(config_path);
  if (!cfg.scenario) throw std::invalid_argument("simulate: config needs a 'scenario' block");
  Scenario s = *cfg.scenario;
  if (have_seed) s.seed = seed_override;
  else s.seed = cfg.seed;
  Rng rng(s.seed);
  BivariateSurvivalData data = generate_dataset(s, rng);
  auto [f1, f2] = failure_rates(data);
  std::fprintf(stderr, "simulate: n=%zu failure rates %.3f / %.3f\n", data.size(), f1, f2);
  write_dataset(data, out_path.empty() ? "dataset.csv" : out_path);
  return 0;
}

int run_mc_cmd(const std::string& config_path, const std::string& out_path,
               std::uint64_t seed_override, bool have_seed, int workers_flag) {
  RunConfig cfg = load_config(config_path);
  if (!cfg.scenario) throw std::invalid_argument("mc: config needs a 'scenario' block");
  if (cfg.mc_replicas == 0 || cfg.mc_specs.empty()) {
    throw std::invalid_argument("mc: config needs an 'mc' block with replicas and specs");
  }
  Scenario s = *cfg.scenario;
  if (have_seed) s.seed = seed_override;
  else s.seed = cfg.seed;
  int workers = workers_flag > 0 ? workers_flag : cfg.workers;
  FitOptions opts = cfg.fit;
  McReport report = run_mc(s, cfg.mc_replicas, cfg.mc_specs, workers, opts, cfg.mc_keep_records);
  std::string base = out_path.empty() ? "mc_report" : out_path;
  if (base.size() > 5 && base.substr(base.size() - 5) == ".json") base = base.substr(0, base.size() - 5);
  write_text_atomic(mc_report_json(report), base + ".json");
  if (cfg.mc_keep_records) write_text_atomic(mc_records_csv(report), base + ".csv");
  return 0;
}

int run_crossing(const std::string& dataset_path, const std::string& config_path,
                 const std::string& out_path, std::uint64_t seed_override, bool have_seed,
                 int workers_flag) {
  RunConfig cfg = load_config(config_path);
  if (!cfg.model) throw std::invalid_argument("crossing: config needs a 'model' block");
  if (!cfg.crossing) throw std::invalid_argument("crossing: config needs a 'crossing' block");
  BivariateSurvivalData data = read_dataset(dataset_path);
  CrossingRequest req = *cfg.crossing;
  if (have_seed) req.seed = seed_override;
  if (workers_flag > 0) req.workers = workers_flag;
  FitOptions opts = cfg.fit;
  opts.seed = req.seed;
  FitResult original = fit(data, *cfg.model, opts);
  if (!original.converged) {
    std::cerr << "crossing: the model fit did not converge\n";
    return 2;
  }
  std::string report;
  try {
    CrossingInterval ci = bootstrap_crossing(data, *cfg.model, original, req, opts);
    report = crossing_report_json(ci, req);
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    if (msg.find("no crossing") == std::string::npos) throw;
    report = std::string("{\n  \"crossing\": \"none\",\n  \"detail\": \"") + msg + "\"\n}\n";
  }
  if (out_path.empty()) {
    std::cout << report;
  } else {
    write_text_atomic(report, out_path);
  }
  return 0;
}

int run_lrtest(const std::string& dataset_path, const std::string& reduced_path,
               const std::string& full_path, const std::string& out_path,
               std::uint64_t seed_override, bool have_seed) {
  RunConfig reduced_cfg = load_config(reduced_path);
  RunConfig full_cfg = load_config(full_path);
  if (!reduced_cfg.model || !full_cfg.model) {
    throw std::invalid_argument("lrtest: both configs need 'model' blocks");
  }
  BivariateSurvivalData data = read_dataset(dataset_path);
  FitOptions opts = reduced_cfg.fit;
  if (have_seed) opts.seed = seed_override;
  FitResult reduced = fit(data, *reduced_cfg.model, opts);
  FitOptions full_opts = opts;
  full_opts.init = reduced.params;  // warm start the full model at the reduced optimum
  FitResult full = fit(data, *full_cfg.model, full_opts);
  LrResult lr = lr_test(reduced, full);
  std::string report = lr_report_json(reduced, full, lr, opts.level);
  if (out_path.empty()) {
    std::cout << report;
  } else {
    write_text_atomic(report, out_path);
  }
  return 0;
}

int run_prepare(const std::string& raw_path, const std::string& out_path, bool standardize) {
  PrepareResult prep = prepare_semicompeting_file(raw_path);
  if (!prep.tie_rows.empty()) {
    std::cerr << "prepare: " << prep.tie_rows.size()
              << " row(s) with progression == death resolved toward the terminal event:";
    for (std::size_t r : prep.tie_rows) std::cerr << ' ' << r;
    std::cerr << "\n";
  }
  if (standardize) standardize_covariates(prep.data);
  write_dataset(prep.data, out_path.empty() ? "prepared.csv" : out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"survival copula modeling: Archimedean copulas with Yang-Prentice margins"};
  app.require_subcommand(1);

  std::string dataset, config, reduced, full, out, raw;
  std::uint64_t seed = 0;
  bool have_seed = false;
  int workers = 0;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random seed override")->each([&](const std::string&) {
      have_seed = true;
    });
  };

  CLI::App* cmd_fit = app.add_subcommand("fit", "fit one survival copula model to a dataset");
  cmd_fit->add_option("dataset", dataset, "dataset CSV")->required();
  cmd_fit->add_option("--config", config, "run configuration JSON")->required();
  cmd_fit->add_option("--out,-o", out, "report path (default: stdout)");
  add_seed(cmd_fit);

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "fit all copula/baseline/class combinations");
  cmd_sweep->add_option("dataset", dataset, "dataset CSV")->required();
  cmd_sweep->add_option("--config", config, "run configuration JSON")->required();
  cmd_sweep->add_option("--out,-o", out, "AIC table CSV path (default: stdout)");
  add_seed(cmd_sweep);

  CLI::App* cmd_sim = app.add_subcommand("simulate", "generate one scenario dataset");
  cmd_sim->add_option("--config", config, "run configuration JSON")->required();
  cmd_sim->add_option("--out,-o", out, "dataset path");
  add_seed(cmd_sim);

  CLI::App* cmd_mc = app.add_subcommand("mc", "Monte Carlo study over one scenario");
  cmd_mc->add_option("--config", config, "run configuration JSON")->required();
  cmd_mc->add_option("--out,-o", out, "report base path (writes .json and .csv)");
  cmd_mc->add_option("--workers", workers, "worker threads (default: SURVCOP_WORKERS or all cores)");
  add_seed(cmd_mc);

  CLI::App* cmd_cross = app.add_subcommand("crossing", "crossing-time point and bootstrap interval");
  cmd_cross->add_option("dataset", dataset, "dataset CSV")->required();
  cmd_cross->add_option("--config", config, "run configuration JSON")->required();
  cmd_cross->add_option("--out,-o", out, "report path (default: stdout)");
  cmd_cross->add_option("--workers", workers, "worker threads");
  add_seed(cmd_cross);

  CLI::App* cmd_lr = app.add_subcommand("lrtest", "likelihood-ratio test of nested regression classes");
  cmd_lr->add_option("dataset", dataset, "dataset CSV")->required();
  cmd_lr->add_option("--reduced", reduced, "config of the reduced (PH/PO) model")->required();
  cmd_lr->add_option("--full", full, "config of the full (YP) model")->required();
  cmd_lr->add_option("--out,-o", out, "report path (default: stdout)");
  add_seed(cmd_lr);

  bool standardize = false;
  CLI::App* cmd_prep = app.add_subcommand("prepare", "build bivariate margins from semi-competing rows");
  cmd_prep->add_option("raw", raw, "raw CSV: progression,death,censor,covariates...")->required();
  cmd_prep->add_option("--out,-o", out, "dataset path");
  cmd_prep->add_flag("--standardize", standardize, "center/scale covariate columns to mean 0, sd 1");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(cmd_fit)) return run_fit(dataset, config, out, seed, have_seed);
    if (app.got_subcommand(cmd_sweep)) return run_sweep(dataset, config, out, seed, have_seed);
    if (app.got_subcommand(cmd_sim)) return run_simulate(config, out, seed, have_seed);
    if (app.got_subcommand(cmd_mc)) return run_mc_cmd(config, out, seed, have_seed, workers);
    if (app.got_subcommand(cmd_cross)) return run_crossing(dataset, config, out, seed, have_seed, workers);
    if (app.got_subcommand(cmd_lr)) return run_lrtest(dataset, reduced, full, out, seed, have_seed);
    if (app.got_subcommand(cmd_prep)) return run_prepare(raw, out, standardize);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
