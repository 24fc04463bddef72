#include "survcop/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace survcop {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line_no, const std::string& col) {
  std::string t = trim(field);
  if (t.empty()) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": missing value in column " + col);
  }
  try {
    std::size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": cannot parse '" + t +
                                "' in column " + col);
  }
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

BivariateSurvivalData read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset file is empty: " + path);
  auto header = split_csv_line(trim(line));
  if (header.size() < 5 || header[0] != "cluster_id" || header[1] != "y1" || header[2] != "d1" ||
      header[3] != "y2" || header[4] != "d2") {
    throw std::invalid_argument("dataset header must start with cluster_id,y1,d1,y2,d2");
  }
  BivariateSurvivalData data;
  std::size_t q1 = 0, q2 = 0;
  for (std::size_t c = 5; c < header.size(); ++c) {
    const std::string& h = header[c];
    if (h.rfind("x1_", 0) == 0) {
      if (q2 > 0) throw std::invalid_argument("dataset header: x1_* columns must precede x2_*");
      data.x1_names.push_back(h.substr(3));
      ++q1;
    } else if (h.rfind("x2_", 0) == 0) {
      data.x2_names.push_back(h.substr(3));
      ++q2;
    } else {
      throw std::invalid_argument("dataset header: unexpected column '" + h + "'");
    }
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    auto fields = split_csv_line(t);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields, found " +
                                  std::to_string(fields.size()));
    }
    double y1 = parse_number(fields[1], line_no, "y1");
    double d1 = parse_number(fields[2], line_no, "d1");
    double y2 = parse_number(fields[3], line_no, "y2");
    double d2 = parse_number(fields[4], line_no, "d2");
    if (!(y1 > 0.0) || !(y2 > 0.0)) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": survival times must be positive");
    }
    if ((d1 != 0.0 && d1 != 1.0) || (d2 != 0.0 && d2 != 1.0)) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": censoring indicators must be 0 or 1");
    }
    data.y1.push_back(y1);
    data.d1.push_back(static_cast<int>(d1));
    data.y2.push_back(y2);
    data.d2.push_back(static_cast<int>(d2));
    std::vector<double> row1(q1), row2(q2);
    for (std::size_t c = 0; c < q1; ++c) row1[c] = parse_number(fields[5 + c], line_no, header[5 + c]);
    for (std::size_t c = 0; c < q2; ++c) row2[c] = parse_number(fields[5 + q1 + c], line_no, header[5 + q1 + c]);
    data.x1.push_back(std::move(row1));
    data.x2.push_back(std::move(row2));
  }
  validate_data(data);
  return data;
}

void write_dataset(const BivariateSurvivalData& data, const std::string& path) {
  validate_data(data);
  std::ostringstream out;
  out << "cluster_id,y1,d1,y2,d2";
  for (const auto& n : data.x1_names) out << ",x1_" << n;
  for (const auto& n : data.x2_names) out << ",x2_" << n;
  out << "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << (i + 1) << ',' << format_full(data.y1[i]) << ',' << data.d1[i] << ','
        << format_full(data.y2[i]) << ',' << data.d2[i];
    for (double v : data.x1[i]) out << ',' << format_full(v);
    for (double v : data.x2[i]) out << ',' << format_full(v);
    out << "\n";
  }
  write_text_atomic(out.str(), path);
}

PrepareResult prepare_semicompeting(const std::vector<SemiCompetingRow>& rows,
                                    const std::vector<std::string>& covariate_names) {
  PrepareResult result;
  result.data.x1_names = covariate_names;
  result.data.x2_names = covariate_names;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool has_t = std::isfinite(r.progression);
    const bool has_tstar = std::isfinite(r.death);
    if ((has_t && r.progression <= 0.0) || (has_tstar && r.death <= 0.0) || r.censor <= 0.0) {
      throw std::invalid_argument("row " + std::to_string(i) +
                                  ": null or negative survival times are not allowed");
    }
    double y2 = has_tstar ? std::min(r.death, r.censor) : r.censor;
    int d2 = (has_tstar && r.death <= r.censor) ? 1 : 0;
    double y1 = y2;
    int d1 = 0;
    if (has_t && r.progression <= y2) {
      y1 = r.progression;
      d1 = 1;
      if (has_tstar && r.progression == r.death) {
        // tie resolved toward the terminal event
        d1 = 0;
        result.tie_rows.push_back(i);
      }
    }
    result.data.y1.push_back(y1);
    result.data.d1.push_back(d1);
    result.data.y2.push_back(y2);
    result.data.d2.push_back(d2);
    result.data.x1.push_back(r.covariates);
    result.data.x2.push_back(r.covariates);
  }
  validate_data(result.data);
  return result;
}

PrepareResult prepare_semicompeting_file(const std::string& in_path) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open file: " + in_path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty input: " + in_path);
  auto header = split_csv_line(trim(line));
  if (header.size() < 3 || header[0] != "progression" || header[1] != "death" || header[2] != "censor") {
    throw std::invalid_argument("prepare header must start with progression,death,censor");
  }
  std::vector<std::string> cov_names(header.begin() + 3, header.end());
  std::vector<SemiCompetingRow> rows;
  std::size_t line_no = 1;
  auto parse_optional = [&](const std::string& f) {
    std::string t = trim(f);
    if (t.empty() || t == "NA" || t == "na" || t == "NaN") {
      return std::numeric_limits<double>::quiet_NaN();
    }
    return parse_number(f, line_no, "event time");
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    auto fields = split_csv_line(t);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields");
    }
    SemiCompetingRow r;
    r.progression = parse_optional(fields[0]);
    r.death = parse_optional(fields[1]);
    r.censor = parse_number(fields[2], line_no, "censor");
    for (std::size_t c = 3; c < fields.size(); ++c) {
      r.covariates.push_back(parse_number(fields[c], line_no, header[c]));
    }
    rows.push_back(std::move(r));
  }
  return prepare_semicompeting(rows, cov_names);
}

void standardize_covariates(BivariateSurvivalData& data) {
  auto standardize = [n = data.size()](std::vector<std::vector<double>>& x) {
    if (n == 0 || x[0].empty()) return;
    for (std::size_t c = 0; c < x[0].size(); ++c) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += x[i][c];
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) ss += (x[i][c] - mean) * (x[i][c] - mean);
      double sd = n > 1 ? std::sqrt(ss / (static_cast<double>(n) - 1.0)) : 0.0;
      if (sd <= 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) x[i][c] = (x[i][c] - mean) / sd;
    }
  };
  standardize(data.x1);
  standardize(data.x2);
}

// ---------------------------------------------------------------------------
// configuration

namespace {

void reject_unknown(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
  }
}

MarginStructure parse_margin(const json& j, const std::string& where) {
  reject_unknown(j, {"size", "upsilon", "grid"}, where);
  MarginStructure m;
  if (j.contains("size")) m.size = j.at("size").get<int>();
  if (j.contains("upsilon")) m.upsilon = j.at("upsilon").get<double>();
  if (j.contains("grid")) m.grid = j.at("grid").get<std::vector<double>>();
  return m;
}

ModelSpec parse_model(const json& j, const std::string& where) {
  reject_unknown(j, {"copula", "baseline", "class", "margin1", "margin2"}, where);
  ModelSpec spec;
  spec.copula = family_from_name(j.at("copula").get<std::string>());
  spec.baseline = baseline_from_name(j.at("baseline").get<std::string>());
  spec.klass = class_from_name(j.at("class").get<std::string>());
  if (j.contains("margin1")) spec.margin1 = parse_margin(j.at("margin1"), where + ".margin1");
  if (j.contains("margin2")) spec.margin2 = parse_margin(j.at("margin2"), where + ".margin2");
  return spec;
}

Scenario parse_scenario(const json& j) {
  reject_unknown(j,
                 {"n", "copula", "tau", "baseline", "class", "kappa1", "kappa2", "beta1_short",
                  "beta1_long", "beta2_short", "beta2_long", "censor_caps"},
                 "scenario");
  Scenario s;
  s.n = j.at("n").get<std::size_t>();
  s.copula = family_from_name(j.at("copula").get<std::string>());
  s.tau = j.at("tau").get<double>();
  s.baseline = baseline_from_name(j.at("baseline").get<std::string>());
  s.klass = class_from_name(j.at("class").get<std::string>());
  s.kappa1 = j.at("kappa1").get<std::vector<double>>();
  s.kappa2 = j.at("kappa2").get<std::vector<double>>();
  s.beta1_short = j.at("beta1_short").get<std::vector<double>>();
  s.beta2_short = j.at("beta2_short").get<std::vector<double>>();
  if (j.contains("beta1_long")) s.beta1_long = j.at("beta1_long").get<std::vector<double>>();
  else s.beta1_long.assign(s.beta1_short.size(), 0.0);
  if (j.contains("beta2_long")) s.beta2_long = j.at("beta2_long").get<std::vector<double>>();
  else s.beta2_long.assign(s.beta2_short.size(), 0.0);
  auto caps = j.at("censor_caps").get<std::vector<double>>();
  if (caps.size() != 2) throw std::invalid_argument("config: censor_caps needs exactly two values");
  s.censor_cap1 = caps[0];
  s.censor_cap2 = caps[1];
  validate_scenario(s);
  return s;
}

CrossingRequest parse_crossing(const json& j) {
  reject_unknown(j, {"margin", "x_control", "x_treat", "bootstrap_samples", "level", "bracket"},
                 "crossing");
  CrossingRequest r;
  r.margin = j.at("margin").get<int>();
  r.x_control = j.at("x_control").get<std::vector<double>>();
  r.x_treat = j.at("x_treat").get<std::vector<double>>();
  if (j.contains("bootstrap_samples")) r.bootstrap_samples = j.at("bootstrap_samples").get<std::size_t>();
  if (j.contains("level")) r.level = j.at("level").get<double>();
  if (j.contains("bracket")) {
    auto b = j.at("bracket").get<std::vector<double>>();
    if (b.size() != 2 || !(b[0] > 0.0) || !(b[1] > b[0])) {
      throw std::invalid_argument("config: crossing bracket must be two increasing positive times");
    }
    r.bracket_lo = b[0];
    r.bracket_hi = b[1];
  }
  return r;
}

FitOptions parse_fit(const json& j) {
  reject_unknown(j,
                 {"max_iterations", "grad_tol", "rel_tol", "fd_grad_step", "fd_hess_step",
                  "multistart", "level"},
                 "fit");
  FitOptions f;
  if (j.contains("max_iterations")) f.max_iterations = j.at("max_iterations").get<int>();
  if (j.contains("grad_tol")) f.grad_tol = j.at("grad_tol").get<double>();
  if (j.contains("rel_tol")) f.rel_tol = j.at("rel_tol").get<double>();
  if (j.contains("fd_grad_step")) f.fd_grad_rel_step = j.at("fd_grad_step").get<double>();
  if (j.contains("fd_hess_step")) f.fd_hess_rel_step = j.at("fd_hess_step").get<double>();
  if (j.contains("multistart")) f.multistart = j.at("multistart").get<int>();
  if (j.contains("level")) f.level = j.at("level").get<double>();
  return f;
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  reject_unknown(j, {"seed", "workers", "model", "fit", "scenario", "mc", "crossing"}, "top level");
  RunConfig cfg;
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
  if (j.contains("model")) cfg.model = parse_model(j.at("model"), "model");
  if (j.contains("fit")) cfg.fit = parse_fit(j.at("fit"));
  if (j.contains("scenario")) cfg.scenario = parse_scenario(j.at("scenario"));
  if (j.contains("mc")) {
    const json& m = j.at("mc");
    reject_unknown(m, {"replicas", "specs", "keep_records"}, "mc");
    cfg.mc_replicas = m.at("replicas").get<std::size_t>();
    for (const auto& sj : m.at("specs")) cfg.mc_specs.push_back(parse_model(sj, "mc.specs"));
    if (m.contains("keep_records")) cfg.mc_keep_records = m.at("keep_records").get<bool>();
  }
  if (j.contains("crossing")) {
    cfg.crossing = parse_crossing(j.at("crossing"));
    cfg.crossing->seed = cfg.seed;
    cfg.crossing->workers = cfg.workers;
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// reports

void write_text_atomic(const std::string& text, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + tmp);
    out << text;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
  }
}

namespace {

json model_to_json(const ModelSpec& spec) {
  json j;
  j["copula"] = family_name(spec.copula);
  j["baseline"] = baseline_name(spec.baseline);
  j["class"] = class_name(spec.klass);
  json m1, m2;
  m1["size"] = spec.margin1.size;
  m2["size"] = spec.margin2.size;
  if (spec.margin1.upsilon > 0.0) m1["upsilon"] = spec.margin1.upsilon;
  if (spec.margin2.upsilon > 0.0) m2["upsilon"] = spec.margin2.upsilon;
  if (!spec.margin1.grid.empty()) m1["grid"] = spec.margin1.grid;
  if (!spec.margin2.grid.empty()) m2["grid"] = spec.margin2.grid;
  j["margin1"] = m1;
  j["margin2"] = m2;
  return j;
}

}  // namespace

std::string fit_report_json(const FitResult& fit, double level) {
  json j;
  j["model"] = model_to_json(fit.spec);
  j["converged"] = fit.converged;
  j["loglik"] = fit.loglik;
  j["n_params"] = fit.n_params;
  j["aic"] = aic(fit);
  j["theta"] = fit.params.theta;
  json est = json::array();
  auto intervals = fit.se_natural.empty() ? std::vector<Interval>(fit.natural.size())
                                          : wald_intervals(fit, level);
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    json e;
    e["name"] = fit.names[i];
    e["estimate"] = fit.natural[i];
    if (!fit.se_natural.empty()) {
      e["se"] = fit.se_natural[i];
      e["lower"] = intervals[i].lower;
      e["upper"] = intervals[i].upper;
    }
    est.push_back(e);
  }
  j["estimates"] = est;
  if (fit.converged && !fit.se_packed.empty()) {
    TauEstimate te = tau_with_interval(fit, level);
    j["tau"] = {{"estimate", te.tau},
                {"lower", te.interval.lower},
                {"upper", te.interval.upper},
                {"clipped", te.clipped}};
  }
  j["diagnostics"] = {{"iterations", fit.iterations},
                      {"evaluations", fit.evaluations},
                      {"clamped_survival_values", fit.clamped_values},
                      {"restarts", fit.restarts},
                      {"hessian_ok", fit.hessian_ok},
                      {"message", fit.message}};
  return j.dump(2) + "\n";
}

std::string mc_report_json(const McReport& report) {
  json j;
  j["replicas"] = report.replicas;
  j["scenario"] = {{"n", report.scenario.n},
                   {"copula", family_name(report.scenario.copula)},
                   {"tau", report.scenario.tau},
                   {"tau_clamped", report.scenario.tau_clamped},
                   {"baseline", baseline_name(report.scenario.baseline)},
                   {"class", class_name(report.scenario.klass)},
                   {"seed", report.scenario.seed}};
  json specs = json::array();
  for (const auto& sr : report.specs) {
    json s;
    s["label"] = sr.label;
    s["model"] = model_to_json(sr.spec);
    s["mean_aic"] = sr.mean_aic;
    s["choice_proportion"] = sr.choice_proportion;
    s["converged"] = sr.converged;
    s["nonconverged"] = sr.nonconverged;
    json stats;
    for (const auto& [name, st] : sr.stats) {
      stats[name] = {{"truth", st.truth}, {"ae", st.ae},   {"sde", st.sde}, {"ase", st.ase},
                     {"arb", st.arb},     {"alb", st.alb}, {"aub", st.aub}, {"cr", st.cr},
                     {"used", st.used}};
    }
    s["stats"] = stats;
    specs.push_back(s);
  }
  j["specs"] = specs;
  return j.dump(2) + "\n";
}

std::string mc_records_csv(const McReport& report) {
  std::ostringstream out;
  out << "replica,spec,quantity,value\n";
  for (std::size_t r = 0; r < report.records.size(); ++r) {
    const auto& rec = report.records[r];
    for (std::size_t k = 0; k < report.specs.size(); ++k) {
      const std::string& label = report.specs[k].label;
      out << r << ',' << label << ",converged," << rec.converged[k] << "\n";
      out << r << ',' << label << ",loglik," << format_full(rec.loglik[k]) << "\n";
      out << r << ',' << label << ",aic," << format_full(rec.aic[k]) << "\n";
      for (const auto& [name, value] : rec.estimates[k]) {
        out << r << ',' << label << ',' << name << ',' << format_full(value) << "\n";
      }
    }
  }
  return out.str();
}

std::string crossing_report_json(const CrossingInterval& ci, const CrossingRequest& req) {
  json j;
  j["margin"] = req.margin;
  j["x_control"] = req.x_control;
  j["x_treat"] = req.x_treat;
  j["point"] = ci.point;
  j["lower"] = ci.lower;
  j["upper"] = ci.upper;
  j["level"] = req.level;
  j["bootstrap_samples"] = req.bootstrap_samples;
  j["successes"] = ci.successes;
  j["failures"] = ci.failures;
  j["unreliable"] = ci.unreliable;
  return j.dump(2) + "\n";
}

std::string lr_report_json(const FitResult& reduced, const FitResult& full, const LrResult& lr,
                           double level) {
  json j;
  j["reduced"] = {{"model", model_to_json(reduced.spec)}, {"loglik", reduced.loglik},
                  {"n_params", reduced.n_params}};
  j["full"] = {{"model", model_to_json(full.spec)}, {"loglik", full.loglik},
               {"n_params", full.n_params}};
  j["stat"] = lr.stat;
  j["df"] = lr.df;
  j["p_value"] = lr.p_value;
  j["level"] = level;
  j["decision"] = lr.p_value < 1.0 - level ? std::string(class_name(full.spec.klass))
                                           : std::string(class_name(reduced.spec.klass));
  return j.dump(2) + "\n";
}

}  // namespace survcop
