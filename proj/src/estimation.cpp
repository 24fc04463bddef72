#include "survcop/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "survcop/bfgs.hpp"
#include "survcop/rng.hpp"
#include "survcop/special_functions.hpp"

namespace survcop {

namespace {

// ---- small dense symmetric linear algebra -------------------------------

bool cholesky_inverse(const std::vector<double>& a, std::size_t n, std::vector<double>& inv) {
  std::vector<double> L(a);
  for (std::size_t j = 0; j < n; ++j) {
    double d = L[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= L[j * n + k] * L[j * n + k];
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    L[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = L[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      L[i * n + j] = s / d;
    }
  }
  // invert L in place, then inv = L^{-T} L^{-1}
  for (std::size_t j = 0; j < n; ++j) {
    L[j * n + j] = 1.0 / L[j * n + j];
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s += L[i * n + k] * L[k * n + j];
      L[i * n + j] = -s * (1.0 / L[i * n + i]);
    }
  }
  inv.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = i; k < n; ++k) s += L[k * n + i] * L[k * n + j];
      inv[i * n + j] = s;
      inv[j * n + i] = s;
    }
  }
  return true;
}

// cyclic Jacobi eigendecomposition for the pseudo-inverse fallback
void jacobi_eigen(std::vector<double> a, std::size_t n, std::vector<double>& values,
                  std::vector<double>& vectors) {
  vectors.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) vectors[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
    }
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        if (std::fabs(apq) < 1e-300) continue;
        double app = a[p * n + p], aqq = a[q * n + q];
        double phi = 0.5 * std::atan2(2.0 * apq, aqq - app);
        double c = std::cos(phi), s = std::sin(phi);
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = vectors[k * n + p], vkq = vectors[k * n + q];
          vectors[k * n + p] = c * vkp - s * vkq;
          vectors[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i];
}

std::vector<double> pseudo_inverse(const std::vector<double>& a, std::size_t n) {
  std::vector<double> values, vectors;
  jacobi_eigen(a, n, values, vectors);
  double dmax = 0.0;
  for (double v : values) dmax = std::max(dmax, std::fabs(v));
  double cut = dmax * 1e-12;
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::fabs(values[k]) <= cut) continue;
    double w = 1.0 / values[k];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        inv[i * n + j] += w * vectors[i * n + k] * vectors[j * n + k];
      }
    }
  }
  return inv;
}

// ---- structural resolution ----------------------------------------------

std::vector<double> quantile_grid(std::vector<double> events, int p) {
  std::sort(events.begin(), events.end());
  std::vector<double> grid(p);
  const std::size_t n = events.size();
  for (int k = 1; k <= p; ++k) {
    double h = (static_cast<double>(k) / p) * (static_cast<double>(n) - 1.0);
    std::size_t lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, n - 1);
    grid[k - 1] = events[lo] + (h - std::floor(h)) * (events[hi] - events[lo]);
  }
  // enforce strict monotonicity (tied event times collapse quantiles)
  for (int k = 1; k < p; ++k) {
    if (grid[k] <= grid[k - 1]) grid[k] = grid[k - 1] * (1.0 + 1e-9) + 1e-12;
  }
  return grid;
}

BaselineParams resolve_skeleton(BaselineFamily family, const MarginStructure& st,
                                std::span<const double> y, std::span<const int> dd,
                                std::size_t n) {
  BaselineParams b;
  b.family = family;
  switch (family) {
    case BaselineFamily::Weibull:
      b.kappa.assign(2, 1.0);
      break;
    case BaselineFamily::ExpWeibull:
      throw std::invalid_argument("fit: the exponentiated Weibull baseline is generation-only");
    case BaselineFamily::BP: {
      int m = st.size > 0 ? st.size : structural_size(n);
      double ymax = *std::max_element(y.begin(), y.end());
      b.upsilon = st.upsilon > 0.0 ? st.upsilon : 1.01 * ymax;
      b.kappa.assign(m, 1.0);
      break;
    }
    case BaselineFamily::PE: {
      int p = st.size > 0 ? st.size : structural_size(n);
      if (!st.grid.empty()) {
        b.grid = st.grid;
        p = static_cast<int>(st.grid.size());
      } else {
        std::vector<double> events;
        for (std::size_t i = 0; i < y.size(); ++i) {
          if (dd[i]) events.push_back(y[i]);
        }
        if (events.size() < 2) throw std::invalid_argument("fit: PE grid needs at least two uncensored times");
        b.grid = quantile_grid(std::move(events), p);
      }
      b.kappa.assign(p, 1.0);
      break;
    }
  }
  return b;
}

std::size_t kappa_dim(const BaselineParams& skel) { return skel.kappa.size(); }

}  // namespace

std::size_t PackLayout::dim() const {
  std::size_t d = 1 + kappa_dim(skeleton1) + kappa_dim(skeleton2) + q1 + q2;
  if (spec.klass == RegressionClass::YP) d += q1 + q2;
  return d;
}

std::vector<std::string> PackLayout::names() const {
  std::vector<std::string> out;
  out.push_back("theta");
  auto kappa_names = [&out](const BaselineParams& skel, const std::string& tag) {
    switch (skel.family) {
      case BaselineFamily::Weibull:
        out.push_back("alpha" + tag);
        out.push_back("lambda" + tag);
        break;
      case BaselineFamily::ExpWeibull:
        out.push_back("alpha" + tag);
        out.push_back("lambda" + tag);
        out.push_back("xi" + tag);
        break;
      case BaselineFamily::BP:
        for (std::size_t k = 0; k < skel.kappa.size(); ++k) {
          out.push_back("gamma" + tag + "_" + std::to_string(k + 1));
        }
        break;
      case BaselineFamily::PE:
        for (std::size_t k = 0; k < skel.kappa.size(); ++k) {
          out.push_back("lambda" + tag + "_" + std::to_string(k + 1));
        }
        break;
    }
  };
  kappa_names(skeleton1, "1");
  kappa_names(skeleton2, "2");
  for (std::size_t l = 0; l < q1; ++l) out.push_back("beta1S_" + std::to_string(l + 1));
  if (spec.klass == RegressionClass::YP) {
    for (std::size_t l = 0; l < q1; ++l) out.push_back("beta1L_" + std::to_string(l + 1));
  }
  for (std::size_t l = 0; l < q2; ++l) out.push_back("beta2S_" + std::to_string(l + 1));
  if (spec.klass == RegressionClass::YP) {
    for (std::size_t l = 0; l < q2; ++l) out.push_back("beta2L_" + std::to_string(l + 1));
  }
  return out;
}

PackLayout make_layout(const ModelSpec& spec, const BivariateSurvivalData& data) {
  validate_data(data);
  if (data.size() == 0) throw std::invalid_argument("make_layout: empty dataset");
  PackLayout layout;
  layout.spec = spec;
  layout.q1 = data.x1[0].size();
  layout.q2 = data.x2[0].size();
  layout.skeleton1 = resolve_skeleton(spec.baseline, spec.margin1, data.y1, data.d1, data.size());
  layout.skeleton2 = resolve_skeleton(spec.baseline, spec.margin2, data.y2, data.d2, data.size());
  layout.spec.margin1.size = static_cast<int>(layout.skeleton1.kappa.size());
  layout.spec.margin1.upsilon = layout.skeleton1.upsilon;
  layout.spec.margin1.grid = layout.skeleton1.grid;
  layout.spec.margin2.size = static_cast<int>(layout.skeleton2.kappa.size());
  layout.spec.margin2.upsilon = layout.skeleton2.upsilon;
  layout.spec.margin2.grid = layout.skeleton2.grid;
  return layout;
}

std::vector<double> pack(const ParamSet& params, const PackLayout& layout) {
  std::vector<double> x;
  x.reserve(layout.dim());
  x.push_back(theta_to_unconstrained(layout.spec.copula, params.theta));
  for (double k : params.baseline1.kappa) {
    if (!(k > 0.0)) throw std::domain_error("pack: baseline parameters must be positive");
    x.push_back(std::log(k));
  }
  for (double k : params.baseline2.kappa) {
    if (!(k > 0.0)) throw std::domain_error("pack: baseline parameters must be positive");
    x.push_back(std::log(k));
  }
  auto push_all = [&x](const std::vector<double>& v) { x.insert(x.end(), v.begin(), v.end()); };
  push_all(params.beta1_short);
  if (layout.spec.klass == RegressionClass::YP) push_all(params.beta1_long);
  push_all(params.beta2_short);
  if (layout.spec.klass == RegressionClass::YP) push_all(params.beta2_long);
  if (x.size() != layout.dim()) throw std::invalid_argument("pack: parameter dimensions do not match the layout");
  return x;
}

ParamSet unpack(std::span<const double> packed, const PackLayout& layout) {
  if (packed.size() != layout.dim()) throw std::invalid_argument("unpack: wrong packed length");
  ParamSet p;
  std::size_t pos = 0;
  p.theta = theta_from_unconstrained(layout.spec.copula, packed[pos++]);
  p.baseline1 = layout.skeleton1;
  for (double& k : p.baseline1.kappa) k = std::exp(packed[pos++]);
  p.baseline2 = layout.skeleton2;
  for (double& k : p.baseline2.kappa) k = std::exp(packed[pos++]);
  auto take = [&](std::size_t q) {
    std::vector<double> v(packed.begin() + pos, packed.begin() + pos + q);
    pos += q;
    return v;
  };
  p.beta1_short = take(layout.q1);
  switch (layout.spec.klass) {
    case RegressionClass::PH: p.beta1_long = p.beta1_short; break;
    case RegressionClass::PO: p.beta1_long.assign(layout.q1, 0.0); break;
    case RegressionClass::YP: p.beta1_long = take(layout.q1); break;
  }
  p.beta2_short = take(layout.q2);
  switch (layout.spec.klass) {
    case RegressionClass::PH: p.beta2_long = p.beta2_short; break;
    case RegressionClass::PO: p.beta2_long.assign(layout.q2, 0.0); break;
    case RegressionClass::YP: p.beta2_long = take(layout.q2); break;
  }
  return p;
}

namespace {

// block index of each packed coordinate: 0 theta, 1 margin 1, 2 margin 2
std::vector<int> coordinate_blocks(const PackLayout& layout) {
  std::vector<int> blocks;
  blocks.push_back(0);
  std::size_t k1 = kappa_dim(layout.skeleton1), k2 = kappa_dim(layout.skeleton2);
  std::size_t b1 = layout.q1 * (layout.spec.klass == RegressionClass::YP ? 2 : 1);
  std::size_t b2 = layout.q2 * (layout.spec.klass == RegressionClass::YP ? 2 : 1);
  blocks.insert(blocks.end(), k1, 1);
  blocks.insert(blocks.end(), k2, 2);
  blocks.insert(blocks.end(), b1, 1);
  blocks.insert(blocks.end(), b2, 2);
  return blocks;
}

struct PackedObjective {
  LoglikWorkspace* ws;
  const PackLayout* layout;
  std::vector<int> blocks;
  double fd_rel_step;

  double operator()(std::span<const double> x) const {
    ParamSet p = unpack(x, *layout);
    double ll = ws->eval_full(p);
    return -ll;
  }

  // central differences; single-block coordinates reuse the cached margin
  void gradient(std::span<const double> x, std::span<double> g) const {
    ParamSet base = unpack(x, *layout);
    ws->eval_full(base);  // sync cached margins with x
    std::vector<double> xp(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
      double h = fd_rel_step * std::max(1.0, std::fabs(x[i]));
      double fp, fm;
      if (blocks[i] == 0) {
        fp = -ws->eval_theta(theta_from_unconstrained(layout->spec.copula, x[i] + h));
        fm = -ws->eval_theta(theta_from_unconstrained(layout->spec.copula, x[i] - h));
      } else {
        xp[i] = x[i] + h;
        fp = -ws->eval_margin(blocks[i], unpack(xp, *layout));
        xp[i] = x[i] - h;
        fm = -ws->eval_margin(blocks[i], unpack(xp, *layout));
        xp[i] = x[i];
      }
      g[i] = (fp - fm) / (2.0 * h);
    }
  }
};

// theta packed far outside any plausible range signals a boundary-pinned fit
bool theta_pinned(CopulaFamily family, double z) {
  switch (family) {
    case CopulaFamily::AMH: return std::fabs(z) > 9.0;
    case CopulaFamily::Clayton: return z < -9.0 || z > 9.0;
    case CopulaFamily::Frank: return std::fabs(z) > 60.0;
    case CopulaFamily::GH:
    case CopulaFamily::Joe: return z < -9.0 || z > 9.0;
  }
  return false;
}

// marginal fit of one margin's (kappa, beta) with theta absent
void marginal_init(LoglikWorkspace& ws, int margin, const PackLayout& layout,
                   const BivariateSurvivalData& data, BaselineParams& b,
                   std::vector<double>& beta_short, std::vector<double>& beta_long,
                   const FitOptions& options) {
  const auto& y = (margin == 1) ? data.y1 : data.y2;
  const auto& dd = (margin == 1) ? data.d1 : data.d2;
  const std::size_t q = (margin == 1) ? layout.q1 : layout.q2;
  double events = 0.0, total_time = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    events += dd[i];
    total_time += y[i];
  }
  double rate = std::max(events, 1.0) / total_time;

  // crude hazard-scale starting values
  switch (b.family) {
    case BaselineFamily::Weibull:
      b.kappa = {1.0, rate};
      break;
    case BaselineFamily::BP: {
      double h_total = rate * b.upsilon;
      b.kappa.assign(b.kappa.size(), std::max(h_total / static_cast<double>(b.kappa.size()), 1e-4));
      break;
    }
    case BaselineFamily::PE:
      b.kappa.assign(b.kappa.size(), rate);
      break;
    case BaselineFamily::ExpWeibull:
      break;
  }
  beta_short.assign(q, 0.0);
  beta_long.assign(q, 0.0);

  const bool yp = layout.spec.klass == RegressionClass::YP;
  const std::size_t nk = b.kappa.size();
  const std::size_t dim = nk + q * (yp ? 2 : 1);
  std::vector<double> x0(dim, 0.0);
  for (std::size_t k = 0; k < nk; ++k) x0[k] = std::log(b.kappa[k]);

  auto unpack_m = [&](std::span<const double> x, BaselineParams& bb, std::vector<double>& bs,
                      std::vector<double>& bl) {
    bb = b;
    for (std::size_t k = 0; k < nk; ++k) bb.kappa[k] = std::exp(x[k]);
    bs.assign(x.begin() + nk, x.begin() + nk + q);
    if (yp) {
      bl.assign(x.begin() + nk + q, x.end());
    } else if (layout.spec.klass == RegressionClass::PH) {
      bl = bs;
    } else {
      bl.assign(q, 0.0);
    }
  };

  BaselineParams bb = b;
  std::vector<double> bs, bl;
  auto obj = [&](std::span<const double> x) {
    unpack_m(x, bb, bs, bl);
    return -ws.eval_marginal(margin, bb, bs, bl);
  };
  auto grad = [&](std::span<const double> x, std::span<double> g) {
    std::vector<double> xp(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
      double h = options.fd_grad_rel_step * std::max(1.0, std::fabs(x[i]));
      xp[i] = x[i] + h;
      double fp = obj(xp);
      xp[i] = x[i] - h;
      double fm = obj(xp);
      xp[i] = x[i];
      g[i] = (fp - fm) / (2.0 * h);
    }
  };

  BfgsOptions bopts;
  bopts.max_iterations = options.max_iterations;
  bopts.grad_tol = 10.0 * options.grad_tol;  // coarse: this is only a start value
  bopts.rel_f_tol = 1e-9;
  BfgsResult r = minimize_bfgs(obj, grad, x0, bopts);
  unpack_m(r.x, b, beta_short, beta_long);
}

double initial_theta(const BivariateSurvivalData& data, CopulaFamily family) {
  std::vector<double> t1, t2;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.d1[i] == 1 && data.d2[i] == 1) {
      t1.push_back(data.y1[i]);
      t2.push_back(data.y2[i]);
    }
  }
  double tau = 0.1;
  if (t1.size() >= 30) tau = empirical_kendall_tau(t1, t2);
  auto [lo, hi] = tau_range(family);
  tau = std::clamp(tau, lo + 0.02, hi - 0.02);
  if (family == CopulaFamily::Clayton || family == CopulaFamily::GH || family == CopulaFamily::Joe) {
    tau = std::max(tau, 0.02);
  }
  if (family == CopulaFamily::Frank && std::fabs(tau) < 0.02) tau = 0.02;
  return tau_inverse(family, tau);
}

}  // namespace

FitResult fit(const BivariateSurvivalData& data, const ModelSpec& spec, const FitOptions& options) {
  PackLayout layout = make_layout(spec, data);
  LoglikWorkspace ws(layout.spec, data, layout.skeleton1, layout.skeleton2);

  ParamSet start;
  if (options.init.has_value()) {
    start = *options.init;
    start.baseline1.family = layout.skeleton1.family;
    start.baseline1.upsilon = layout.skeleton1.upsilon;
    start.baseline1.grid = layout.skeleton1.grid;
    start.baseline2.family = layout.skeleton2.family;
    start.baseline2.upsilon = layout.skeleton2.upsilon;
    start.baseline2.grid = layout.skeleton2.grid;
    if (start.baseline1.kappa.size() != layout.skeleton1.kappa.size() ||
        start.baseline2.kappa.size() != layout.skeleton2.kappa.size()) {
      throw std::invalid_argument("fit: warm-start baseline dimensions do not match the layout");
    }
  } else {
    start.baseline1 = layout.skeleton1;
    start.baseline2 = layout.skeleton2;
    marginal_init(ws, 1, layout, data, start.baseline1, start.beta1_short, start.beta1_long, options);
    marginal_init(ws, 2, layout, data, start.baseline2, start.beta2_short, start.beta2_long, options);
    start.theta = initial_theta(data, spec.copula);
  }

  PackedObjective obj{&ws, &layout, coordinate_blocks(layout), options.fd_grad_rel_step};
  auto objective = [&obj](std::span<const double> x) { return obj(x); };
  auto gradient = [&obj](std::span<const double> x, std::span<double> g) { obj.gradient(x, g); };

  BfgsOptions bopts;
  bopts.max_iterations = options.max_iterations;
  bopts.grad_tol = options.grad_tol;
  bopts.rel_f_tol = options.rel_tol;

  std::vector<double> x0 = pack(start, layout);
  BfgsResult best = minimize_bfgs(objective, gradient, x0, bopts, options.init_inv_hessian);
  int restarts = 0;
  Rng jitter(options.seed);
  while ((!best.converged || theta_pinned(spec.copula, best.x[0])) && restarts < options.multistart) {
    ++restarts;
    std::vector<double> xj = x0;
    for (double& v : xj) v += 0.2 * jitter.normal() * std::max(1.0, std::fabs(v));
    if (!std::isfinite(objective(xj))) continue;
    BfgsResult alt = minimize_bfgs(objective, gradient, xj, bopts);
    if (alt.f < best.f || (!best.converged && alt.converged)) best = std::move(alt);
    if (best.converged && !theta_pinned(spec.copula, best.x[0])) break;
  }

  FitResult out;
  out.spec = layout.spec;
  out.layout = layout;
  out.packed = best.x;
  out.params = unpack(best.x, layout);
  out.loglik = -best.f;
  out.converged = best.converged;
  out.n_params = static_cast<int>(layout.dim());
  out.iterations = best.iterations;
  out.restarts = restarts;
  out.evaluations = ws.diagnostics().evaluations;
  out.clamped_values = ws.diagnostics().clamped_survival_values;
  out.names = layout.names();
  if (!best.converged) out.message = "optimizer did not meet the convergence tolerances";

  out.natural.resize(layout.dim());
  out.natural[0] = out.params.theta;
  {
    std::size_t pos = 1;
    for (double k : out.params.baseline1.kappa) out.natural[pos++] = k;
    for (double k : out.params.baseline2.kappa) out.natural[pos++] = k;
    for (double v : out.params.beta1_short) out.natural[pos++] = v;
    if (layout.spec.klass == RegressionClass::YP) {
      for (double v : out.params.beta1_long) out.natural[pos++] = v;
    }
    for (double v : out.params.beta2_short) out.natural[pos++] = v;
    if (layout.spec.klass == RegressionClass::YP) {
      for (double v : out.params.beta2_long) out.natural[pos++] = v;
    }
  }

  if (options.compute_information && out.converged) {
    const std::size_t p = layout.dim();
    std::vector<double> info = observed_information_at(ws, layout, best.x, options.fd_hess_rel_step);
    if (!cholesky_inverse(info, p, out.covariance)) {
      out.hessian_ok = false;
      out.covariance = pseudo_inverse(info, p);
      out.message += (out.message.empty() ? "" : "; ");
      out.message += "observed information not positive definite, pseudo-inverse used";
    }
    out.se_packed.resize(p);
    out.se_natural.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
      double var = out.covariance[i * p + i];
      out.se_packed[i] = var > 0.0 ? std::sqrt(var) : 0.0;
      double scale;
      if (i == 0) {
        switch (spec.copula) {
          case CopulaFamily::AMH: scale = 1.0 - out.params.theta * out.params.theta; break;
          case CopulaFamily::Clayton: scale = out.params.theta; break;
          case CopulaFamily::Frank: scale = 1.0; break;
          default: scale = out.params.theta - 1.0; break;
        }
      } else if (i <= out.params.baseline1.kappa.size() + out.params.baseline2.kappa.size()) {
        scale = out.natural[i];  // log link
      } else {
        scale = 1.0;
      }
      out.se_natural[i] = std::fabs(scale) * out.se_packed[i];
    }
  }
  return out;
}

std::vector<double> observed_information_at(LoglikWorkspace& ws, const PackLayout& layout,
                                            std::span<const double> packed, double rel_step) {
  auto f = [&](std::span<const double> xx) { return -ws.eval_full(unpack(xx, layout)); };
  return fd_hessian(f, packed, rel_step);
}

std::vector<double> observed_information(const FitResult& fitted, const BivariateSurvivalData& data) {
  LoglikWorkspace ws(fitted.layout.spec, data, fitted.layout.skeleton1, fitted.layout.skeleton2);
  return observed_information_at(ws, fitted.layout, fitted.packed, 1e-4);
}

std::vector<Interval> wald_intervals(const FitResult& fitted, double level) {
  if (!(level > 0.0) || !(level < 1.0)) throw std::invalid_argument("wald_intervals: level in (0, 1)");
  double z = normal_quantile(0.5 * (1.0 + level));
  std::vector<Interval> out(fitted.natural.size());
  for (std::size_t i = 0; i < fitted.natural.size(); ++i) {
    double se = i < fitted.se_natural.size() ? fitted.se_natural[i] : 0.0;
    out[i] = {fitted.natural[i] - z * se, fitted.natural[i] + z * se};
  }
  return out;
}

double aic(const FitResult& fitted) { return 2.0 * fitted.n_params - 2.0 * fitted.loglik; }

LrResult lr_test(const FitResult& reduced, const FitResult& full) {
  if (reduced.spec.copula != full.spec.copula || reduced.spec.baseline != full.spec.baseline) {
    throw std::invalid_argument("lr_test: models differ in copula or baseline; not nested");
  }
  bool nested = full.spec.klass == RegressionClass::YP &&
                (reduced.spec.klass == RegressionClass::PH || reduced.spec.klass == RegressionClass::PO);
  if (!nested) throw std::invalid_argument("lr_test: the reduced class must be PH or PO inside a YP full model");
  int df = full.n_params - reduced.n_params;
  if (df <= 0) throw std::invalid_argument("lr_test: zero degrees of freedom; models are not nested");
  LrResult r;
  r.stat = 2.0 * (full.loglik - reduced.loglik);
  r.df = df;
  r.p_value = chi2_sf(r.stat, df);
  return r;
}

TauEstimate tau_with_interval(const FitResult& fitted, double level) {
  TauEstimate est;
  CopulaParam p{fitted.spec.copula, fitted.params.theta};
  est.tau = kendall_tau(p);
  double z = normal_quantile(0.5 * (1.0 + level));
  double se_link = fitted.se_packed.empty() ? 0.0 : fitted.se_packed[0];
  double zlo = fitted.packed[0] - z * se_link;
  double zhi = fitted.packed[0] + z * se_link;
  double tlo = theta_from_unconstrained(fitted.spec.copula, zlo);
  double thi = theta_from_unconstrained(fitted.spec.copula, zhi);
  // clip into the closure of the family domain
  auto clip = [&](double th) {
    double lo, hi;
    switch (fitted.spec.copula) {
      case CopulaFamily::AMH: lo = -1.0; hi = 1.0; break;
      case CopulaFamily::Clayton: lo = 1e-12; hi = std::numeric_limits<double>::infinity(); break;
      case CopulaFamily::Frank: lo = -1e4; hi = 1e4; break;
      default: lo = 1.0; hi = std::numeric_limits<double>::infinity(); break;
    }
    double c = std::clamp(th, lo, hi);
    if (c != th) est.clipped = true;
    return c;
  };
  est.interval.lower = kendall_tau({fitted.spec.copula, clip(tlo)});
  est.interval.upper = kendall_tau({fitted.spec.copula, clip(thi)});
  if (est.interval.lower > est.interval.upper) std::swap(est.interval.lower, est.interval.upper);
  return est;
}

double sample_quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw std::invalid_argument("sample_quantile: empty sample");
  prob = std::clamp(prob, 0.0, 1.0);
  std::sort(values.begin(), values.end());
  double h = prob * (static_cast<double>(values.size()) - 1.0);
  std::size_t lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - std::floor(h)) * (values[hi] - values[lo]);
}

}  // namespace survcop
