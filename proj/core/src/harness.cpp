#include "regkit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <numbers>
#include <set>
#include <thread>

#include "regkit/bootkn.hpp"
#include "regkit/designs.hpp"
#include "regkit/errors.hpp"
#include "regkit/isd.hpp"
#include "regkit/mest.hpp"
#include "regkit/metrics.hpp"
#include "regkit/npiv.hpp"
#include "regkit/selector.hpp"

namespace regkit {

namespace {

class Design {
 public:
  virtual ~Design() = default;
  virtual void prepare(const ExperimentConfig& /*cfg*/) {}
  virtual ExperimentRecord run(std::size_t n, std::uint64_t seed) const = 0;
};

const std::vector<DesignInfo>& design_table() {
  static const std::vector<DesignInfo> table = {
      {"isd-normal", "∫p² for N(0,1) data; kernel pair-sum estimator, Giné-Nickl grid, GAL Lepski selection",
       "number of grid values",
       {"kernel", "lambda", "loo", "grid_a", "grid_delta", "slow_factor", "holder_exponent", "holder_scale",
        "log_power"}},
      {"isd-holder", "∫p² for the cusp density c(1-|x|^γ) on [-1,1]; same pipeline as isd-normal",
       "number of grid values",
       {"kernel", "lambda", "loo", "grid_a", "grid_delta", "slow_factor", "cusp_gamma", "holder_scale",
        "log_power"}},
      {"boot-boundary", "k-out-of-n bootstrap of √n max(mean, 0) for N(0,1) data; Lepski-selected k over dyadic grid ∪ {n}",
       "BL distance of the full (k = n) bootstrap law to the true law",
       {"B", "truth_sims", "third_moment", "slow_factor"}},
      {"npiv-sieve", "γ = ∫π h for the Gaussian-copula NPIV design; series 2SLS at fixed L",
       "standardized error (γ̂ - γ) / se",
       {"L", "J", "basis", "pi", "proxy", "rho_iv", "endogeneity", "noise"}},
      {"npiv-tikhonov", "γ = ∫π h for the Gaussian-copula NPIV design; kernel-smoothed Tikhonov at fixed (k, λ)",
       "standard error ‖φ‖/√n",
       {"k", "penalty", "grid_size", "kernel", "pi", "proxy", "rho_iv", "endogeneity", "noise"}},
      {"mest-regression", "Cosine-sieve least squares with uniform Gaussian bands for f(x) = Σ β_j κ_j(x)",
       "1 when the band covers f on the evaluation grid, else 0",
       {"k", "penalty", "alpha", "n_sims", "band_points", "noise", "norm"}},
  };
  return table;
}

KernelSpec kernel_from(const ExperimentConfig& cfg) {
  KernelSpec k;
  const std::string base = cfg.text("kernel", "gaussian");
  if (base == "gaussian")
    k.base = BaseKernel::Gaussian;
  else if (base == "epanechnikov")
    k.base = BaseKernel::Epanechnikov;
  else
    throw ConfigError("unknown kernel '" + base + "'");
  k.lambda = static_cast<int>(cfg.integer("lambda", 0));
  if (k.lambda < -1 || k.lambda > 1) throw ConfigError("lambda must be -1, 0 or 1");
  k.leave_one_out = cfg.integer("loo", 1) != 0;
  return k;
}

std::function<double(double)> pi_from(const ExperimentConfig& cfg) {
  const std::string p = cfg.text("pi", "w");
  if (p == "w") return [](double w) { return w; };
  if (p == "one") return [](double) { return 1.0; };
  throw ConfigError("unknown pi '" + p + "' (expected w or one)");
}

class IsdDesign final : public Design {
 public:
  explicit IsdDesign(bool holder) : holder_(holder) {}

  void prepare(const ExperimentConfig& cfg) override {
    kernel_ = kernel_from(cfg);
    grid_opt_.a = cfg.number("grid_a", 2.0);
    grid_opt_.delta = cfg.number("grid_delta", 0.5);
    grid_opt_.slow_factor = cfg.number("slow_factor", 0.0);
    env_opt_.log_power = cfg.number("log_power", 3.0);
    cusp_.gamma = cfg.number("cusp_gamma", 0.3);
    if (holder_ && !(cusp_.gamma > 0.0 && cusp_.gamma < 0.5)) throw ConfigError("cusp_gamma must lie in (0, 0.5)");
    holder_class_.exponent = holder_ ? cusp_.gamma : cfg.number("holder_exponent", 0.45);
    holder_class_.scale = cfg.number("holder_scale", 1.0);
    env_ = isd_envelopes(holder_class_, kernel_, env_opt_);
    truth_ = holder_ ? cusp_.l2_squared() : 1.0 / (2.0 * std::sqrt(std::numbers::pi));
  }

  ExperimentRecord run(std::size_t n, std::uint64_t seed) const override {
    CounterRng rng(seed);
    const EmpiricalSample sample = holder_ ? cusp_.draw(n, rng) : draw_normal(n, rng);
    const TuningGrid grid = gine_nickl_grid(n, grid_opt_);
    const IsdFamily family(kernel_);
    const auto sel = lepski_select_gal(family, sample, grid, env_, n);
    ExperimentRecord r;
    r.chosen_k = sel.chosen_k;
    r.estimate = std::get<double>(sel.diagnostics.values()[sel.chosen_index]);
    r.truth = truth_;
    r.loss = std::abs(r.estimate - truth_);
    r.oracle_k = oracle_select_gal(grid, env_, n);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] == r.oracle_k) r.oracle_loss = std::abs(std::get<double>(sel.diagnostics.values()[i]) - truth_);
    r.influence_norm = isd_influence(kernel_, r.chosen_k, sample).norm();
    r.aux = static_cast<double>(grid.size());
    return r;
  }

 private:
  bool holder_;
  KernelSpec kernel_{};
  GineNicklOptions grid_opt_{};
  IsdEnvelopeOptions env_opt_{};
  HolderClass holder_class_{};
  CuspDensity cusp_{};
  RateEnvelope env_{};
  double truth_ = 0.0;
};

class BootDesign final : public Design {
 public:
  void prepare(const ExperimentConfig& cfg) override {
    B_ = static_cast<std::size_t>(cfg.integer("B", 2000));
    truth_sims_ = static_cast<std::size_t>(cfg.integer("truth_sims", 100000));
    if (B_ < 1 || truth_sims_ < 1) throw ConfigError("B and truth_sims must be >= 1");
    BootEnvelopeOptions opt;
    opt.third_moment = cfg.number("third_moment", 2.0 * std::sqrt(2.0 / std::numbers::pi));
    opt.slow_factor = cfg.number("slow_factor", 0.0);
    slow_factor_ = opt.slow_factor;
    env_ = boot_envelopes(opt);
    // True law of T_n = √n max(mean, 0) from fresh N(0,1) samples.
    for (std::size_t n : cfg.n_list) {
      std::vector<double> t(truth_sims_);
      const std::uint64_t key = hash_combine(hash_combine(*cfg.seed, hash64("boot-boundary/truth")), n);
      for (std::size_t s = 0; s < truth_sims_; ++s) {
        CounterRng rng(hash_combine(key, s));
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += rng.normal();
        t[s] = std::sqrt(static_cast<double>(n)) * std::max(sum / static_cast<double>(n), 0.0);
      }
      truth_.emplace(n, DiscreteLaw::uniform_over(std::move(t)));
    }
  }

  ExperimentRecord run(std::size_t n, std::uint64_t seed) const override {
    CounterRng rng(seed);
    const EmpiricalSample sample = draw_normal(n, rng);
    const TuningGrid grid = TuningGrid::dyadic(static_cast<long>(n), true);
    const std::uint64_t boot_seed = hash_combine(seed, 1);
    const auto sel = boot_select(sample, grid, B_, boot_seed, slow_factor_);
    const DiscreteLaw& truth = truth_.at(n);
    const auto& laws = sel.diagnostics.values();
    ExperimentRecord r;
    r.chosen_k = sel.chosen_k;
    const auto& chosen = std::get<DiscreteLaw>(laws[sel.chosen_index]);
    r.estimate = chosen.mean();
    r.truth = truth.mean();
    r.loss = bl_distance(chosen, truth);
    r.oracle_k = oracle_select(grid, env_, n);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] == r.oracle_k) r.oracle_loss = bl_distance(std::get<DiscreteLaw>(laws[i]), truth);
    r.influence_norm = std::numeric_limits<double>::quiet_NaN();
    r.aux = bl_distance(std::get<DiscreteLaw>(laws.back()), truth);
    return r;
  }

 private:
  std::size_t B_ = 2000;
  std::size_t truth_sims_ = 100000;
  double slow_factor_ = 0.0;
  RateEnvelope env_{};
  std::map<std::size_t, DiscreteLaw> truth_;
};

NpivDesign npiv_design_from(const ExperimentConfig& cfg) {
  NpivDesign d;
  d.rho = cfg.number("rho_iv", d.rho);
  d.endogeneity = cfg.number("endogeneity", d.endogeneity);
  d.noise = cfg.number("noise", d.noise);
  if (!(std::abs(d.rho) < 1.0) || d.rho == 0.0) throw ConfigError("rho_iv must lie in (-1, 1) and be non-zero");
  return d;
}

class NpivSieveDesign final : public Design {
 public:
  void prepare(const ExperimentConfig& cfg) override {
    design_ = npiv_design_from(cfg);
    const auto L = static_cast<std::size_t>(cfg.integer("L", 3));
    const auto J = static_cast<std::size_t>(cfg.integer("J", static_cast<long>(2 * L)));
    basis_ = SieveBasis::with_L(basis_family_from_string(cfg.text("basis", "cosine")), L, J);
    pi_ = pi_from(cfg);
    pi_coeffs_ = basis_projection(basis_.family, basis_.L, pi_);
    truth_ = design_.functional(pi_);
    const std::string proxy = cfg.text("proxy", "moment");
    if (proxy != "moment" && proxy != "analytic") throw ConfigError("proxy must be moment or analytic");
    analytic_ = proxy == "analytic";
  }

  ExperimentRecord run(std::size_t n, std::uint64_t seed) const override {
    CounterRng rng(seed);
    const EmpiricalSample sample = design_.draw(n, rng);
    const NpivFit fit = npiv_sieve_fit(sample, basis_);
    const NpivDesign d = design_;
    const BiasProxy proxy = analytic_ ? BiasProxy::analytic([d](double w) { return d.h(w); })
                                      : BiasProxy::moment_residual();
    const auto est = npiv_functional(fit, sample, pi_coeffs_, proxy);
    ExperimentRecord r;
    r.chosen_k = static_cast<double>(basis_.L);
    r.oracle_k = r.chosen_k;
    r.estimate = est.value;
    r.truth = truth_;
    r.loss = std::abs(est.value - truth_);
    r.oracle_loss = r.loss;
    r.influence_norm = est.influence.norm();
    r.aux = est.standard_error > 0.0 ? (est.value - truth_) / est.standard_error : 0.0;
    return r;
  }

 private:
  NpivDesign design_{};
  SieveBasis basis_{};
  std::function<double(double)> pi_;
  Eigen::VectorXd pi_coeffs_;
  double truth_ = 0.0;
  bool analytic_ = false;
};

class NpivTikhonovDesign final : public Design {
 public:
  void prepare(const ExperimentConfig& cfg) override {
    design_ = npiv_design_from(cfg);
    spec_.k = cfg.number("k", 10.0);
    spec_.lambda = cfg.number("penalty", 1e-3);
    spec_.grid_size = static_cast<std::size_t>(cfg.integer("grid_size", 201));
    spec_.kernel = kernel_from(cfg);
    spec_.kernel.leave_one_out = false;
    pi_ = pi_from(cfg);
    truth_ = design_.functional(pi_);
    const std::string proxy = cfg.text("proxy", "moment");
    if (proxy != "moment" && proxy != "analytic") throw ConfigError("proxy must be moment or analytic");
    analytic_ = proxy == "analytic";
  }

  ExperimentRecord run(std::size_t n, std::uint64_t seed) const override {
    CounterRng rng(seed);
    const EmpiricalSample sample = design_.draw(n, rng);
    const NpivFit fit = npiv_tikhonov_fit(sample, spec_);
    const NpivDesign d = design_;
    const BiasProxy proxy = analytic_ ? BiasProxy::analytic([d](double w) { return d.h(w); })
                                      : BiasProxy::moment_residual();
    const auto est = npiv_functional(fit, sample, pi_on_grid(fit, pi_), proxy);
    ExperimentRecord r;
    r.chosen_k = spec_.k;
    r.oracle_k = spec_.k;
    r.estimate = est.value;
    r.truth = truth_;
    r.loss = std::abs(est.value - truth_);
    r.oracle_loss = r.loss;
    r.influence_norm = est.influence.norm();
    r.aux = est.standard_error;
    return r;
  }

 private:
  NpivDesign design_{};
  TikhonovSpec spec_{};
  std::function<double(double)> pi_;
  double truth_ = 0.0;
  bool analytic_ = false;
};

class MestDesign final : public Design {
 public:
  void prepare(const ExperimentConfig& cfg) override {
    k_ = static_cast<std::size_t>(cfg.integer("k", 5));
    spec_.lambda = cfg.number("penalty", 0.0);
    alpha_ = cfg.number("alpha", 0.05);
    n_sims_ = static_cast<std::size_t>(cfg.integer("n_sims", 2000));
    design_.noise = cfg.number("noise", 1.0);
    const std::string norm = cfg.text("norm", "sup");
    if (norm != "sup" && norm != "l2") throw ConfigError("norm must be sup or l2");
    norm_ = norm == "sup" ? BandNorm::Sup : BandNorm::L2;
    const auto points = static_cast<std::size_t>(cfg.integer("band_points", 101));
    if (points < 2) throw ConfigError("band_points must be >= 2");
    grid_.resize(points);
    for (std::size_t g = 0; g < points; ++g) grid_[g] = static_cast<double>(g) / static_cast<double>(points - 1);
  }

  ExperimentRecord run(std::size_t n, std::uint64_t seed) const override {
    CounterRng rng(seed);
    const EmpiricalSample sample = design_.draw(n, rng);
    const MestFit fit = mest_fit(sample, BasisFamily::Cosine, k_, spec_);
    const BandResult band = mest_uniform_band(fit, n, grid_, alpha_, n_sims_, hash_combine(seed, 2), norm_);
    double sup_err = 0.0, width = 0.0;
    bool covered = true;
    for (std::size_t g = 0; g < grid_.size(); ++g) {
      const double f = design_.f(grid_[g]);
      sup_err = std::max(sup_err, std::abs(band.center[g] - f));
      width = std::max(width, band.upper[g] - band.lower[g]);
      covered = covered && band.lower[g] <= f && f <= band.upper[g];
    }
    ExperimentRecord r;
    r.chosen_k = static_cast<double>(k_);
    r.oracle_k = r.chosen_k;
    r.estimate = band.quantile;
    r.truth = width;
    r.loss = sup_err;
    r.oracle_loss = sup_err;
    const auto prof = mest_sigma_profile(fit, grid_);
    r.influence_norm = *std::max_element(prof.sigma.begin(), prof.sigma.end());
    r.aux = covered ? 1.0 : 0.0;
    return r;
  }

 private:
  std::size_t k_ = 5;
  LossSpec spec_{};
  double alpha_ = 0.05;
  std::size_t n_sims_ = 2000;
  BandNorm norm_ = BandNorm::Sup;
  RegressionDesign design_{};
  std::vector<double> grid_;
};

std::unique_ptr<Design> make_design(const std::string& name) {
  if (name == "isd-normal") return std::make_unique<IsdDesign>(false);
  if (name == "isd-holder") return std::make_unique<IsdDesign>(true);
  if (name == "boot-boundary") return std::make_unique<BootDesign>();
  if (name == "npiv-sieve") return std::make_unique<NpivSieveDesign>();
  if (name == "npiv-tikhonov") return std::make_unique<NpivTikhonovDesign>();
  if (name == "mest-regression") return std::make_unique<MestDesign>();
  throw ConfigError("unknown design '" + name + "'");
}

void check_param_keys(const ExperimentConfig& cfg) {
  for (const auto& info : design_table()) {
    if (info.name != cfg.design) continue;
    const std::set<std::string> allowed(info.params.begin(), info.params.end());
    for (const auto& [key, value] : cfg.params)
      if (!allowed.count(key)) throw ConfigError("design '" + cfg.design + "' does not accept parameter '" + key + "'");
  }
}

Quantiles quantiles_of(std::vector<double> v) {
  std::erase_if(v, [](double x) { return std::isnan(x); });
  if (v.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  std::sort(v.begin(), v.end());
  return {quantile_sorted(v, 0.1), quantile_sorted(v, 0.5), quantile_sorted(v, 0.9)};
}

std::string fmt(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

nlohmann::json json_number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json json_quantiles(const Quantiles& q) {
  return {{"q10", json_number(q.q10)}, {"q50", json_number(q.q50)}, {"q90", json_number(q.q90)}};
}

}  // namespace

std::vector<DesignInfo> list_designs() { return design_table(); }

std::uint64_t cell_seed(std::uint64_t master, const std::string& design, std::size_t n, std::size_t replication) {
  return hash_combine(hash_combine(hash_combine(master, hash64(design)), n), replication);
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::domain_error("quantile_sorted: empty data");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

RateFit fit_rate(const std::vector<double>& n, const std::vector<double>& median_loss) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n.size(); ++i)
    if (median_loss[i] > 0.0 && std::isfinite(median_loss[i])) {
      x.push_back(std::log(n[i]));
      y.push_back(std::log(median_loss[i]));
    }
  RateFit fit;
  fit.points = x.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (x.size() < 2) {
    fit.slope = fit.intercept = fit.standard_error = nan;
    return fit;
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / m;
    my += y[i] / m;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() < 3) {
    fit.standard_error = nan;
    return fit;
  }
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - fit.intercept - fit.slope * x[i];
    rss += e * e;
  }
  fit.standard_error = std::sqrt(rss / (m - 2.0) / sxx);
  return fit;
}

std::vector<NSummary> summarize(const std::vector<ExperimentRecord>& records) {
  std::map<std::size_t, std::vector<const ExperimentRecord*>> by_n;
  for (const auto& r : records) by_n[r.n].push_back(&r);
  std::vector<NSummary> out;
  for (const auto& [n, rs] : by_n) {
    auto column = [&](double ExperimentRecord::*field) {
      std::vector<double> v;
      v.reserve(rs.size());
      for (const auto* r : rs) v.push_back(r->*field);
      return quantiles_of(std::move(v));
    };
    NSummary s;
    s.n = n;
    s.loss = column(&ExperimentRecord::loss);
    s.oracle_loss = column(&ExperimentRecord::oracle_loss);
    s.chosen_k = column(&ExperimentRecord::chosen_k);
    s.influence_norm = column(&ExperimentRecord::influence_norm);
    s.aux = column(&ExperimentRecord::aux);
    out.push_back(s);
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t threads) {
  config.validate();
  auto design = make_design(config.design);
  check_param_keys(config);
  design->prepare(config);

  struct Cell {
    std::size_t n, rep;
  };
  std::vector<Cell> cells;
  for (std::size_t n : config.n_list)
    for (std::size_t r = 0; r < config.replications; ++r) cells.push_back({n, r});

  std::vector<ExperimentRecord> records(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  auto work = [&](std::size_t idx) {
    const Cell c = cells[idx];
    try {
      const auto t0 = std::chrono::steady_clock::now();
      ExperimentRecord rec = design->run(c.n, cell_seed(*config.seed, config.design, c.n, c.rep));
      rec.n = c.n;
      rec.replication = c.rep;
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      records[idx] = rec;
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };

  if (threads == 0) {
    for (std::size_t i = 0; i < cells.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) work(i);
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ExperimentResult result;
  result.config = config;
  result.records = std::move(records);
  result.summary = summarize(result.records);
  std::vector<double> ns, med;
  for (const auto& s : result.summary) {
    ns.push_back(static_cast<double>(s.n));
    med.push_back(s.loss.q50);
  }
  result.rate = fit_rate(ns, med);
  return result;
}

void write_records_csv(const ExperimentResult& result, const std::string& path) {
  auto out = open_out(path);
  out << "n,replication,chosen_k,estimate,truth,loss,oracle_k,oracle_loss,influence_norm,aux\n";
  for (const auto& r : result.records)
    out << r.n << ',' << r.replication << ',' << fmt(r.chosen_k) << ',' << fmt(r.estimate) << ',' << fmt(r.truth)
        << ',' << fmt(r.loss) << ',' << fmt(r.oracle_k) << ',' << fmt(r.oracle_loss) << ','
        << fmt(r.influence_norm) << ',' << fmt(r.aux) << '\n';
  finish(out, path);
}

void write_summary_json(const ExperimentResult& result, const std::string& path) {
  nlohmann::json j;
  j["design"] = result.config.design;
  j["replications"] = result.config.replications;
  j["seed"] = *result.config.seed;
  j["params"] = result.config.params;
  j["n"] = result.config.n_list;
  nlohmann::json per_n = nlohmann::json::array();
  for (const auto& s : result.summary)
    per_n.push_back({{"n", s.n},
                     {"loss", json_quantiles(s.loss)},
                     {"oracle_loss", json_quantiles(s.oracle_loss)},
                     {"chosen_k", json_quantiles(s.chosen_k)},
                     {"influence_norm", json_quantiles(s.influence_norm)},
                     {"aux", json_quantiles(s.aux)}});
  j["per_n"] = per_n;
  j["rate"] = {{"slope", json_number(result.rate.slope)},
               {"intercept", json_number(result.rate.intercept)},
               {"standard_error", json_number(result.rate.standard_error)},
               {"points", result.rate.points}};
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

void emit_plotdata(const ExperimentResult& result, const std::string& path) {
  auto out = open_out(path);
  out << "n,design,metric,q10,q50,q90\n";
  const std::string design = csv_field(result.config.design);
  for (const auto& s : result.summary) {
    const std::pair<const char*, const Quantiles*> rows[] = {{"loss", &s.loss},
                                                             {"oracle_loss", &s.oracle_loss},
                                                             {"chosen_k", &s.chosen_k},
                                                             {"influence_norm", &s.influence_norm},
                                                             {"aux", &s.aux}};
    for (const auto& [metric, q] : rows)
      out << s.n << ',' << design << ',' << metric << ',' << fmt(q->q10) << ',' << fmt(q->q50) << ','
          << fmt(q->q90) << '\n';
  }
  finish(out, path);
}

void write_results(const ExperimentResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);
  write_records_csv(result, (base / "records.csv").string());
  write_summary_json(result, (base / "summary.json").string());
  emit_plotdata(result, (base / "plotdata.csv").string());
  const std::string timing = (base / "timing.csv").string();
  auto out = open_out(timing);
  out << "n,replication,seconds\n";
  for (const auto& r : result.records) out << r.n << ',' << r.replication << ',' << fmt(r.seconds) << '\n';
  finish(out, timing);
}

}  // namespace regkit
