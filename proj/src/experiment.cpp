#include "dissd/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "dissd/baselines.hpp"
#include "dissd/dissd_glm.hpp"
#include "dissd/dissd_mest.hpp"
#include "dissd/errors.hpp"
#include "dissd/rng.hpp"
#include "dissd/synth.hpp"

namespace dissd {

double f1_score(const std::vector<std::size_t>& estimated,
                const std::vector<std::size_t>& truth) {
  if (truth.empty()) throw ConfigError("f1_score: true support is empty");
  if (estimated.empty()) return 0.0;
  const std::set<std::size_t> truth_set(truth.begin(), truth.end());
  std::size_t hits = 0;
  for (std::size_t l : estimated) hits += truth_set.count(l);
  const double precision = double(hits) / double(estimated.size());
  const double recall = double(hits) / double(truth_set.size());
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

// --- configuration -----------------------------------------------------------

namespace {

const std::vector<std::string> kValidMethods = {"dissd", "oneshot", "csl",
                                                "pooled", "local"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t parse_size(const std::string& key, const std::string& v) {
  try {
    const long long x = std::stoll(v);
    if (x < 0) throw std::out_of_range("negative");
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a nonnegative integer, got '" + v + "'");
  }
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "': expected on/off, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const char* kValidKeys =
    "model noise m n n_star p s T reps seed tau_scale r0_scale lambda_scale "
    "lambda0_scale pgd_lambda_scale csl_lambda_scale oneshot_lambda_scale "
    "bandwidth bandwidth_rule delta psi2_floor offdiag ci_level block "
    "init init_rounds methods out_path threads timing";

}  // namespace

void apply_override(ExperimentConfig& cfg, const std::string& raw_key,
                    const std::string& value) {
  std::string key = raw_key;
  for (char& c : key) {
    if (c == '-') c = '_';
  }
  if (key == "model") cfg.model = value;
  else if (key == "noise") cfg.noise = value;
  else if (key == "m") cfg.m = parse_size(key, value);
  else if (key == "n") cfg.n = parse_size(key, value);
  else if (key == "n_star") cfg.n_star = parse_size(key, value);
  else if (key == "p") cfg.p = parse_size(key, value);
  else if (key == "s") cfg.s = parse_size(key, value);
  else if (key == "T" || key == "t") cfg.T = parse_size(key, value);
  else if (key == "reps") cfg.reps = parse_size(key, value);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_size(key, value));
  else if (key == "tau_scale") cfg.tau_scale = parse_real(key, value);
  else if (key == "r0_scale") cfg.r0_scale = parse_real(key, value);
  else if (key == "lambda_scale") cfg.lambda_scale = parse_real(key, value);
  else if (key == "lambda0_scale") cfg.lambda0_scale = parse_real(key, value);
  else if (key == "pgd_lambda_scale") cfg.pgd_lambda_scale = parse_real(key, value);
  else if (key == "csl_lambda_scale") cfg.csl_lambda_scale = parse_real(key, value);
  else if (key == "oneshot_lambda_scale") cfg.oneshot_lambda_scale = parse_real(key, value);
  else if (key == "bandwidth") cfg.bandwidth = parse_real(key, value);
  else if (key == "bandwidth_rule") cfg.bandwidth_rule = value;
  else if (key == "delta") cfg.delta = parse_real(key, value);
  else if (key == "psi2_floor") cfg.psi2_floor = parse_real(key, value);
  else if (key == "offdiag") cfg.offdiag = parse_real(key, value);
  else if (key == "ci_level") cfg.ci_level = parse_real(key, value);
  else if (key == "block") cfg.block = parse_size(key, value);
  else if (key == "init") cfg.init = value;
  else if (key == "init_rounds") cfg.init_rounds = parse_size(key, value);
  else if (key == "methods") cfg.methods = split_list(value);
  else if (key == "out_path") cfg.out_path = value;
  else if (key == "threads") cfg.threads = static_cast<int>(parse_size(key, value));
  else if (key == "timing") cfg.timing = parse_bool(key, value);
  else {
    throw ConfigError("unknown config key '" + raw_key + "' (valid keys: " +
                      std::string(kValidKeys) + ")");
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value, got '" + line + "'");
    }
    apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  const Model model = parse_model(cfg.model);
  const Noise noise = parse_noise(cfg.noise);
  if (model == Model::logistic && noise != Noise::none) {
    throw ConfigError("model=logistic takes noise=none (labels are Bernoulli)");
  }
  if (model != Model::logistic && noise == Noise::none) {
    throw ConfigError("linear models need noise in {mixture-normal, cauchy, std-normal}");
  }
  if (cfg.n_star < cfg.n) throw ConfigError("n_star must be >= n");
  if (cfg.s > cfg.p || cfg.s == 0) throw ConfigError("requires 1 <= s <= p");
  if (cfg.reps < 1) throw ConfigError("reps must be >= 1");
  if (cfg.m < 1 || cfg.n < 1) throw ConfigError("requires m >= 1 and n >= 1");
  if (cfg.block == 0 || cfg.p % cfg.block != 0) {
    throw ConfigError("block must divide p");
  }
  if (cfg.delta <= 0.0) throw ConfigError("delta must be positive");
  if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0)) {
    throw ConfigError("ci_level must lie in (0,1)");
  }
  if (cfg.bandwidth_rule != "fixed" && cfg.bandwidth_rule != "rate") {
    throw ConfigError("bandwidth_rule must be 'fixed' or 'rate'");
  }
  if (cfg.init != "local" && cfg.init != "random" && cfg.init != "pgd") {
    throw ConfigError("init must be local, random, or pgd");
  }
  if (cfg.methods.empty()) throw ConfigError("methods list is empty");
  for (const std::string& method : cfg.methods) {
    if (std::find(kValidMethods.begin(), kValidMethods.end(), method) ==
        kValidMethods.end()) {
      std::string valid;
      for (const auto& v : kValidMethods) valid += v + " ";
      throw ConfigError("unknown method '" + method + "' (valid: " + valid + ")");
    }
    if (model == Model::logistic && method != "dissd") {
      throw ConfigError("method '" + method + "' supports linear models only");
    }
  }
}

// --- presets -----------------------------------------------------------------

namespace {

ExperimentConfig huber_base() {
  ExperimentConfig cfg;
  cfg.model = "huber-linear";
  cfg.noise = "mixture-normal";
  cfg.delta = 1.345;
  cfg.tau_scale = 1.2;
  cfg.r0_scale = 0.2;
  return cfg;
}

ExperimentConfig median_base() {
  ExperimentConfig cfg;
  cfg.model = "median-linear";
  cfg.noise = "cauchy";
  cfg.bandwidth = 0.1;
  cfg.tau_scale = 1.2;
  cfg.r0_scale = 0.2;
  return cfg;
}

ExperimentConfig logistic_base() {
  ExperimentConfig cfg;
  cfg.model = "logistic";
  cfg.noise = "none";
  cfg.tau_scale = 0.12;
  cfg.r0_scale = 0.1;
  return cfg;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> preset_descriptions() {
  return {
      {"huber-table2", "Huber/mixture noise, p=500 s=10 n=100, vary m and n_star"},
      {"huber-table3", "Huber/mixture noise, m=100 n=100 n_star=n+450, vary p and s"},
      {"median-table4", "Absolute loss/Cauchy noise, p=500 s=10 n=100, vary m and n_star"},
      {"median-table5", "Absolute loss/Cauchy noise, m=100 n_star=n+450, vary p and s"},
      {"logistic-table6", "Logistic labels, p=500 s=10 n=100, vary m and n_star"},
      {"logistic-table7", "Logistic labels, m=100 n_star=n+450, vary p and s"},
      {"huber-figure1", "Huber error/time vs rounds with csl/local/pooled baselines"},
      {"huber-figure2", "Huber initializer comparison (local vs random vs pgd)"},
  };
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  if (name == "huber-table2") {
    cfg = huber_base();
    cfg.reps = 100;
  } else if (name == "huber-table3") {
    cfg = huber_base();
    cfg.p = 400;
    cfg.n_star = cfg.n + 450;
    cfg.reps = 100;
  } else if (name == "median-table4") {
    cfg = median_base();
    cfg.reps = 100;
  } else if (name == "median-table5") {
    cfg = median_base();
    cfg.p = 400;
    cfg.n_star = cfg.n + 450;
    cfg.reps = 100;
  } else if (name == "logistic-table6") {
    cfg = logistic_base();
    cfg.reps = 100;
  } else if (name == "logistic-table7") {
    cfg = logistic_base();
    cfg.p = 400;
    cfg.n_star = cfg.n + 450;
    cfg.reps = 100;
  } else if (name == "huber-figure1") {
    cfg = huber_base();
    cfg.methods = {"dissd", "csl", "local", "pooled"};
    cfg.T = 10;
    cfg.reps = 20;
    cfg.timing = true;
  } else if (name == "huber-figure2") {
    cfg = huber_base();
    cfg.init = "pgd";
    cfg.n_star = cfg.n + 150;
    cfg.T = 10;
    cfg.reps = 20;
  } else {
    std::string names;
    for (const auto& [n, _] : preset_descriptions()) names += n + " ";
    throw ConfigError("unknown preset '" + name + "' (valid: " + names + ")");
  }
  return cfg;
}

// --- metrics and CSV -----------------------------------------------------------

namespace {

MetricsRow make_row(int rep, const std::string& method, int step,
                    const Vector& est, const Vector& beta_star,
                    std::size_t true_support, double time_ms,
                    std::uint64_t floats_sent) {
  MetricsRow row;
  row.rep = rep;
  row.method = method;
  row.step = step;
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
  for (std::size_t l = 0; l < est.size(); ++l) {
    const double d = std::abs(est[l] - beta_star[l]);
    l1 += d;
    l2 += d * d;
    linf = std::max(linf, d);
  }
  row.l1_err = l1;
  row.l2_err = std::sqrt(l2);
  row.linf_err = linf;
  std::vector<std::size_t> truth(true_support);
  for (std::size_t l = 0; l < true_support; ++l) truth[l] = l;
  row.f1 = f1_score(support(est), truth);
  row.time_ms = time_ms;
  row.floats_sent = floats_sent;
  return row;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string render_csv(const std::vector<MetricsRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const MetricsRow& r : rows) {
    out += std::to_string(r.rep);
    out += ',';
    out += r.method;
    out += ',';
    out += std::to_string(r.step);
    out += ',';
    out += format_real(r.l2_err);
    out += ',';
    out += format_real(r.l1_err);
    out += ',';
    out += format_real(r.linf_err);
    out += ',';
    out += format_real(r.f1);
    out += ',';
    out += format_real(r.time_ms);
    out += ',';
    out += std::to_string(r.floats_sent);
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write CSV to " + path);
  out << render_csv(rows);
}

Stats summarize(const std::vector<MetricsRow>& rows, const std::string& method,
                int step, double MetricsRow::* field) {
  Stats st;
  double sum = 0.0;
  for (const MetricsRow& r : rows) {
    if (r.method != method || r.step != step) continue;
    sum += r.*field;
    st.count += 1;
  }
  if (st.count == 0) return st;
  st.mean = sum / double(st.count);
  double ss = 0.0;
  for (const MetricsRow& r : rows) {
    if (r.method != method || r.step != step) continue;
    const double d = r.*field - st.mean;
    ss += d * d;
  }
  if (st.count > 1) {
    st.sd = std::sqrt(ss / double(st.count - 1));
    st.sem = st.sd / std::sqrt(double(st.count));
  }
  return st;
}

void print_summary(const std::vector<MetricsRow>& rows, std::ostream& out) {
  std::vector<std::pair<std::string, int>> keys;
  for (const MetricsRow& r : rows) {
    const std::pair<std::string, int> k{r.method, r.step};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  char buf[196];
  out << "method        step  l2_mean     l2_sd       l2_sem      f1_mean     f1_sd\n";
  for (const auto& [method, step] : keys) {
    const Stats l2 = summarize(rows, method, step, &MetricsRow::l2_err);
    const Stats f1 = summarize(rows, method, step, &MetricsRow::f1);
    std::snprintf(buf, sizeof(buf), "%-12s %5d  %-10.4g  %-10.4g  %-10.4g  %-10.4g  %-10.4g\n",
                  method.c_str(), step, l2.mean, l2.sd, l2.sem, f1.mean, f1.sd);
    out << buf;
  }
}

// --- experiment runner ---------------------------------------------------------

namespace {

struct LossBundle {
  bool glm = false;
  MEstLoss mest;
  GlmLink link;
  Kernel kernel;
};

LossBundle make_losses(const ExperimentConfig& cfg, Model model) {
  LossBundle b;
  b.kernel = biweight_kernel();
  switch (model) {
    case Model::huber_linear: b.mest = huber_loss(cfg.delta); break;
    case Model::median_linear: b.mest = absolute_loss(); break;
    case Model::square_linear: b.mest = square_loss(); break;
    case Model::logistic:
      b.glm = true;
      b.link = logistic_link(cfg.psi2_floor);
      break;
  }
  return b;
}

DissdOptions make_dissd_options(const ExperimentConfig& cfg) {
  DissdOptions opts;
  opts.rounds = cfg.T;
  opts.tau_scale = cfg.tau_scale;
  opts.r0_scale = cfg.r0_scale;
  opts.lambda_scale = cfg.lambda_scale;
  opts.lambda0_scale = cfg.lambda0_scale;
  opts.pgd_lambda_scale = cfg.pgd_lambda_scale;
  opts.sparsity = cfg.s;
  opts.bandwidth = cfg.bandwidth;
  opts.bandwidth_rule = cfg.bandwidth_rule == "rate"
                            ? BandwidthRule::rate_proportional
                            : BandwidthRule::fixed;
  opts.init = cfg.init == "random" ? InitKind::random
              : cfg.init == "pgd"  ? InitKind::pgd
                                   : InitKind::local;
  opts.init_rounds = cfg.init_rounds;
  opts.init_seed = cfg.seed;
  opts.psi2_floor = cfg.psi2_floor;
  return opts;
}

// Per-repetition data seed; a pure function of (seed, rep) so repetition k is
// paired across configurations sharing the base seed.
std::uint64_t rep_seed(std::uint64_t seed, std::size_t rep) {
  return Rng(seed, rep).next_u64();
}

std::vector<MetricsRow> run_rep(const ExperimentConfig& cfg, Model model,
                                Noise noise, const GroundTruth& gt, int rep,
                                int inner_threads) {
  const LossBundle losses = make_losses(cfg, model);
  const ClusterData data =
      sample_cluster(gt, model, cfg.m, cfg.n, cfg.n_star, noise,
                     rep_seed(cfg.seed, std::size_t(rep)), inner_threads);

  const double log_p = std::log(double(cfg.p));
  std::vector<MetricsRow> rows;
  for (const std::string& method : cfg.methods) {
    Cluster cluster(&data, inner_threads);
    if (method == "dissd") {
      const DissdOptions opts = make_dissd_options(cfg);
      const RunResult res =
          losses.glm ? run_dissd_glm(cluster, losses.link, opts)
                     : run_dissd_mest(cluster, losses.mest, losses.kernel, opts);
      const std::uint64_t round_cost =
          losses.glm ? 2ull * cfg.m * cfg.p
                     : static_cast<std::uint64_t>(cfg.m) * cfg.p +
                           static_cast<std::uint64_t>(cfg.m) * (cfg.p + 1);
      for (std::size_t t = 0; t < res.history.size(); ++t) {
        rows.push_back(make_row(rep, method, int(t), res.history[t].beta_hat,
                                gt.beta_star, gt.support,
                                cfg.timing ? res.elapsed_ms[t] : 0.0,
                                res.init_floats + t * round_cost));
      }
    } else if (method == "csl") {
      CslOptions opts;
      opts.lambda = cfg.csl_lambda_scale *
                    std::sqrt(log_p / double(cfg.m * cfg.n));
      opts.lambda0_scale = cfg.lambda0_scale;
      const CslResult res = csl(cluster, losses.mest, cfg.T, opts);
      for (std::size_t t = 0; t < res.history.size(); ++t) {
        rows.push_back(make_row(rep, method, int(t), res.history[t],
                                gt.beta_star, gt.support,
                                cfg.timing ? res.elapsed_ms[t] : 0.0,
                                t * 2ull * cfg.m * cfg.p));
      }
    } else if (method == "oneshot") {
      OneshotOptions opts;
      opts.lambda0_scale = cfg.lambda0_scale;
      opts.lambda_scale = cfg.oneshot_lambda_scale;
      opts.bandwidth = cfg.bandwidth;
      const auto t0 = std::chrono::steady_clock::now();
      const Vector est = oneshot_avg_debias(cluster, losses.mest, losses.kernel, opts);
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
      rows.push_back(make_row(rep, method, 1, est, gt.beta_star, gt.support,
                              cfg.timing ? ms : 0.0,
                              static_cast<std::uint64_t>(cfg.m) * cfg.p));
    } else if (method == "pooled") {
      const double lambda =
          cfg.lambda0_scale * std::sqrt(log_p / double(cfg.m * cfg.n));
      const auto t0 = std::chrono::steady_clock::now();
      const Vector est = pooled_lasso(data, losses.mest, lambda, inner_threads);
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
      // pooling ships every labeled row (covariates + label) to one place
      rows.push_back(make_row(rep, method, 0, est, gt.beta_star, gt.support,
                              cfg.timing ? ms : 0.0,
                              static_cast<std::uint64_t>(cfg.m * cfg.n) * (cfg.p + 1)));
    } else if (method == "local") {
      const double lambda = cfg.lambda0_scale * std::sqrt(log_p / double(cfg.n));
      const auto t0 = std::chrono::steady_clock::now();
      const Vector est = local_lasso(data, losses.mest, lambda, inner_threads);
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
      rows.push_back(make_row(rep, method, 0, est, gt.beta_star, gt.support,
                              cfg.timing ? ms : 0.0, 0));
    }
  }
  return rows;
}

}  // namespace

std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg,
                                       std::ostream* summary) {
  validate(cfg);
  const Model model = parse_model(cfg.model);
  const Noise noise = parse_noise(cfg.noise);
  const GroundTruth gt =
      block_design_truth(cfg.p, cfg.s, cfg.block, cfg.offdiag);

  const int budget = cfg.threads > 0 ? cfg.threads : hardware_threads();
  const int outer = int(std::min<std::size_t>(budget, cfg.reps));
  const int inner = std::max(1, budget / std::max(1, outer));

  std::vector<std::vector<MetricsRow>> per_rep(cfg.reps);
  parallel_for(cfg.reps, outer, [&](std::size_t rep) {
    per_rep[rep] = run_rep(cfg, model, noise, gt, int(rep), inner);
  });

  std::vector<MetricsRow> rows;
  for (const auto& r : per_rep) rows.insert(rows.end(), r.begin(), r.end());

  write_csv(cfg.out_path, rows);
  if (summary) print_summary(rows, *summary);
  return rows;
}

// --- real-data ingestion ---------------------------------------------------------

IngestResult run_ingest(const std::string& csv_path, const ExperimentConfig& cfg) {
  // The design keys (p, s for generation, block, offdiag) come from the file
  // here, so only the estimator-relevant settings are validated.
  const Model model = parse_model(cfg.model);
  const Noise noise = parse_noise(cfg.noise);
  if (model == Model::logistic && noise != Noise::none) {
    throw ConfigError("model=logistic takes noise=none");
  }
  if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0)) {
    throw ConfigError("ci_level must lie in (0,1)");
  }
  if (cfg.init != "local" && cfg.init != "random" && cfg.init != "pgd") {
    throw ConfigError("init must be local, random, or pgd");
  }
  const LossBundle losses = make_losses(cfg, model);

  const CsvData csv = load_csv(csv_path);
  const ClusterData data = partition_rows(csv, cfg.m);
  if (cfg.s < 1 || cfg.s > data.dim()) {
    throw ConfigError("ingest: s must lie in [1, number of covariates]");
  }
  const int threads = cfg.threads > 0 ? cfg.threads : hardware_threads();
  Cluster cluster(&data, threads);

  DissdOptions opts = make_dissd_options(cfg);
  opts.with_variance = true;

  IngestResult out;
  if (losses.glm) {
    const RunResult res = run_dissd_glm(cluster, losses.link, opts);
    out.beta_bar = res.final_state().beta_bar;
    out.beta_hat = res.final_state().beta_hat;
    const std::size_t mn = cluster.labeled_total();
    for (std::size_t l = 0; l < out.beta_bar.size(); ++l) {
      const double s2 =
          sigma_glm(l, res.precision, cluster, out.beta_hat, losses.link);
      out.intervals.push_back(
          confidence_interval(out.beta_bar[l], s2, mn, cfg.ci_level));
    }
  } else {
    const RunResult res = run_dissd_mest(cluster, losses.mest, losses.kernel, opts);
    out.beta_bar = res.final_state().beta_bar;
    out.beta_hat = res.final_state().beta_hat;
    const std::size_t mn = cluster.labeled_total();
    // sigma_mest wants the pooled mean of f'(r)^2; reuse the run's pooled
    // scalar by passing it as a single pseudo-observation.
    const std::vector<double> pooled = {std::sqrt(res.fprime_sq_mean)};
    for (std::size_t l = 0; l < out.beta_bar.size(); ++l) {
      const double s2 = sigma_mest(l, res.precision, res.h_final, pooled);
      out.intervals.push_back(
          confidence_interval(out.beta_bar[l], s2, mn, cfg.ci_level));
    }
  }
  return out;
}

void write_coefficients_csv(const std::string& path, const IngestResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write coefficients to " + path);
  out << "coord,beta_bar,beta_hat,ci_lo,ci_hi\n";
  for (std::size_t l = 0; l < result.beta_bar.size(); ++l) {
    out << (l + 1) << ',' << format_real(result.beta_bar[l]) << ','
        << format_real(result.beta_hat[l]) << ','
        << format_real(result.intervals[l].lo) << ','
        << format_real(result.intervals[l].hi) << '\n';
  }
}

}  // namespace dissd
