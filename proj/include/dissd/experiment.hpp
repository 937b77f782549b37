#ifndef DISSD_EXPERIMENT_HPP
#define DISSD_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dissd/inference.hpp"
#include "dissd/linalg.hpp"

namespace dissd {

// Declarative experiment description; flat key=value files plus command-line
// overrides populate exactly these fields.
struct ExperimentConfig {
  std::string model = "huber-linear";
  std::string noise = "mixture-normal";
  std::size_t m = 100;
  std::size_t n = 100;
  std::size_t n_star = 550;
  std::size_t p = 500;
  std::size_t s = 10;
  std::size_t T = 5;
  std::size_t reps = 20;
  std::uint64_t seed = 20240501;

  double tau_scale = 0.5;
  double r0_scale = 1.0;
  double lambda_scale = 0.5;
  double lambda0_scale = 0.5;
  double pgd_lambda_scale = 0.5;
  double csl_lambda_scale = 0.5;
  double oneshot_lambda_scale = 1.0;
  double bandwidth = 0.1;
  double delta = 1.345;
  double psi2_floor = 0.01;
  double offdiag = 0.5;
  double ci_level = 0.95;
  std::size_t block = 5;
  std::size_t init_rounds = 10;

  std::string bandwidth_rule = "fixed";  // fixed | rate
  std::string init = "local";            // local | random | pgd
  std::vector<std::string> methods = {"dissd"};
  std::string out_path = "metrics.csv";
  int threads = 0;  // 0 = hardware concurrency
  bool timing = false;
};

// One CSV record. With timing disabled (the default) time_ms is written as 0
// so re-runs are byte identical.
struct MetricsRow {
  int rep = 0;
  std::string method;
  int step = 0;
  double l2_err = 0.0;
  double l1_err = 0.0;
  double linf_err = 0.0;
  double f1 = 0.0;
  double time_ms = 0.0;
  std::uint64_t floats_sent = 0;
};

inline constexpr const char* kCsvHeader =
    "rep,method,step,l2_err,l1_err,linf_err,f1,time_ms,floats_sent";

// Harmonic mean of support precision and recall; zero when the estimate is
// empty. An empty true support is an error.
double f1_score(const std::vector<std::size_t>& estimated,
                const std::vector<std::size_t>& truth);

ExperimentConfig parse_config_file(const std::string& path);
void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);
void validate(const ExperimentConfig& cfg);

// Named parameter sets mirroring the synthetic study tables/figures.
std::vector<std::pair<std::string, std::string>> preset_descriptions();
ExperimentConfig preset(const std::string& name);

// Runs reps x methods, writes the CSV to cfg.out_path (rows in rep order),
// prints a mean/sd/sem summary table to `summary` when non-null, and returns
// the rows.
std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg,
                                       std::ostream* summary = nullptr);

struct Stats {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
  double sem = 0.0;
};

Stats summarize(const std::vector<MetricsRow>& rows, const std::string& method,
                int step, double MetricsRow::* field);
void print_summary(const std::vector<MetricsRow>& rows, std::ostream& out);

void write_csv(const std::string& path, const std::vector<MetricsRow>& rows);
std::string render_csv(const std::vector<MetricsRow>& rows);

// Real-data path: ingest a labeled/unlabeled CSV, run the configured
// estimator, and emit per-coordinate estimates with confidence intervals.
struct IngestResult {
  Vector beta_bar;
  Vector beta_hat;
  std::vector<Interval> intervals;
};

IngestResult run_ingest(const std::string& csv_path, const ExperimentConfig& cfg);
void write_coefficients_csv(const std::string& path, const IngestResult& result);

}  // namespace dissd

#endif  // DISSD_EXPERIMENT_HPP
