#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dissd/errors.hpp"
#include "dissd/experiment.hpp"

using namespace dissd;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig tiny_config(const std::string& out) {
  ExperimentConfig cfg;
  cfg.model = "huber-linear";
  cfg.noise = "mixture-normal";
  cfg.p = 30;
  cfg.s = 5;
  cfg.m = 3;
  cfg.n = 30;
  cfg.n_star = 45;
  cfg.T = 2;
  cfg.reps = 3;
  cfg.seed = 7;
  cfg.threads = 1;
  cfg.methods = {"dissd", "local"};
  cfg.out_path = out;
  return cfg;
}

}  // namespace

TEST_CASE("f1 score of support sets") {
  CHECK(f1_score({0, 1, 2}, {1, 2, 3}) == doctest::Approx(2.0 / 3.0));
  CHECK(f1_score({4, 9}, {4, 9}) == doctest::Approx(1.0));
  CHECK(f1_score({}, {1, 2}) == 0.0);
  CHECK(f1_score({5, 6}, {1, 2}) == 0.0);
  CHECK_THROWS_AS(f1_score({1}, {}), ConfigError);
}

TEST_CASE("config files parse with comments and overrides") {
  const std::string path = "exp_cfg_test.cfg";
  {
    std::ofstream out(path);
    out << "# comment line\n";
    out << "model = median-linear\n";
    out << "noise = cauchy\n";
    out << "m = 7   # trailing comment\n";
    out << "n_star = 220\n";
    out << "methods = dissd, local\n";
    out << "timing = on\n";
  }
  ExperimentConfig cfg = parse_config_file(path);
  CHECK(cfg.model == "median-linear");
  CHECK(cfg.m == 7);
  CHECK(cfg.n_star == 220);
  CHECK(cfg.methods.size() == 2);
  CHECK(cfg.timing);

  apply_override(cfg, "n-star", "300");  // kebab-case maps onto snake_case
  CHECK(cfg.n_star == 300);
  apply_override(cfg, "tau_scale", "0.75");
  CHECK(cfg.tau_scale == 0.75);

  CHECK_THROWS_AS(apply_override(cfg, "no_such_key", "1"), ConfigError);
  try {
    apply_override(cfg, "nope", "1");
  } catch (const ConfigError& e) {
    // the error names the valid keys
    CHECK(std::string(e.what()).find("tau_scale") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("config validation catches bad combinations") {
  ExperimentConfig cfg = tiny_config("x.csv");
  CHECK_NOTHROW(validate(cfg));

  ExperimentConfig bad = cfg;
  bad.n_star = bad.n - 1;
  CHECK_THROWS_AS(validate(bad), ConfigError);

  bad = cfg;
  bad.s = bad.p + 1;
  CHECK_THROWS_AS(validate(bad), ConfigError);

  bad = cfg;
  bad.model = "logistic";
  CHECK_THROWS_AS(validate(bad), ConfigError);  // logistic wants noise=none
  bad.noise = "none";
  bad.methods = {"dissd", "pooled"};
  CHECK_THROWS_AS(validate(bad), ConfigError);  // baselines are linear-only
  bad.methods = {"dissd"};
  CHECK_NOTHROW(validate(bad));

  bad = cfg;
  bad.methods = {"dissd", "mystery"};
  try {
    validate(bad);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("oneshot") != std::string::npos);
  }

  bad = cfg;
  bad.reps = 0;
  CHECK_THROWS_AS(validate(bad), ConfigError);
  bad = cfg;
  bad.block = 4;  // does not divide p=30
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("presets are valid configs and unknown names fail") {
  for (const auto& [name, description] : preset_descriptions()) {
    CHECK_FALSE(description.empty());
    const ExperimentConfig cfg = preset(name);
    CHECK_NOTHROW(validate(cfg));
  }
  CHECK_THROWS_AS(preset("huber-table99"), ConfigError);
}

TEST_CASE("run_experiment writes the exact schema and parses back") {
  const std::string out = "exp_smoke.csv";
  ExperimentConfig cfg = tiny_config(out);
  const std::vector<MetricsRow> rows = run_experiment(cfg, nullptr);

  // dissd reports steps 0..T, local one row, per repetition
  CHECK(rows.size() == cfg.reps * (cfg.T + 1 + 1));

  const std::string text = slurp(out);
  std::stringstream ss(text);
  std::string header;
  std::getline(ss, header);
  CHECK(header == std::string(kCsvHeader));

  std::size_t body_rows = 0;
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    ++body_rows;
    // every field parses as a number after the method column
    std::stringstream fields(line);
    std::string cell;
    int col = 0;
    while (std::getline(fields, cell, ',')) {
      if (col != 1) CHECK_NOTHROW((void)std::stod(cell));
      ++col;
    }
    CHECK(col == 9);
  }
  CHECK(body_rows == rows.size());

  // rendering the parsed rows reproduces the file byte for byte
  CHECK(render_csv(rows) == text);
  std::remove(out.c_str());
}

TEST_CASE("metrics rows carry exact communication counts") {
  const std::string out = "exp_comm.csv";
  ExperimentConfig cfg = tiny_config(out);
  cfg.methods = {"dissd"};
  const std::vector<MetricsRow> rows = run_experiment(cfg, nullptr);
  const std::uint64_t round_cost = cfg.m * cfg.p + cfg.m * (cfg.p + 1);
  for (const MetricsRow& r : rows) {
    CHECK(r.floats_sent == std::uint64_t(r.step) * round_cost);
    CHECK(r.time_ms == 0.0);  // timing off by default
  }
  std::remove(out.c_str());
}

TEST_CASE("same config and seed give byte-identical output for any threads") {
  ExperimentConfig cfg = tiny_config("exp_det_a.csv");
  run_experiment(cfg, nullptr);
  cfg.out_path = "exp_det_b.csv";
  run_experiment(cfg, nullptr);
  const std::string a = slurp("exp_det_a.csv");
  CHECK(a == slurp("exp_det_b.csv"));

  cfg.out_path = "exp_det_c.csv";
  cfg.threads = 2;
  run_experiment(cfg, nullptr);
  CHECK(a == slurp("exp_det_c.csv"));

  // a different seed changes values but never the shape
  cfg.out_path = "exp_det_d.csv";
  cfg.threads = 1;
  cfg.seed = 8;
  const std::vector<MetricsRow> other = run_experiment(cfg, nullptr);
  const std::string d = slurp("exp_det_d.csv");
  CHECK(d != a);
  std::stringstream sa(a), sd(d);
  std::string la, ld;
  std::getline(sa, la);
  std::getline(sd, ld);
  CHECK(la == ld);  // identical header
  std::size_t na = 0, nd = 0;
  while (std::getline(sa, la)) ++na;
  while (std::getline(sd, ld)) ++nd;
  CHECK(na == nd);

  for (const char* f : {"exp_det_a.csv", "exp_det_b.csv", "exp_det_c.csv",
                        "exp_det_d.csv"}) {
    std::remove(f);
  }
}

TEST_CASE("summary statistics aggregate by method and step") {
  std::vector<MetricsRow> rows;
  for (int rep = 0; rep < 4; ++rep) {
    MetricsRow r;
    r.rep = rep;
    r.method = "dissd";
    r.step = 1;
    r.l2_err = 1.0 + rep;  // 1,2,3,4
    rows.push_back(r);
  }
  const Stats st = summarize(rows, "dissd", 1, &MetricsRow::l2_err);
  CHECK(st.count == 4);
  CHECK(st.mean == doctest::Approx(2.5));
  CHECK(st.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(st.sem == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(summarize(rows, "dissd", 2, &MetricsRow::l2_err).count == 0);
}

TEST_CASE("ingest fits a csv and reports intervals") {
  // synthetic linear data written to disk: y = 2 x1 - x2 + small noise
  const std::string data_path = "ingest_rows.csv";
  {
    std::ofstream outf(data_path);
    outf << "x1,x2,x3,y\n";
    unsigned state = 12345;
    auto next_unit = [&]() {
      state = state * 1103515245 + 12345;
      return double((state >> 16) & 0x7fff) / 32768.0 - 0.5;
    };
    for (int i = 0; i < 80; ++i) {
      const double x1 = next_unit(), x2 = next_unit(), x3 = next_unit();
      const double y = 2.0 * x1 - x2 + 0.01 * next_unit();
      outf << x1 << ',' << x2 << ',' << x3 << ',' << y << "\n";
    }
    for (int i = 0; i < 10; ++i) {
      outf << next_unit() << ',' << next_unit() << ',' << next_unit() << ",NA\n";
    }
  }
  ExperimentConfig cfg;
  cfg.model = "square-linear";
  cfg.noise = "std-normal";
  cfg.m = 4;
  cfg.s = 2;
  cfg.T = 3;
  cfg.threads = 1;
  cfg.lambda_scale = 0.2;
  cfg.tau_scale = 0.5;
  cfg.r0_scale = 0.2;
  cfg.out_path = "ingest_coefs.csv";

  const IngestResult res = run_ingest(data_path, cfg);
  REQUIRE(res.beta_bar.size() == 3);
  CHECK(res.beta_bar[0] == doctest::Approx(2.0).epsilon(0.15));
  CHECK(res.beta_bar[1] == doctest::Approx(-1.0).epsilon(0.3));
  for (const Interval& ci : res.intervals) CHECK(ci.lo <= ci.hi);

  write_coefficients_csv(cfg.out_path, res);
  std::ifstream check(cfg.out_path);
  std::string header;
  std::getline(check, header);
  CHECK(header == "coord,beta_bar,beta_hat,ci_lo,ci_hi");

  std::remove(data_path.c_str());
  std::remove(cfg.out_path.c_str());
}
