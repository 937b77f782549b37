#include "dissd/synth.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dissd/errors.hpp"
#include "dissd/parallel.hpp"
#include "dissd/rng.hpp"

namespace dissd {

Vector true_beta(std::size_t p, std::size_t s) {
  if (s < 1 || s > p) throw ConfigError("true_beta: requires 1 <= s <= p");
  Vector beta(p, 0.0);
  for (std::size_t k = 1; k <= s; ++k) {
    beta[k - 1] = static_cast<double>(s - k + 1) / static_cast<double>(s);
  }
  return beta;
}

std::pair<SymMatrix, SymMatrix> block_design(std::size_t p, std::size_t block,
                                             double offdiag) {
  if (block == 0 || p % block != 0) {
    throw ConfigError("block_design: block size must divide p");
  }
  const double k = static_cast<double>(block);
  if (offdiag >= 1.0 || (block > 1 && offdiag <= -1.0 / (k - 1.0))) {
    throw ConfigError("block_design: off-diagonal value makes the block indefinite");
  }
  // Omega block B = (1-rho) I + rho J; its inverse in closed form is
  // (1/(1-rho)) (I - rho J / (1 + (k-1) rho)).
  const double rho = offdiag;
  const double inv_diag_coeff = 1.0 / (1.0 - rho);
  const double inv_off = -rho / ((1.0 - rho) * (1.0 + (k - 1.0) * rho));
  SymMatrix omega(p);
  SymMatrix sigma(p);
  for (std::size_t b = 0; b < p / block; ++b) {
    const std::size_t base = b * block;
    for (std::size_t i = 0; i < block; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        omega.set(base + i, base + j, i == j ? 1.0 : rho);
        sigma.set(base + i, base + j,
                  i == j ? inv_diag_coeff + inv_off : inv_off);
      }
    }
  }
  return {sigma, omega};
}

GroundTruth block_design_truth(std::size_t p, std::size_t s, std::size_t block,
                               double offdiag) {
  GroundTruth gt;
  gt.beta_star = true_beta(p, s);
  gt.support = s;
  auto [sigma, omega] = block_design(p, block, offdiag);
  gt.sigma = std::move(sigma);
  gt.omega = std::move(omega);
  return gt;
}

Model parse_model(const std::string& name) {
  if (name == "huber-linear") return Model::huber_linear;
  if (name == "median-linear") return Model::median_linear;
  if (name == "square-linear") return Model::square_linear;
  if (name == "logistic") return Model::logistic;
  throw ConfigError("unknown model '" + name +
                    "' (valid: huber-linear, median-linear, square-linear, logistic)");
}

Noise parse_noise(const std::string& name) {
  if (name == "mixture-normal") return Noise::mixture_normal;
  if (name == "cauchy") return Noise::cauchy;
  if (name == "std-normal") return Noise::std_normal;
  if (name == "none") return Noise::none;
  throw ConfigError("unknown noise '" + name +
                    "' (valid: mixture-normal, cauchy, std-normal, none)");
}

std::string to_string(Model m) {
  switch (m) {
    case Model::huber_linear: return "huber-linear";
    case Model::median_linear: return "median-linear";
    case Model::square_linear: return "square-linear";
    case Model::logistic: return "logistic";
  }
  return "?";
}

std::string to_string(Noise n) {
  switch (n) {
    case Noise::mixture_normal: return "mixture-normal";
    case Noise::cauchy: return "cauchy";
    case Noise::std_normal: return "std-normal";
    case Noise::none: return "none";
  }
  return "?";
}

std::size_t ClusterData::labeled_total() const {
  std::size_t n = 0;
  for (const Shard& s : shards) n += s.size();
  return n;
}

std::vector<Vector> ClusterData::master_covariates() const {
  std::vector<Vector> rows;
  rows.reserve(shards.front().size() + unlabeled.size());
  for (const Vector& r : shards.front().x) rows.push_back(r);
  for (const Vector& r : unlabeled) rows.push_back(r);
  return rows;
}

namespace {

double draw_noise(Rng& rng, Noise noise) {
  switch (noise) {
    case Noise::mixture_normal: return rng.mixture_normal();
    case Noise::cauchy: return rng.cauchy();
    case Noise::std_normal: return rng.normal();
    case Noise::none: break;
  }
  throw ConfigError("draw_noise: no noise distribution selected");
}

Vector draw_row(Rng& rng, const CholeskyFactor& chol) {
  Vector z(chol.p);
  for (double& v : z) v = rng.normal();
  return chol.apply(z);
}

}  // namespace

ClusterData sample_cluster(const GroundTruth& gt, Model model, std::size_t m,
                           std::size_t n, std::size_t n_star, Noise noise,
                           std::uint64_t seed, int threads) {
  if (m < 1 || n < 1 || n_star < n) {
    throw ConfigError("sample_cluster: requires m >= 1 and n_star >= n >= 1");
  }
  const bool is_logistic = model == Model::logistic;
  if (is_logistic && noise != Noise::none) {
    throw ConfigError("sample_cluster: logistic labels are Bernoulli; use noise=none");
  }
  if (!is_logistic && noise == Noise::none) {
    throw ConfigError("sample_cluster: linear models need a noise distribution");
  }

  const CholeskyFactor chol = cholesky(gt.sigma, 1e-12);

  ClusterData data;
  data.seed = seed;
  data.shards.resize(m);
  data.unlabeled.resize(n_star - n);

  // Labeled shards on streams 1..m, unlabeled pool on stream 0.
  parallel_for(m + 1, threads, [&](std::size_t task) {
    if (task == 0) {
      Rng rng(seed, 0);
      for (Vector& row : data.unlabeled) row = draw_row(rng, chol);
      return;
    }
    const std::size_t j = task - 1;
    Rng rng(seed, j + 1);
    Shard& shard = data.shards[j];
    shard.x.resize(n);
    shard.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      shard.x[i] = draw_row(rng, chol);
      const double xb = dot(shard.x[i], gt.beta_star);
      if (is_logistic) {
        const double prob = 1.0 / (1.0 + std::exp(-xb));
        shard.y[i] = rng.uniform01() < prob ? 1.0 : 0.0;
      } else {
        shard.y[i] = xb + draw_noise(rng, noise);
      }
    }
  });
  return data;
}

CsvData load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("load_csv: cannot open " + path);
  CsvData data;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("load_csv: empty file " + path);
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) data.header.push_back(cell);
  }
  if (data.header.size() < 2) {
    throw ConfigError("load_csv: need at least one covariate column and a label column");
  }
  const std::size_t p = data.header.size() - 1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Vector row;
    row.reserve(p);
    std::string label;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col < p) {
        try {
          row.push_back(std::stod(cell));
        } catch (const std::exception&) {
          throw ConfigError("load_csv: non-numeric covariate at line " +
                            std::to_string(line_no));
        }
      } else {
        label = cell;
      }
      ++col;
    }
    if (col != p + 1) {
      throw ConfigError("load_csv: wrong column count at line " + std::to_string(line_no));
    }
    if (label == "NA") {
      data.unlabeled.push_back(std::move(row));
    } else {
      try {
        data.y.push_back(std::stod(label));
      } catch (const std::exception&) {
        throw ConfigError("load_csv: non-numeric label at line " + std::to_string(line_no));
      }
      data.x.push_back(std::move(row));
    }
  }
  if (data.x.empty()) throw ConfigError("load_csv: no labeled rows in " + path);
  return data;
}

ClusterData partition_rows(const CsvData& data, std::size_t m) {
  if (m < 1) throw ConfigError("partition_rows: m must be >= 1");
  if (data.x.size() % m != 0) {
    throw ConfigError("partition_rows: labeled row count " +
                      std::to_string(data.x.size()) + " is not divisible by m=" +
                      std::to_string(m));
  }
  const std::size_t n = data.x.size() / m;
  ClusterData out;
  out.shards.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    Shard& s = out.shards[j];
    s.x.assign(data.x.begin() + j * n, data.x.begin() + (j + 1) * n);
    s.y.assign(data.y.begin() + j * n, data.y.begin() + (j + 1) * n);
  }
  out.unlabeled = data.unlabeled;
  return out;
}

}  // namespace dissd
