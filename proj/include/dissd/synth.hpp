#ifndef DISSD_SYNTH_HPP
#define DISSD_SYNTH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dissd/linalg.hpp"

namespace dissd {

// Population description of the synthetic design: sparse coefficient vector,
// covariance and its exact inverse (closed-form block structure).
struct GroundTruth {
  Vector beta_star;
  std::size_t support = 0;  // beta_star's nonzeros are the first `support` coords
  SymMatrix sigma;
  SymMatrix omega;
};

// Coordinate k (1-based) equals (s - k + 1)/s for k <= s, zero after.
Vector true_beta(std::size_t p, std::size_t s);

// Precision Omega is block diagonal with blocks (1-offdiag) I + offdiag J;
// Sigma holds the closed-form block inverses. Requires block | p and
// offdiag in (-1/(block-1), 1).
std::pair<SymMatrix, SymMatrix> block_design(std::size_t p, std::size_t block,
                                             double offdiag);

GroundTruth block_design_truth(std::size_t p, std::size_t s,
                               std::size_t block = 5, double offdiag = 0.5);

enum class Model { huber_linear, median_linear, square_linear, logistic };
enum class Noise { mixture_normal, cauchy, std_normal, none };

Model parse_model(const std::string& name);
Noise parse_noise(const std::string& name);
std::string to_string(Model m);
std::string to_string(Noise n);

// Labeled rows living on one machine.
struct Shard {
  std::vector<Vector> x;
  Vector y;
  std::size_t size() const { return x.size(); }
};

// Full simulated cluster: m labeled shards (shard 0 is the master) plus the
// master's unlabeled covariate pool (nonempty iff n_star > n).
struct ClusterData {
  std::vector<Shard> shards;
  std::vector<Vector> unlabeled;
  std::uint64_t seed = 0;

  std::size_t machines() const { return shards.size(); }
  std::size_t dim() const { return shards.empty() ? 0 : shards[0].x.empty() ? unlabeled.front().size() : shards[0].x.front().size(); }
  std::size_t shard_size() const { return shards.empty() ? 0 : shards[0].size(); }
  std::size_t labeled_total() const;
  // Master covariates: its labeled rows followed by the unlabeled pool.
  std::vector<Vector> master_covariates() const;
};

// Draws X ~ N(0, Sigma) via the (jittered) Cholesky factor of Sigma, labels
// by the requested model, and fills shards from per-machine streams
// (stream j+1 for shard j, stream 0 for the unlabeled pool), so the result is
// identical for any thread count and the labeled shards do not change when
// n_star varies. Linear models need a noise, logistic requires Noise::none.
ClusterData sample_cluster(const GroundTruth& gt, Model model, std::size_t m,
                           std::size_t n, std::size_t n_star, Noise noise,
                           std::uint64_t seed, int threads = 1);

// --- CSV ingestion (real-data path) ----------------------------------------
//
// Headered CSV, one observation per row, final column is the label; the
// literal token NA in the label column marks an unlabeled row.
struct CsvData {
  std::vector<std::string> header;
  std::vector<Vector> x;   // labeled rows
  Vector y;
  std::vector<Vector> unlabeled;
};

CsvData load_csv(const std::string& path);

// Evenly partitions the labeled rows over m machines (row order preserved,
// machine j takes the j-th contiguous slice); unlabeled rows go to the
// master's pool. Throws ConfigError when m does not divide the row count.
ClusterData partition_rows(const CsvData& data, std::size_t m);

}  // namespace dissd

#endif  // DISSD_SYNTH_HPP
