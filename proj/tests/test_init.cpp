#include "doctest.h"

#include <cmath>

#include "dissd/errors.hpp"
#include "dissd/init.hpp"
#include "dissd/losses.hpp"
#include "dissd/rng.hpp"
#include "dissd/synth.hpp"

using namespace dissd;

namespace {

Vector shard_gradient(const Shard& shard, const MEstLoss& loss,
                      const Vector& beta) {
  const std::size_t p = beta.size();
  Vector g(p, 0.0);
  for (std::size_t i = 0; i < shard.size(); ++i) {
    const double w = loss.first_deriv(dot(shard.x[i], beta) - shard.y[i]);
    for (std::size_t l = 0; l < p; ++l) g[l] += w * shard.x[i][l];
  }
  for (double& v : g) v /= double(shard.size());
  return g;
}

}  // namespace

TEST_CASE("zero is stationary when the penalty dominates the gradient at zero") {
  const GroundTruth gt = block_design_truth(20, 5);
  const ClusterData data = sample_cluster(gt, Model::square_linear, 1, 50, 50,
                                          Noise::std_normal, 7);
  const MEstLoss loss = square_loss();
  const Vector g0 = shard_gradient(data.shards[0], loss, Vector(20, 0.0));

  ProxOptions opts;
  opts.lambda = norm_inf(g0) * 1.01;
  const ProxResult res = prox_lasso(data.shards[0], loss, opts);
  CHECK(norm_inf(res.beta) == 0.0);
}

TEST_CASE("orthonormal design reduces the lasso to coordinatewise shrinkage") {
  const std::size_t n = 20;
  std::vector<Vector> x(n, Vector(n, 0.0));
  const double scale = std::sqrt(double(n));
  for (std::size_t i = 0; i < n; ++i) x[i][i] = scale;  // X'X/n = I
  Rng rng(13);
  Vector y(n);
  for (double& v : y) v = 3.0 * (rng.uniform01() - 0.5);

  ProxOptions opts;
  opts.lambda = 0.2;
  opts.tol = 1e-10;
  opts.max_iter = 20000;
  const ProxResult res = prox_lasso(x, y, square_loss(), opts);

  for (std::size_t l = 0; l < n; ++l) {
    const double ols = y[l] * scale / double(n);  // (X'y/n)_l
    CHECK(res.beta[l] == doctest::Approx(soft_threshold(ols, 0.2)).epsilon(1e-6));
  }
}

TEST_CASE("objective trace never increases") {
  const GroundTruth gt = block_design_truth(30, 5);
  const ClusterData data = sample_cluster(gt, Model::huber_linear, 1, 80, 80,
                                          Noise::mixture_normal, 3);
  for (const MEstLoss& loss :
       {huber_loss(1.345), absolute_loss(), square_loss()}) {
    Vector trace;
    ProxOptions opts;
    opts.lambda = 0.1;
    opts.objective_trace = &trace;
    prox_lasso(data.shards[0], loss, opts);
    REQUIRE(trace.size() >= 2);
    for (std::size_t i = 1; i < trace.size(); ++i) {
      CHECK(trace[i] <= trace[i - 1]);
    }
  }
}

TEST_CASE("an oversized step without backtracking diverges with a clear error") {
  const GroundTruth gt = block_design_truth(10, 2);
  const ClusterData data = sample_cluster(gt, Model::square_linear, 1, 40, 40,
                                          Noise::std_normal, 11);
  ProxOptions opts;
  opts.lambda = 0.01;
  opts.step = 1000.0;
  opts.backtracking = false;
  opts.max_iter = 200;
  CHECK_THROWS_WITH_AS(prox_lasso(data.shards[0], square_loss(), opts),
                       "prox_lasso: diverged; reduce step", NumericalError);
}

TEST_CASE("glm lasso descends on logistic data") {
  const GroundTruth gt = block_design_truth(15, 3);
  const ClusterData data =
      sample_cluster(gt, Model::logistic, 1, 400, 400, Noise::none, 23);
  Vector trace;
  ProxOptions opts;
  opts.lambda = 0.05;
  opts.objective_trace = &trace;
  const ProxResult res = prox_lasso(data.shards[0], logistic_link(), opts);
  REQUIRE(trace.size() >= 2);
  CHECK(trace.back() < trace.front());
  CHECK(std::isfinite(res.objective));
  // leading true coordinate should be clearly positive
  CHECK(res.beta[0] > 0.1);
}

TEST_CASE("lipschitz estimate matches the top curvature on simple designs") {
  // 48 one-hot rows, 6 per coordinate, scaled so the second moment is exactly
  // the identity
  std::vector<Vector> x(48, Vector(8, 0.0));
  for (std::size_t i = 0; i < 48; ++i) {
    x[i][i % 8] = std::sqrt(8.0);
  }
  const double L = lipschitz_estimate(x, 1.0);
  CHECK(L == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(lipschitz_estimate(x, 0.25) == doctest::Approx(0.25 * L).epsilon(1e-12));
}

TEST_CASE("single-machine pgd equals plain ista steps") {
  const GroundTruth gt = block_design_truth(20, 5);
  const ClusterData data = sample_cluster(gt, Model::square_linear, 1, 60, 60,
                                          Noise::std_normal, 9);
  Cluster cluster(&data, 1);
  const MEstLoss loss = square_loss();
  const double lambda = 0.05;
  const double step = 0.04;
  const std::size_t rounds = 10;
  const Vector beta = distributed_pgd_init(cluster, loss, lambda, rounds, step);

  // independent reference loop
  Vector ref(20, 0.0);
  for (std::size_t t = 0; t < rounds; ++t) {
    const Vector g = shard_gradient(data.shards[0], loss, ref);
    for (std::size_t l = 0; l < 20; ++l) {
      ref[l] = soft_threshold(ref[l] - step * g[l], step * lambda);
    }
  }
  CHECK(max_abs_diff(beta, ref) <= 1e-12);
}

TEST_CASE("pgd requires at least one round and charges the ledger") {
  const GroundTruth gt = block_design_truth(10, 2);
  const ClusterData data = sample_cluster(gt, Model::square_linear, 4, 15, 20,
                                          Noise::std_normal, 2);
  Cluster cluster(&data, 2);
  CHECK_THROWS_AS(distributed_pgd_init(cluster, square_loss(), 0.1, 0),
                  ConfigError);
  CHECK(cluster.ledger().total() == 0);

  distributed_pgd_init(cluster, square_loss(), 0.1, 3);
  // 3 rounds of m*p down and m*p up
  CHECK(cluster.ledger().floats_down == 3 * 4 * 10);
  CHECK(cluster.ledger().floats_up == 3 * 4 * 10);
}
