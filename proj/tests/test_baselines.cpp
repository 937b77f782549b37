#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "dissd/baselines.hpp"
#include "dissd/dissd_mest.hpp"
#include "dissd/errors.hpp"
#include "dissd/synth.hpp"

using namespace dissd;

TEST_CASE("one-shot averaging with one machine is a single debiased fit") {
  const GroundTruth gt = block_design_truth(20, 5);
  const ClusterData data = sample_cluster(gt, Model::huber_linear, 1, 80, 80,
                                          Noise::mixture_normal, 303);
  const MEstLoss loss = huber_loss(1.345);
  const Kernel kernel = biweight_kernel();

  OneshotOptions os;
  os.lambda0_scale = 0.5;
  os.lambda_scale = 0.7;
  os.bandwidth = 0.1;
  Cluster c1(&data, 1);
  const Vector oneshot = oneshot_avg_debias(c1, loss, kernel, os);
  CHECK(c1.ledger().precision_builds == 1);

  Cluster c2(&data, 1);
  DissdOptions opts;
  opts.rounds = 1;
  opts.tau_scale = 0.0;  // no thresholding
  opts.lambda_scale = 0.7;
  opts.lambda0_scale = 0.5;
  opts.sparsity = 5;
  const RunResult res = run_dissd_mest(c2, loss, kernel, opts);
  CHECK(max_abs_diff(oneshot, res.history[1].beta_bar) <= 1e-10);
}

TEST_CASE("one-shot averaging builds one precision estimate per machine") {
  const GroundTruth gt = block_design_truth(15, 3);
  const ClusterData data = sample_cluster(gt, Model::square_linear, 5, 40, 40,
                                          Noise::std_normal, 7);
  Cluster cluster(&data, 2);
  oneshot_avg_debias(cluster, square_loss(), biweight_kernel(), {});
  CHECK(cluster.ledger().precision_builds == 5);
  CHECK(cluster.ledger().floats_up == 5ull * 15);
}

TEST_CASE("one-shot average is invariant to machine order") {
  const GroundTruth gt = block_design_truth(15, 3);
  ClusterData data = sample_cluster(gt, Model::square_linear, 4, 40, 40,
                                    Noise::std_normal, 21);
  Cluster c1(&data, 1);
  const Vector a = oneshot_avg_debias(c1, square_loss(), biweight_kernel(), {});

  std::swap(data.shards[1], data.shards[3]);
  std::swap(data.shards[0], data.shards[2]);
  Cluster c2(&data, 1);
  const Vector b = oneshot_avg_debias(c2, square_loss(), biweight_kernel(), {});
  CHECK(max_abs_diff(a, b) <= 1e-12);
}

TEST_CASE("csl with one machine reduces to the local lasso") {
  const GroundTruth gt = block_design_truth(20, 5);
  const ClusterData data = sample_cluster(gt, Model::huber_linear, 1, 100, 100,
                                          Noise::mixture_normal, 55);
  const MEstLoss loss = huber_loss(1.345);
  const double lambda = 0.5 * std::sqrt(std::log(20.0) / 100.0);

  Cluster cluster(&data, 1);
  CslOptions opts;
  opts.lambda = lambda;
  opts.lambda0_scale = 0.5;
  const CslResult res = csl(cluster, loss, 1, opts);

  ProxOptions prox;
  prox.lambda = lambda;
  const Vector direct = prox_lasso(data.shards[0], loss, prox).beta;
  CHECK(max_abs_diff(res.history.back(), direct) <= 1e-5);
}

TEST_CASE("csl rejects the non-smooth loss and T=0 returns the initializer") {
  const GroundTruth gt = block_design_truth(10, 2);
  const ClusterData data = sample_cluster(gt, Model::median_linear, 2, 30, 30,
                                          Noise::cauchy, 5);
  Cluster cluster(&data, 1);
  CHECK_THROWS_AS(csl(cluster, absolute_loss(), 2, {}), ConfigError);

  const CslResult res = csl(cluster, square_loss(), 0, {});
  CHECK(res.history.size() == 1);
}

TEST_CASE("csl surrogate objective descends every round") {
  const GroundTruth gt = block_design_truth(30, 5);
  const ClusterData data = sample_cluster(gt, Model::huber_linear, 5, 40, 40,
                                          Noise::mixture_normal, 93);
  const MEstLoss loss = huber_loss(1.345);
  Cluster cluster(&data, 2);
  CslOptions opts;
  opts.lambda = 0.5 * std::sqrt(std::log(30.0) / 200.0);
  const CslResult res = csl(cluster, loss, 3, opts);
  REQUIRE(res.history.size() == 4);

  // reconstruct each round's surrogate and check the master's solve descended
  for (std::size_t t = 0; t + 1 < res.history.size(); ++t) {
    const Vector& beta_t = res.history[t];
    std::vector<Vector> grads;
    for (std::size_t j = 0; j < 5; ++j) {
      grads.push_back(local_gradient(data.shards[j], loss, beta_t));
    }
    const Vector avg = gather_average(grads, nullptr);
    Vector shift(30);
    for (std::size_t l = 0; l < 30; ++l) shift[l] = grads[0][l] - avg[l];

    const auto surrogate = [&](const Vector& b) {
      double s = 0.0;
      for (std::size_t i = 0; i < data.shards[0].size(); ++i) {
        s += loss.value(dot(data.shards[0].x[i], b) - data.shards[0].y[i]);
      }
      s /= double(data.shards[0].size());
      return s - dot(shift, b) + opts.lambda * norm1(b);
    };
    CHECK(surrogate(res.history[t + 1]) <= surrogate(beta_t) + 1e-12);
  }
}

TEST_CASE("pooled and local lasso wrappers") {
  const GroundTruth gt = block_design_truth(20, 5);
  const ClusterData data = sample_cluster(gt, Model::huber_linear, 1, 60, 60,
                                          Noise::mixture_normal, 15);
  const MEstLoss loss = huber_loss(1.345);

  // with one machine the two wrappers solve the same problem
  const Vector pooled = pooled_lasso(data, loss, 0.1);
  const Vector local = local_lasso(data, loss, 0.1);
  CHECK(max_abs_diff(pooled, local) <= 1e-12);

  // an enormous penalty zeroes both
  CHECK(norm_inf(pooled_lasso(data, loss, 1e6)) == 0.0);
  CHECK(norm_inf(local_lasso(data, loss, 1e6)) == 0.0);
}
