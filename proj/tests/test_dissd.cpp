#include "doctest.h"

#include <cmath>
#include <cstring>

#include "dissd/dissd_mest.hpp"
#include "dissd/errors.hpp"
#include "dissd/init.hpp"
#include "dissd/rng.hpp"
#include "dissd/synth.hpp"

using namespace dissd;

namespace {

Shard one_point(const Vector& x, double y) {
  Shard s;
  s.x = {x};
  s.y = {y};
  return s;
}

// Shard whose residuals at beta=0 (1-d, x=0) are exactly `residuals`.
Shard residual_shard(const std::vector<double>& residuals) {
  Shard s;
  for (double r : residuals) {
    s.x.push_back({0.0});
    s.y.push_back(-r);
  }
  return s;
}

bool identical(const Vector& a, const Vector& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("local_gradient on single points") {
  // square loss at the origin pulls toward the label
  const Vector g1 = local_gradient(one_point({1.0, 0.0}, 2.0), square_loss(),
                                   {0.0, 0.0});
  CHECK(g1[0] == doctest::Approx(-2.0));
  CHECK(g1[1] == doctest::Approx(0.0));

  // clipped region of the huber loss
  const Vector g2 =
      local_gradient(one_point({1.0}, 0.0), huber_loss(1.345), {10.0});
  CHECK(g2[0] == doctest::Approx(1.345));

  // absolute loss with residual +1 gives x/2
  const Vector g3 =
      local_gradient(one_point({2.0, 1.0}, 0.0), absolute_loss(), {0.5, 0.0});
  CHECK(g3[0] == doctest::Approx(1.0));
  CHECK(g3[1] == doctest::Approx(0.5));
}

TEST_CASE("local_h on frozen residual sets") {
  const Kernel kernel = biweight_kernel();

  // huber: fraction of residuals inside the quadratic band
  const double h1 = local_h(residual_shard({0.5, 2.0, -1.0}), huber_loss(1.345),
                            kernel, {0.0}, 0.1);
  CHECK(h1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // absolute loss: pure kernel density at zero with h = 0.1
  const double h2 = local_h(residual_shard({0.0, 0.05, 1.0}), absolute_loss(),
                            kernel, {0.0}, 0.1);
  const double expected = (1.640625 + 0.230712890625 + 0.0) / 0.3;
  CHECK(h2 == doctest::Approx(expected).epsilon(1e-9));
  CHECK(h2 == doctest::Approx(6.2377930).epsilon(1e-6));

  // square loss: constant curvature one
  const double h3 = local_h(residual_shard({-4.0, 17.0, 0.2}), square_loss(),
                            kernel, {0.0}, 0.1);
  CHECK(h3 == 1.0);

  CHECK_THROWS_AS(local_h(residual_shard({0.1}), square_loss(), kernel, {0.0},
                          0.0),
                  ConfigError);
}

TEST_CASE("debias_update arithmetic") {
  SymMatrix eye(2);
  eye.set(0, 0, 1.0);
  eye.set(1, 1, 1.0);
  const PrecisionEstimate id = exact_precision(eye);
  const Vector out = debias_update({1.0, 0.0}, id, {0.3, -0.2}, 1.0);
  CHECK(out[0] == doctest::Approx(0.7));
  CHECK(out[1] == doctest::Approx(0.2));
}

TEST_CASE("one debias round from any start reproduces pooled least squares") {
  // square loss, one machine, exact inverse, no thresholding
  const GroundTruth gt = block_design_truth(40, 8);
  const ClusterData data = sample_cluster(gt, Model::square_linear, 1, 200, 200,
                                          Noise::std_normal, 51);
  Cluster cluster(&data, 1);

  const SymMatrix sig_hat = empirical_second_moment(data.shards[0].x);
  const PrecisionEstimate inv = exact_precision(sig_hat);

  // pooled least-squares oracle via cholesky solve of the normal equations
  Vector xy(40, 0.0);
  for (std::size_t i = 0; i < data.shards[0].size(); ++i) {
    for (std::size_t l = 0; l < 40; ++l) {
      xy[l] += data.shards[0].y[i] * data.shards[0].x[i][l];
    }
  }
  for (double& v : xy) v /= double(data.shards[0].size());
  const Vector pooled = cholesky(sig_hat, 1e-12).solve(xy);

  Rng rng(99);
  for (int trial = 0; trial < 3; ++trial) {
    DissdState state;
    state.beta_hat.resize(40);
    for (double& v : state.beta_hat) v = 4.0 * (rng.uniform01() - 0.5);
    state.beta_bar = state.beta_hat;

    const DissdState next = dissd_round(cluster, state, inv, square_loss(),
                                        biweight_kernel(), 0.1, 0.0);
    CHECK(max_abs_diff(next.beta_bar, pooled) <= 1e-8);
    CHECK(next.h_hat == doctest::Approx(1.0));
  }
}

TEST_CASE("degenerate curvature raises") {
  // every residual far outside the huber band makes the curvature zero
  ClusterData data;
  data.shards.resize(1);
  data.shards[0].x = {{1.0}, {1.0}};
  data.shards[0].y = {1e6, -1e6};
  Cluster cluster(&data, 1);
  DissdState state;
  state.beta_hat = {0.0};
  state.beta_bar = {0.0};
  const PrecisionEstimate id = exact_precision([] {
    SymMatrix eye(1);
    eye.set(0, 0, 1.0);
    return eye;
  }());
  CHECK_THROWS_AS(dissd_round(cluster, state, id, huber_loss(1.345),
                              biweight_kernel(), 0.1, 0.0),
                  NumericalError);
}

TEST_CASE("driver keeps one precision build and the exact traffic count") {
  const GroundTruth gt = block_design_truth(30, 5);
  const ClusterData data = sample_cluster(gt, Model::huber_linear, 4, 25, 40,
                                          Noise::mixture_normal, 6);
  for (std::size_t T : {std::size_t(1), std::size_t(3), std::size_t(10)}) {
    Cluster cluster(&data, 2);
    DissdOptions opts;
    opts.rounds = T;
    opts.sparsity = 5;
    const RunResult res =
        run_dissd_mest(cluster, huber_loss(1.345), biweight_kernel(), opts);

    CHECK(res.ledger.precision_builds == 1);
    CHECK(res.ledger.rounds == T);
    CHECK(res.history.size() == T + 1);
    // per round: m*p broadcast down, m*(p+1) gathered up
    const std::uint64_t expected =
        T * (4ull * 30 + 4ull * 31);
    CHECK(res.ledger.total() - res.init_floats == expected);
    CHECK(res.init_floats == 0);  // local init is communication free
  }
}

TEST_CASE("pgd init charges the ledger before the first round") {
  const GroundTruth gt = block_design_truth(20, 4);
  const ClusterData data = sample_cluster(gt, Model::square_linear, 3, 30, 45,
                                          Noise::std_normal, 8);
  Cluster cluster(&data, 1);
  DissdOptions opts;
  opts.rounds = 2;
  opts.init = InitKind::pgd;
  opts.init_rounds = 4;
  opts.sparsity = 4;
  const RunResult res =
      run_dissd_mest(cluster, square_loss(), biweight_kernel(), opts);
  CHECK(res.init_floats == 4ull * (3 * 20 + 3 * 20));
  CHECK(res.ledger.total() - res.init_floats == 2ull * (3 * 20 + 3 * 21));
}

TEST_CASE("T=0 returns the initializer unchanged") {
  const GroundTruth gt = block_design_truth(20, 4);
  const ClusterData data = sample_cluster(gt, Model::huber_linear, 2, 40, 60,
                                          Noise::mixture_normal, 12);
  Cluster cluster(&data, 1);
  DissdOptions opts;
  opts.rounds = 0;
  opts.sparsity = 4;
  const RunResult res =
      run_dissd_mest(cluster, huber_loss(1.345), biweight_kernel(), opts);
  REQUIRE(res.history.size() == 1);

  ProxOptions prox;
  prox.lambda = opts.lambda0_scale * std::sqrt(std::log(20.0) / 40.0);
  const Vector direct = prox_lasso(data.shards[0], huber_loss(1.345), prox).beta;
  CHECK(identical(res.history[0].beta_hat, direct));
}

TEST_CASE("runs are byte-identical across thread counts") {
  const GroundTruth gt = block_design_truth(30, 5);
  const ClusterData data = sample_cluster(gt, Model::median_linear, 6, 30, 60,
                                          Noise::cauchy, 44);
  const auto run_with = [&](int threads) {
    Cluster cluster(&data, threads);
    DissdOptions opts;
    opts.rounds = 4;
    opts.sparsity = 5;
    return run_dissd_mest(cluster, absolute_loss(), biweight_kernel(), opts);
  };
  const RunResult a = run_with(1);
  const RunResult b = run_with(4);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t t = 0; t < a.history.size(); ++t) {
    CHECK(identical(a.history[t].beta_bar, b.history[t].beta_bar));
    CHECK(identical(a.history[t].beta_hat, b.history[t].beta_hat));
    CHECK(a.history[t].h_hat == b.history[t].h_hat);
  }
}

TEST_CASE("threshold schedule decays and respects its knobs") {
  DissdOptions opts;
  opts.tau_scale = 1.0;
  opts.r0_scale = 0.2;
  opts.sparsity = 10;
  TauSchedule sched = TauSchedule::make(opts, 500, 100, 100, 550, false);
  double prev = 1e300;
  for (int t = 0; t < 6; ++t) {
    const double tau = sched.tau();
    CHECK(tau > 0.0);
    CHECK(tau <= prev);
    prev = tau;
    sched.advance();
  }
  // the GLM variant has a strictly larger curvature term at the same state
  TauSchedule glm = TauSchedule::make(opts, 500, 100, 100, 550, true);
  TauSchedule mest = TauSchedule::make(opts, 500, 100, 100, 550, false);
  CHECK(glm.tau() > mest.tau());

  // beta_hat always equals the thresholded beta_bar at the recorded tau
  const GroundTruth gt = block_design_truth(20, 4);
  const ClusterData data = sample_cluster(gt, Model::huber_linear, 2, 30, 40,
                                          Noise::mixture_normal, 3);
  Cluster cluster(&data, 1);
  DissdOptions run_opts;
  run_opts.rounds = 3;
  run_opts.sparsity = 4;
  const RunResult res =
      run_dissd_mest(cluster, huber_loss(1.345), biweight_kernel(), run_opts);
  for (std::size_t t = 1; t < res.history.size(); ++t) {
    const DissdState& st = res.history[t];
    CHECK(identical(st.beta_hat, hard_threshold(st.beta_bar, st.tau)));
  }
}
