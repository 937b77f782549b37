#ifndef DISSD_DISSD_MEST_HPP
#define DISSD_DISSD_MEST_HPP

#include <cstdint>
#include <vector>

#include "dissd/cluster.hpp"
#include "dissd/linalg.hpp"
#include "dissd/losses.hpp"
#include "dissd/scio.hpp"

namespace dissd {

// One debiasing round's output: the dense debiased iterate and its
// hard-thresholded companion, plus the curvature scalar used.
struct DissdState {
  Vector beta_hat;   // thresholded iterate
  Vector beta_bar;   // dense debiased iterate
  std::size_t round = 0;
  double h_hat = 0.0;  // averaged curvature estimate used this round
  double tau = 0.0;    // threshold applied this round
};

// (1/n) sum f'(x_i'beta - y_i) x_i over the shard's labeled rows.
Vector local_gradient(const Shard& shard, const MEstLoss& loss,
                      const Vector& beta);

// Local curvature estimate: mean second derivative at the residuals plus, for
// every jump of f', a kernel density term gap * (1/(n h)) sum K((r - x_k)/h).
// Labeled rows only, divided by n. Exactly the smooth part for smooth losses.
double local_h(const Shard& shard, const MEstLoss& loss, const Kernel& kernel,
               const Vector& beta, double bandwidth);

// beta - (1/h) * Omega * g, the debiasing update shared by every round.
Vector debias_update(const Vector& beta, const PrecisionEstimate& precision,
                     const Vector& avg_gradient, double h);

// Broadcast beta_hat, gather (gradient, curvature) per machine, average both
// in machine order, debias, threshold. Charges m*p down and m*(p+1) up.
// Throws NumericalError when |averaged curvature| < 1e-8.
DissdState dissd_round(Cluster& cluster, const DissdState& state,
                       const PrecisionEstimate& precision, const MEstLoss& loss,
                       const Kernel& kernel, double bandwidth, double tau);

enum class InitKind { local, random, pgd };

enum class BandwidthRule { fixed, rate_proportional };

struct DissdOptions {
  std::size_t rounds = 5;      // T
  double tau_scale = 0.5;      // threshold constant
  double r0_scale = 1.0;       // scales the nominal initial rate sqrt(s log p / n)
  double lambda_scale = 0.5;   // precision-row l1 scale
  double lambda0_scale = 0.5;  // initializer l1 scale
  double pgd_lambda_scale = 0.5;
  std::size_t sparsity = 10;   // s entering the threshold schedule
  double bandwidth = 0.1;
  BandwidthRule bandwidth_rule = BandwidthRule::fixed;
  InitKind init = InitKind::local;
  std::size_t init_rounds = 10;  // pgd init
  std::uint64_t init_seed = 1;   // random init
  double psi2_floor = 0.01;      // GLM only
  bool with_variance = false;    // extra pass for plug-in variance inputs
};

struct RunResult {
  std::vector<DissdState> history;  // [0..T], entry 0 is the initializer
  PrecisionEstimate precision;
  CommLedger ledger;        // snapshot after the run
  std::uint64_t init_floats = 0;  // traffic charged before round 1
  double h_final = 0.0;           // curvature estimate at the final iterate
  double fprime_sq_mean = 0.0;    // pooled mean of f'(r)^2 at the final iterate
  std::vector<double> elapsed_ms;  // cumulative wall time per history entry

  const DissdState& final_state() const { return history.back(); }
};

// Threshold schedule: tau_t = tau_scale*(sqrt(log p/(mn)) + r*s*sqrt(log p/n*)
// + r^2) for M-estimation, with the r^2 term replaced by s*(log p)^2*r^2 for
// GLM. r starts at r0_scale*sqrt(s log p/n) and contracts each round through
// r <- min(r, sqrt(log p/(mn)) + r*sqrt(log p/n*)), the per-round gain the
// semi-supervised debias step delivers.
struct TauSchedule {
  double tau_scale;
  double r;
  double s;
  double log_p;
  double mn;
  double n_star;
  bool glm = false;

  static TauSchedule make(const DissdOptions& opts, std::size_t p,
                          std::size_t m, std::size_t n, std::size_t n_star,
                          bool glm);
  double tau() const;
  double rate() const { return r; }
  void advance();
};

// Initial estimator per the configured kind: local l1 fit on the master,
// random coordinates, or early-stopped distributed proximal gradient descent.
Vector dissd_initializer(Cluster& cluster, const MEstLoss& loss,
                         const DissdOptions& opts);

// Penalty scale handed to the precision solve: lambda_scale inflated by
// sqrt(p / master rows) when the master holds fewer rows than coordinates.
double master_lambda_scale(const DissdOptions& opts, const Cluster& cluster);

// Algorithm driver: builds the precision estimate once from the master's
// covariates, initializes, then runs T rounds keeping the full history.
RunResult run_dissd_mest(Cluster& cluster, const MEstLoss& loss,
                         const Kernel& kernel, const DissdOptions& opts);

}  // namespace dissd

#endif  // DISSD_DISSD_MEST_HPP
