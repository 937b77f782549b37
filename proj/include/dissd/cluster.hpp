#ifndef DISSD_CLUSTER_HPP
#define DISSD_CLUSTER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dissd/linalg.hpp"
#include "dissd/parallel.hpp"
#include "dissd/synth.hpp"

namespace dissd {

// Exact count of scalars crossing the master/worker boundary, plus how many
// precision-matrix builds a run performed. Counters only ever grow.
struct CommLedger {
  std::uint64_t floats_up = 0;
  std::uint64_t floats_down = 0;
  std::uint64_t rounds = 0;
  std::uint64_t precision_builds = 0;

  std::uint64_t total() const { return floats_up + floats_down; }
};

// Compensated (Kahan) scalar accumulator; summation order is fixed by the
// caller, which is what makes reductions bitwise thread-count independent.
struct KahanAccumulator {
  double sum = 0.0;
  double c = 0.0;

  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// Averages one payload per machine in machine-index order (compensated
// summation). A missing payload is an error naming the machine.
double gather_reduce(const std::vector<std::optional<double>>& payloads,
                     CommLedger* ledger = nullptr);
Vector gather_reduce(const std::vector<std::optional<Vector>>& payloads,
                     CommLedger* ledger = nullptr);

double gather_average(const std::vector<double>& payloads,
                      CommLedger* ledger = nullptr);
Vector gather_average(const std::vector<Vector>& payloads,
                      CommLedger* ledger = nullptr);

// In-process master/worker simulation. Worker closures receive only their own
// shard (workers have no handle to any other machine's data; isolation is
// enforced by this interface shape). Payloads cross the boundary as values or
// const references, so a broadcast cannot be mutated by a recipient. A future
// socket transport would implement the same broadcast/map/gather contract.
class Cluster {
 public:
  Cluster(const ClusterData* data, int threads)
      : data_(data), threads_(threads < 1 ? 1 : threads) {}

  std::size_t machines() const { return data_->machines(); }
  std::size_t dim() const { return data_->dim(); }
  std::size_t shard_size() const { return data_->shard_size(); }
  std::size_t labeled_total() const { return data_->labeled_total(); }
  const Shard& shard(std::size_t j) const { return data_->shards[j]; }
  const Shard& master_shard() const { return data_->shards.front(); }
  const std::vector<Vector>& unlabeled() const { return data_->unlabeled; }
  std::vector<Vector> master_covariates() const { return data_->master_covariates(); }
  std::size_t master_rows() const { return master_shard().size() + unlabeled().size(); }

  int threads() const { return threads_; }
  CommLedger& ledger() { return ledger_; }
  const CommLedger& ledger() const { return ledger_; }

  // One delivery per machine: floats_down += m * len.
  void charge_broadcast(std::size_t len) {
    ledger_.floats_down += static_cast<std::uint64_t>(machines()) * len;
  }

  // Evaluates f(machine_index, shard) on every machine, in parallel; slot j of
  // the result belongs to machine j, so output is schedule independent.
  template <class T, class F>
  std::vector<T> map_machines(F&& f) const {
    std::vector<T> out(machines());
    parallel_for(machines(), threads_,
                 [&](std::size_t j) { out[j] = f(j, data_->shards[j]); });
    return out;
  }

 private:
  const ClusterData* data_;
  int threads_;
  CommLedger ledger_;
};

}  // namespace dissd

#endif  // DISSD_CLUSTER_HPP
