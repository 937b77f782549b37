#include "dissd/cluster.hpp"

#include <string>

#include "dissd/errors.hpp"

namespace dissd {

double gather_reduce(const std::vector<std::optional<double>>& payloads,
                     CommLedger* ledger) {
  if (payloads.empty()) throw NumericalError("gather_reduce: no machines");
  KahanAccumulator acc;
  for (std::size_t j = 0; j < payloads.size(); ++j) {
    if (!payloads[j]) {
      throw NumericalError("gather_reduce: missing payload from machine " +
                           std::to_string(j + 1));
    }
    acc.add(*payloads[j]);
  }
  if (ledger) ledger->floats_up += payloads.size();
  return acc.sum / static_cast<double>(payloads.size());
}

Vector gather_reduce(const std::vector<std::optional<Vector>>& payloads,
                     CommLedger* ledger) {
  if (payloads.empty()) throw NumericalError("gather_reduce: no machines");
  std::size_t p = 0;
  for (std::size_t j = 0; j < payloads.size(); ++j) {
    if (!payloads[j]) {
      throw NumericalError("gather_reduce: missing payload from machine " +
                           std::to_string(j + 1));
    }
    if (j == 0) {
      p = payloads[j]->size();
    } else if (payloads[j]->size() != p) {
      throw NumericalError("gather_reduce: payload length mismatch at machine " +
                           std::to_string(j + 1));
    }
  }
  std::vector<KahanAccumulator> acc(p);
  for (const auto& payload : payloads) {
    const Vector& v = *payload;
    for (std::size_t i = 0; i < p; ++i) acc[i].add(v[i]);
  }
  Vector out(p);
  const double inv_m = 1.0 / static_cast<double>(payloads.size());
  for (std::size_t i = 0; i < p; ++i) out[i] = acc[i].sum * inv_m;
  if (ledger) ledger->floats_up += static_cast<std::uint64_t>(payloads.size()) * p;
  return out;
}

double gather_average(const std::vector<double>& payloads, CommLedger* ledger) {
  std::vector<std::optional<double>> wrapped(payloads.begin(), payloads.end());
  return gather_reduce(wrapped, ledger);
}

Vector gather_average(const std::vector<Vector>& payloads, CommLedger* ledger) {
  std::vector<std::optional<Vector>> wrapped(payloads.begin(), payloads.end());
  return gather_reduce(wrapped, ledger);
}

}  // namespace dissd
