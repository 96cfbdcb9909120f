#include "gss/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace gss {

EssResult ess(std::span<const double> series) {
  const long n = static_cast<long>(series.size());
  if (n < 10) throw contract_error("ess: series too short, need at least 10 samples");

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  auto autocovariance = [&](long lag) {
    double acc = 0.0;
    for (long i = 0; i + lag < n; ++i)
      acc += (series[i] - mean) * (series[i + lag] - mean);
    return acc / static_cast<double>(n);
  };

  const double c0 = autocovariance(0);
  if (c0 <= 0.0) throw numeric_error("ess: series has zero variance");

  // Initial positive sequence: accumulate rho_{2j} + rho_{2j+1} while the
  // pair sums stay positive.
  double pair_total = 0.0;
  for (long j = 0;; ++j) {
    const long k0 = 2 * j;
    const long k1 = 2 * j + 1;
    if (k0 >= n) break;
    double pair = autocovariance(k0) / c0;
    if (k1 < n) pair += autocovariance(k1) / c0;
    if (pair <= 0.0) break;
    pair_total += pair;
  }
  const double iact = -1.0 + 2.0 * pair_total;

  if (iact < 1.0) return {static_cast<double>(n), true};
  return {std::clamp(static_cast<double>(n) / iact, 1.0, static_cast<double>(n)), false};
}

std::vector<double> trace_statistic(const ChainResult& chain, const Target& target) {
  if (chain.states.empty()) throw contract_error("trace_statistic: empty chain");
  std::vector<double> values;
  values.reserve(chain.states.size());
  for (const Point& state : chain.states) values.push_back(target.log_density(state));
  return values;
}

EssSummary summarize_repetitions(const std::vector<double>& per_run_ess, long n_samples) {
  if (per_run_ess.empty()) throw contract_error("summarize_repetitions: empty list");
  EssSummary summary;
  summary.per_run_ess = per_run_ess;
  summary.n_samples = n_samples;
  std::vector<double> sorted = per_run_ess;
  std::sort(sorted.begin(), sorted.end());
  summary.min = sorted.front();
  summary.max = sorted.back();
  summary.median = sorted[(sorted.size() - 1) / 2];
  return summary;
}

}  // namespace gss
