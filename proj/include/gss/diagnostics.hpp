#pragma once

#include <span>
#include <vector>

#include "gss/sampler.hpp"

namespace gss {

struct EssResult {
  double ess;
  bool superefficient;  // set when the raw estimate exceeded the sample count
};

/// Effective sample size by the initial-positive-sequence estimator:
/// N / (1 + 2 sum rho_k), truncating the autocorrelation sum at the first
/// nonpositive sum of consecutive pairs. The estimate is clamped to [1, N];
/// chains whose raw estimate exceeds N are reported as N with the
/// superefficient flag set.
EssResult ess(std::span<const double> series);

/// Per-state log density of the chain, the scalar series the benchmarks
/// compute their ESS on.
std::vector<double> trace_statistic(const ChainResult& chain, const Target& target);

struct EssSummary {
  std::vector<double> per_run_ess;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  long n_samples = 0;
};

/// Order statistics over repeated runs. The median of an even-length list
/// is the lower middle element.
EssSummary summarize_repetitions(const std::vector<double>& per_run_ess, long n_samples);

}  // namespace gss
