#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gss/diagnostics.hpp"
#include "gss/sampler.hpp"

namespace gss {

/// One benchmark experiment: a manifold, a target family, a sampler, and
/// the run protocol. The hyperparameter fields that accept lists (lambda,
/// w, m, h_a, h) define a sweep; the cartesian product is expanded in the
/// fixed field order lambda, w, m, h_a, h.
struct ExperimentConfig {
  std::string manifold_kind;  // sphere | stiefel | grassmann
  int n = 0;
  int k = 1;
  std::string family;  // varying_n | varying_k | anisotropy | grassmann_variance | sphere_vmf
  std::vector<double> lambdas{1.0};
  std::string sampler;  // gss | rmh | geormh | geomala
  std::vector<double> widths{1.0};        // w
  std::vector<int> max_steps{1};          // m
  std::vector<double> mh_step_sizes{0.01};   // h_a (initial, adapted every 20 steps)
  std::vector<double> mala_step_sizes{0.1};  // h (fixed)
  long max_shrink_attempts = 10000;
  long n_steps = 20000;
  int n_repetitions = 10;
  std::uint64_t master_seed = 0;
  std::string output_path = "results.csv";
  std::vector<std::string> warnings;  // non-fatal notes collected while parsing
};

extern const char* const kCsvHeader;

/// Strict config parse: unknown keys are errors, values are validated
/// against the module contracts. Ignored-but-known keys (for example a
/// lambda for a family that does not use it) produce warnings, not errors.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& source_name);

struct RunOptions {
  int workers = 1;
  bool quiet = false;
};

/// Executes the experiment: per repetition derive a child seed, build the
/// initial point by projecting a Unif[0,1] ambient matrix, run the chain,
/// and append one CSV row; each sweep variant ends with a summary row. A
/// sidecar <output>.meta.json records the config echo, per-run seeds, the
/// full ESS summaries, and the serialized final states. Deterministic for a
/// fixed config up to the wall-time column.
void run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Flat row-major point serialization with a descriptor header.
nlohmann::json point_to_json(const Point& x);
Point point_from_json(const nlohmann::json& j);

}  // namespace gss
