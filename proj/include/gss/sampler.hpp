#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "gss/manifold.hpp"
#include "gss/slice1d.hpp"
#include "gss/target.hpp"

namespace gss {

struct GssConfig {
  StepOutParams step_out{1.0, 1};
  long max_shrink_attempts = 10000;
};

struct GssStepResult {
  Point state;
  double log_level;      // log of the auxiliary level t
  long shrink_attempts;  // proposals consumed by the shrinkage loop
};

/// One geodesic slice sampling transition: draw a level uniformly below the
/// current density (in log space), draw a uniform unit tangent, bracket the
/// slice along the geodesic by stepping out, then shrink to a point of the
/// slice. The accepted state is reprojected onto the manifold.
GssStepResult gss_step(const Point& x, const Target& target, const GssConfig& cfg, Rng& rng);

struct MhStepResult {
  Point state;
  bool accepted;
};

/// Random walk Metropolis on the Stiefel manifold: propose
/// project(x + h * G) with entrywise standard Gaussian G and accept with
/// the plain density ratio. The proposal is not symmetric, so this kernel
/// is biased; it is kept as a benchmark baseline only.
MhStepResult rmh_step(const Point& x, const Target& target, double step_size, Rng& rng);

/// Multiplicative step size adaptation toward a target acceptance rate.
double adapt_step_size(double step_size, double recent_accept_rate, double target_rate = 0.234);

/// Geodesic random walk Metropolis: propose gamma_{(x, V)}(h) with V a
/// standard Gaussian on the tangent space. The proposal is symmetric, so
/// the plain density ratio gives an exact (unbiased) chain.
MhStepResult geormh_step(const Point& x, const Target& target, double step_size, Rng& rng);

/// Geodesic Metropolis-adjusted Langevin step on the Grassmann manifold:
/// half-step gradient kick, geodesic transport of the velocity, second
/// half-step kick, and the kinetic-energy-corrected accept test.
MhStepResult geomala_step(const Point& x, const Target& target, double step, Rng& rng);

enum class SamplerKind { gss, rmh, geormh, geomala };

const char* to_string(SamplerKind kind);

struct SamplerSpec {
  SamplerKind kind = SamplerKind::gss;
  GssConfig gss;
  double step_size = 0.01;  // initial h_a for rmh / geormh, fixed h for geomala
  bool adapt = true;        // rmh / geormh only
  int adapt_interval = 20;
  double target_accept_rate = 0.234;
};

struct ChainResult {
  std::vector<Point> states;
  std::vector<double> log_levels;         // gss
  std::vector<long> shrink_attempts;      // gss
  std::vector<std::uint8_t> accept_flags; // rmh / geormh / geomala
  double final_step_size = 0.0;
  double wall_time_s = 0.0;
};

/// Drives n_steps transitions of the chosen kernel, recording per step
/// instrumentation. Bit-reproducible for a fixed (spec, x0, rng state).
ChainResult run_chain(const SamplerSpec& spec, const Target& target, const Point& x0,
                      long n_steps, Rng& rng);

/// Benchmark initialization: entrywise Unif[0, 1] ambient matrix projected
/// onto the manifold.
Point random_benchmark_start(const Manifold& manifold, Rng& rng);

/// One transition of the idealized slice sampler on the real line: draw a
/// level below p(x), then return an exact uniform draw from the level set.
/// The caller supplies the level set sampler (feasible for analytically
/// tractable densities); this kernel is a test oracle, not a practical
/// sampler.
double ideal_slice_1d_step(double x, const std::function<double(double)>& log_density,
                           const std::function<double(double, Rng&)>& level_set_sampler,
                           Rng& rng);

}  // namespace gss
