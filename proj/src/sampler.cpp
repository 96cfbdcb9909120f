#include "gss/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace gss {

namespace {

Matrix ambient_gaussian(const Manifold& m, Rng& rng) {
  Matrix g(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) g(i, j) = standard_normal(rng);
  return g;
}

std::string describe_stall_context(const Point& x, double log_level, const Tangent& v) {
  const Eigen::IOFormat flat(Eigen::FullPrecision, Eigen::DontAlignCols, ",", ";", "", "", "[", "]");
  std::ostringstream oss;
  oss << "manifold=" << x.manifold.describe() << " log_level=" << log_level
      << " state=" << x.value.format(flat) << " direction=" << v.value.format(flat);
  return oss.str();
}

bool accept_log_ratio(double log_ratio, Rng& rng) {
  return std::log(uniform_open01(rng)) < log_ratio;
}

}  // namespace

const char* to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::gss: return "gss";
    case SamplerKind::rmh: return "rmh";
    case SamplerKind::geormh: return "geormh";
    case SamplerKind::geomala: return "geomala";
  }
  return "?";
}

GssStepResult gss_step(const Point& x, const Target& target, const GssConfig& cfg, Rng& rng) {
  const double logp_x = target.log_density(x);
  if (!std::isfinite(logp_x))
    throw contract_error("gss_step: log density is not finite at the current state");
  const double log_level = logp_x + std::log(uniform_open01(rng));
  const Tangent direction = sample_unit_tangent(x, rng);
  const GeodesicPath path = make_geodesic(x, direction);
  auto member = [&](double alpha) { return target.log_density(path.at(alpha)) > log_level; };
  const Interval bracket = step_out(0.0, member, cfg.step_out, rng);
  ShrinkOutcome outcome;
  try {
    outcome = shrink(member, bracket, rng, cfg.max_shrink_attempts);
  } catch (const shrink_stall_error& e) {
    throw shrink_stall_error(e.attempts(), std::string(e.what()) + "; " +
                                               describe_stall_context(x, log_level, direction));
  }
  Point next = project(x.manifold, path.at(outcome.theta).value);
  return {std::move(next), log_level, outcome.attempts};
}

MhStepResult rmh_step(const Point& x, const Target& target, double step_size, Rng& rng) {
  if (x.manifold.kind() != ManifoldKind::stiefel)
    throw contract_error("rmh_step: defined on the Stiefel manifold");
  if (!(step_size >= 0.0) || !std::isfinite(step_size))
    throw contract_error("rmh_step: step size must be finite and nonnegative");
  const Matrix noise = ambient_gaussian(x.manifold, rng);
  Point proposal{x.manifold, Matrix()};
  try {
    proposal = project(x.manifold, x.value + step_size * noise);
  } catch (const numeric_error&) {
    return {x, false};
  }
  const double log_ratio = target.log_density(proposal) - target.log_density(x);
  if (accept_log_ratio(log_ratio, rng)) return {std::move(proposal), true};
  return {x, false};
}

double adapt_step_size(double step_size, double recent_accept_rate, double target_rate) {
  if (!(step_size > 0.0)) throw contract_error("adapt_step_size: step size must be positive");
  constexpr double gain = 0.5;
  const double updated = step_size * std::exp(gain * (recent_accept_rate - target_rate));
  return std::clamp(updated, 1e-8, 1e4);
}

MhStepResult geormh_step(const Point& x, const Target& target, double step_size, Rng& rng) {
  if (!(step_size >= 0.0) || !std::isfinite(step_size))
    throw contract_error("geormh_step: step size must be finite and nonnegative");
  Tangent velocity = sample_tangent_gaussian(x, rng);
  while (tangent_norm(velocity) == 0.0) velocity = sample_tangent_gaussian(x, rng);
  const Point raw = make_geodesic(x, velocity).at(step_size);
  const double log_ratio = target.log_density(raw) - target.log_density(x);
  if (accept_log_ratio(log_ratio, rng)) return {project(x.manifold, raw.value), true};
  return {x, false};
}

MhStepResult geomala_step(const Point& x, const Target& target, double step, Rng& rng) {
  if (x.manifold.kind() != ManifoldKind::grassmann)
    throw contract_error("geomala_step: defined on the Grassmann manifold");
  if (!target.has_gradient())
    throw config_error("geomala_step: target does not provide a Euclidean gradient");
  if (!(step > 0.0) || !std::isfinite(step))
    throw contract_error("geomala_step: step must be positive and finite");

  auto project_tangent = [](const Point& w, const Matrix& a) {
    return (a - w.value * (w.value.transpose() * a)).eval();
  };

  const Matrix noise = ambient_gaussian(x.manifold, rng);
  const Matrix v0 = project_tangent(x, noise);
  const double energy0 = target.log_density(x) - 0.5 * v0.squaredNorm();

  const Matrix v_kicked = project_tangent(x, v0 + 0.5 * step * target.euclid_grad_log_density(x));
  Point moved{x.manifold, x.value};
  Matrix v_transported = v_kicked;
  if (v_kicked.norm() > 0.0) {
    auto [p, vel] = make_geodesic(x, Tangent{x, v_kicked}).at_with_velocity(step);
    moved = std::move(p);
    v_transported = std::move(vel.value);
  }
  const Matrix v_final =
      project_tangent(moved, v_transported + 0.5 * step * target.euclid_grad_log_density(moved));
  const double energy1 = target.log_density(moved) - 0.5 * v_final.squaredNorm();

  if (accept_log_ratio(energy1 - energy0, rng)) return {project(x.manifold, moved.value), true};
  return {x, false};
}

ChainResult run_chain(const SamplerSpec& spec, const Target& target, const Point& x0,
                      long n_steps, Rng& rng) {
  if (n_steps < 1) throw contract_error("run_chain: n_steps must be >= 1");
  check_point(x0);
  if (x0.manifold != target.manifold)
    throw contract_error("run_chain: initial point and target live on different manifolds");

  ChainResult result;
  result.states.reserve(n_steps);
  const bool is_gss = spec.kind == SamplerKind::gss;
  if (is_gss) {
    result.log_levels.reserve(n_steps);
    result.shrink_attempts.reserve(n_steps);
  } else {
    result.accept_flags.reserve(n_steps);
  }

  Point x = x0;
  double step_size = spec.step_size;
  int window_accepts = 0;
  int window_size = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (long i = 0; i < n_steps; ++i) {
    switch (spec.kind) {
      case SamplerKind::gss: {
        GssStepResult s = gss_step(x, target, spec.gss, rng);
        x = std::move(s.state);
        result.log_levels.push_back(s.log_level);
        result.shrink_attempts.push_back(s.shrink_attempts);
        break;
      }
      case SamplerKind::rmh:
      case SamplerKind::geormh: {
        MhStepResult s = spec.kind == SamplerKind::rmh
                             ? rmh_step(x, target, step_size, rng)
                             : geormh_step(x, target, step_size, rng);
        x = std::move(s.state);
        result.accept_flags.push_back(s.accepted ? 1 : 0);
        window_accepts += s.accepted ? 1 : 0;
        ++window_size;
        if (spec.adapt && window_size == spec.adapt_interval) {
          step_size = adapt_step_size(step_size,
                                      static_cast<double>(window_accepts) / window_size,
                                      spec.target_accept_rate);
          window_accepts = 0;
          window_size = 0;
        }
        break;
      }
      case SamplerKind::geomala: {
        MhStepResult s = geomala_step(x, target, step_size, rng);
        x = std::move(s.state);
        result.accept_flags.push_back(s.accepted ? 1 : 0);
        break;
      }
    }
    result.states.push_back(x);
  }
  result.final_step_size = step_size;
  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

Point random_benchmark_start(const Manifold& manifold, Rng& rng) {
  Matrix raw(manifold.rows(), manifold.cols());
  for (int i = 0; i < manifold.rows(); ++i)
    for (int j = 0; j < manifold.cols(); ++j) raw(i, j) = uniform_real(rng, 0.0, 1.0);
  return project(manifold, raw);
}

double ideal_slice_1d_step(double x, const std::function<double(double)>& log_density,
                           const std::function<double(double, Rng&)>& level_set_sampler,
                           Rng& rng) {
  const double lp = log_density(x);
  if (!std::isfinite(lp))
    throw contract_error("ideal_slice_1d_step: log density is not finite at the current state");
  const double log_level = lp + std::log(uniform_open01(rng));
  return level_set_sampler(log_level, rng);
}

}  // namespace gss
