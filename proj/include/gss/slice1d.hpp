#pragma once

#include <string>
#include <vector>

#include "gss/rng.hpp"
#include "gss/types.hpp"

// One-dimensional stepping-out and shrinkage. Both procedures are written
// against an arbitrary membership predicate S so their distributional
// properties can be tested directly, independent of any manifold or target.

namespace gss {

/// Stepping-out hyperparameters: interval width w and the maximal total
/// number of width-w steps m.
struct StepOutParams {
  double width = 1.0;
  int max_steps = 1;
};

struct Interval {
  double ell;
  double r;
};

struct ShrinkOutcome {
  double theta;
  long attempts;
};

namespace detail {

inline void check_step_out_params(const StepOutParams& params) {
  if (!(params.width > 0.0)) throw contract_error("step_out: width must be positive");
  if (params.max_steps < 1) throw contract_error("step_out: max_steps must be >= 1");
}

}  // namespace detail

/// Deterministic core of the stepping-out procedure, with the interval
/// placement u in [0, w] and the left/right budget split iota in {1, .., m}
/// pinned by the caller. The interval of width w is placed as
/// (theta0 - u, theta0 - u + w), then extended left by at most iota - 1
/// steps and right by at most m - iota steps, stopping early on the first
/// boundary outside S.
template <typename Member>
Interval step_out_pinned(double theta0, Member&& member, const StepOutParams& params, double u,
                         int iota) {
  detail::check_step_out_params(params);
  if (!(u >= 0.0 && u <= params.width)) throw contract_error("step_out: u outside [0, w]");
  if (iota < 1 || iota > params.max_steps)
    throw contract_error("step_out: iota outside {1, .., m}");
  const double w = params.width;
  double ell = theta0 - u;
  double r = ell + w;
  for (int i = 2; i <= iota && member(ell); ++i) ell -= w;
  for (int j = 2; j <= params.max_steps + 1 - iota && member(r); ++j) r += w;
  return {ell, r};
}

/// Randomized stepping-out around theta0 targeting the set decided by
/// `member`. Always terminates; the result satisfies
/// r - ell <= (m + 1) * w.
template <typename Member>
Interval step_out(double theta0, Member&& member, const StepOutParams& params, Rng& rng) {
  detail::check_step_out_params(params);
  const double u = uniform_real(rng, 0.0, params.width);
  const int iota = uniform_int(rng, 1, params.max_steps);
  return step_out_pinned(theta0, member, params, u, iota);
}

/// Wrap rule of the shrinkage procedure: maps the circle coordinate
/// theta_h in (0, r - ell) back into [ell, r). The comparison is strict.
inline double wrap_into(double theta_h, const Interval& iv) {
  return theta_h - (theta_h > iv.r ? (iv.r - iv.ell) : 0.0);
}

/// Shrinkage on the interval (ell, r) viewed as a circle, with the current
/// point at 0 (callers with a nonzero current point translate the frame).
/// Proposals are drawn uniformly from (0, theta_max) u [theta_min, r - ell)
/// in the wrapped coordinate; each rejection moves one bracket end to the
/// rejected coordinate. Requires an open membership set for almost-sure
/// termination; the attempt budget turns violations of that requirement
/// into a diagnosable error instead of a hang.
template <typename Member>
ShrinkOutcome shrink(Member&& member, const Interval& iv, Rng& rng, long max_attempts = 10000) {
  if (!(iv.ell < 0.0 && 0.0 < iv.r))
    throw contract_error("shrink: interval must satisfy ell < 0 < r");
  if (max_attempts < 1) throw contract_error("shrink: max_attempts must be >= 1");
  const double len = iv.r - iv.ell;
  double theta_h = uniform_real(rng, 0.0, len);
  double theta = wrap_into(theta_h, iv);
  double theta_min = theta_h;
  double theta_max = theta_h;
  long attempts = 1;
  while (!member(theta)) {
    if (theta_h >= theta_min && theta_h < len)
      theta_min = theta_h;
    else
      theta_max = theta_h;
    if (attempts >= max_attempts)
      throw shrink_stall_error(
          attempts, "shrink: no accepted point after " + std::to_string(attempts) + " attempts");
    const double total = theta_max + (len - theta_min);
    const double z = uniform_real(rng, 0.0, total);
    theta_h = z < theta_max ? z : z - theta_max + theta_min;
    theta = wrap_into(theta_h, iv);
    ++attempts;
  }
  return {theta, attempts};
}

/// Batch of independent stepping-out draws, for sampling the law of the
/// produced intervals.
template <typename Member>
std::vector<Interval> stepout_law_samples(double theta0, Member&& member,
                                          const StepOutParams& params, Rng& rng,
                                          std::size_t count) {
  std::vector<Interval> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(step_out(theta0, member, params, rng));
  return out;
}

}  // namespace gss
