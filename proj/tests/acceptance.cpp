// Acceptance suite. Each criterion prints exactly one PASS / FAIL line;
// the exit status is the number of failed criteria. Run a single criterion
// by passing its number as the only argument.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gss/bench.hpp"
#include "gss/diagnostics.hpp"
#include "gss/linalg.hpp"
#include "gss/sampler.hpp"
#include "sampler_checks.hpp"

using gss::Manifold;
using gss::Matrix;
using gss::Point;
using gss::Vector;

namespace {

struct Criterion {
  int number;
  const char* name;
  bool (*run)(std::string& detail);
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- C1: stepping-out / shrinkage law suite at 1e6 draws -------------------

bool criterion_lemma_suite(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  gss::Rng rng = gss::make_rng(1001);
  const std::size_t n = 1000000;
  const testutil::SteppingLawSetup setup;

  const double sym_far = testutil::stepping_symmetry_gap_se(setup, 0.2, 2.4, n, rng);
  const double sym_near = testutil::stepping_symmetry_gap_se(setup, 0.2, -0.5, n, rng);
  const double uturn_p = testutil::stepping_uturn_min_pvalue(setup, 0.2, 2.4, n, rng);
  const double shrink_se = testutil::shrink_reversibility_max_se(n, rng);
  const double shrink_p = testutil::shrink_uturn_pvalue(n, rng);
  const double elapsed = seconds_since(t0);

  std::ostringstream oss;
  oss << "hit-symmetry gap " << sym_far << " / " << sym_near << " se (<= 4), u-turn stepping p "
      << uturn_p << " (> 0.01), shrink flow " << shrink_se << " se (<= 5), shrink u-turn p "
      << shrink_p << " (> 0.01), " << elapsed << " s (< 300)";
  detail = oss.str();
  return sym_far <= 4.0 && sym_near <= 4.0 && uturn_p > 0.01 && shrink_se <= 5.0 &&
         shrink_p > 0.01 && elapsed < 300.0;
}

// --- C2: geodesic invariants, 500 random cases per backend -----------------

bool criterion_geodesic_invariants(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  gss::Rng rng = gss::make_rng(1002);
  bool ok = true;
  std::ostringstream oss;
  for (const Manifold& m : {Manifold::sphere(2), Manifold::sphere(9), Manifold::stiefel(5, 2),
                            Manifold::stiefel(30, 5), Manifold::grassmann(5, 2)}) {
    const auto report = testutil::geodesic_invariants(m, 500, rng);
    const bool backend_ok = report.max_constraint <= 1e-7 && report.max_speed_error <= 1e-6 &&
                            report.max_flow_gap <= 1e-7 && report.max_uturn_gap <= 1e-7 &&
                            report.max_period_gap <= 1e-8;
    ok = ok && backend_ok;
    oss << m.describe() << (backend_ok ? " ok" : " FAILED") << " (constraint "
        << report.max_constraint << ", speed " << report.max_speed_error << ", flow "
        << report.max_flow_gap << ", uturn " << report.max_uturn_gap << "); ";
  }
  const double elapsed = seconds_since(t0);
  oss << elapsed << " s (< 120)";
  detail = oss.str();
  return ok && elapsed < 120.0;
}

// --- C3: GSS reversibility and invariance on the sphere --------------------

bool criterion_gss_sphere(std::string& detail) {
  gss::Rng rng = gss::make_rng(1003);
  Vector mu = Vector::Zero(3);
  mu(0) = 1.0;
  const double kappa = 2.0;
  const gss::Target target = gss::make_vmf_sphere_target(mu, kappa);
  const gss::GssConfig cfg{{1.0, 3}, 10000};
  auto step = [&](const Point& x, gss::Rng& r) { return gss::gss_step(x, target, cfg, r).state; };

  const double flow_se = testutil::sphere_flow_asymmetry_se(step, mu, kappa, 1000000, 12, rng);

  // Long-chain mean of the cosine statistic against the exact oracle, with
  // the chain standard error deflated by its effective sample size.
  const long chain_steps = 100000;
  std::vector<double> cosines(chain_steps);
  Point x{target.manifold, gss::vmf_sphere_oracle_sample(mu, kappa, rng)};
  for (long i = 0; i < chain_steps; ++i) {
    x = step(x, rng);
    cosines[i] = mu.dot(x.value.col(0));
  }
  const double chain_ess = gss::ess(cosines).ess;
  const double chain_se =
      std::sqrt(testutil::sample_variance(cosines) / chain_ess);
  const std::size_t oracle_n = 1000000;
  std::vector<double> oracle(oracle_n);
  for (std::size_t i = 0; i < oracle_n; ++i)
    oracle[i] = mu.dot(gss::vmf_sphere_oracle_sample(mu, kappa, rng));
  const double gap = std::abs(testutil::mean(cosines) - testutil::mean(oracle));
  const double se = std::sqrt(chain_se * chain_se +
                              testutil::standard_error(oracle) * testutil::standard_error(oracle));

  std::ostringstream oss;
  oss << "flow asymmetry " << flow_se << " se (<= 5), chain mean gap " << gap / se
      << " se (<= 4, ess " << chain_ess << ")";
  detail = oss.str();
  return flow_se <= 5.0 && gap <= 4.0 * se;
}

// --- C4: idealized 1-d slice sampler vs inverse-cdf sampling ----------------

bool criterion_ideal_slice(std::string& detail) {
  gss::Rng rng = gss::make_rng(1004);
  const int steps = 100000;
  const int thin = 10;
  std::vector<double> chain, oracle;
  chain.reserve(steps / thin);
  oracle.reserve(steps / thin);
  double x = 0.0;
  for (int i = 0; i < steps; ++i) {
    x = gss::ideal_slice_1d_step(x, testutil::triangle_log_density,
                                 testutil::triangle_level_set_sample, rng);
    if (i % thin == 0) {
      chain.push_back(x);
      oracle.push_back(testutil::triangle_inverse_cdf(gss::uniform_open01(rng)));
    }
  }
  const double p = testutil::ks_two_sample_pvalue(chain, oracle);
  std::ostringstream oss;
  oss << "KS p " << p << " (> 0.01) over " << steps << " steps";
  detail = oss.str();
  return p > 0.01;
}

// --- C5 / C6 / C7: benchmark trends at desk scale ---------------------------

double median_ess(const gss::Target& target, const gss::SamplerSpec& spec, long n_steps,
                  int repetitions, std::uint64_t seed_base) {
  std::vector<double> per_run;
  for (int run = 0; run < repetitions; ++run) {
    gss::Rng rng = gss::make_rng(gss::mix_seed(seed_base, run));
    const Point x0 = gss::random_benchmark_start(target.manifold, rng);
    const auto chain = gss::run_chain(spec, target, x0, n_steps, rng);
    per_run.push_back(gss::ess(gss::trace_statistic(chain, target)).ess);
  }
  return gss::summarize_repetitions(per_run, n_steps).median;
}

gss::SamplerSpec gss_spec(double w, int m) {
  gss::SamplerSpec spec;
  spec.kind = gss::SamplerKind::gss;
  spec.gss = {{w, m}, 10000};
  return spec;
}

bool criterion_width_trend(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  const gss::Target target = gss::make_benchmark_target(30, 2, gss::BenchmarkFamily::varying_n);
  const double wide = median_ess(target, gss_spec(5.0, 1), 20000, 10, 2005);
  const double narrow = median_ess(target, gss_spec(1.0, 1), 20000, 10, 3005);
  const double elapsed = seconds_since(t0);
  std::ostringstream oss;
  oss << "median ess w=5: " << wide << ", w=1: " << narrow << ", ratio " << wide / narrow
      << " (>= 3), " << elapsed << " s (< 600)";
  detail = oss.str();
  return wide >= 3.0 * narrow && elapsed < 600.0;
}

bool criterion_anisotropy_trend(std::string& detail) {
  const gss::Target target =
      gss::make_benchmark_target(30, 2, gss::BenchmarkFamily::anisotropy, 100.0);
  const double slice = median_ess(target, gss_spec(5.0, 1), 20000, 10, 2006);
  gss::SamplerSpec rmh;
  rmh.kind = gss::SamplerKind::rmh;
  rmh.step_size = 0.01;
  const double walk = median_ess(target, rmh, 20000, 10, 3006);
  std::ostringstream oss;
  oss << "median ess gss(w=5): " << slice << ", adaptive rmh: " << walk << " (gss higher)";
  detail = oss.str();
  return slice > walk;
}

bool criterion_budget_robustness(std::string& detail) {
  const gss::Target target =
      gss::make_benchmark_target(3, 2, gss::BenchmarkFamily::grassmann_variance, 100.0);
  const double narrow_deep = median_ess(target, gss_spec(1.0, 10), 20000, 10, 2007);
  const double wide_shallow = median_ess(target, gss_spec(7.0, 1), 20000, 10, 3007);
  const double ratio = narrow_deep / wide_shallow;
  std::ostringstream oss;
  oss << "median ess (w=1, m=10): " << narrow_deep << ", (w=7, m=1): " << wide_shallow
      << ", ratio " << ratio << " (within [0.5, 2])";
  detail = oss.str();
  return ratio >= 0.5 && ratio <= 2.0;
}

// --- C8: numerical kernel suite ---------------------------------------------

bool criterion_numerical_kernels(std::string& detail) {
  gss::Rng rng = gss::make_rng(1008);
  double expm_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Matrix s = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const double v = gss::uniform_real(rng, -1.0, 1.0);
        s(i, j) = v;
        s(j, i) = -v;
      }
    Matrix series = Matrix::Identity(4, 4);
    Matrix power = Matrix::Identity(4, 4);
    for (int j = 1; j <= 30; ++j) {
      power = (power * s / static_cast<double>(j)).eval();
      series += power;
    }
    expm_err = std::max(expm_err, (gss::expm_skew(s) - series).cwiseAbs().maxCoeff());
  }

  double qr_err = 0.0;
  double svd_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Matrix a(6, 3);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = gss::standard_normal(rng);
    const auto qr = gss::compact_qr(a);
    qr_err = std::max(qr_err, (qr.q * qr.r - a).cwiseAbs().maxCoeff());
    const auto svd = gss::compact_svd(a);
    svd_err = std::max(
        svd_err,
        (svd.u * svd.singular_values.asDiagonal() * svd.v.transpose() - a).cwiseAbs().maxCoeff());
  }

  double grad_err = 0.0;
  {
    Vector mu = Vector::Zero(4);
    mu(0) = 1.0;
    const gss::Target targets[] = {
        gss::make_benchmark_target(6, 2, gss::BenchmarkFamily::varying_n),
        gss::make_benchmark_target(5, 2, gss::BenchmarkFamily::grassmann_variance, 3.0),
        gss::make_vmf_sphere_target(mu, 2.5)};
    for (const gss::Target& target : targets) {
      for (int trial = 0; trial < 50; ++trial) {
        const Point x = testutil::random_point(target.manifold, rng);
        grad_err = std::max(grad_err, testutil::max_gradient_relative_error(target, x, rng, 3));
      }
    }
  }

  std::vector<double> ar(100000);
  double state = 0.0;
  for (double& v : ar) {
    state = 0.5 * state + gss::standard_normal(rng);
    v = state;
  }
  const double ess_fraction = gss::ess(ar).ess / static_cast<double>(ar.size());

  std::ostringstream oss;
  oss << "expm " << expm_err << " (<= 1e-9), qr " << qr_err << ", svd " << svd_err
      << " (<= 1e-10), grad " << grad_err << " (<= 1e-4), ar(1) ess/n " << ess_fraction
      << " (in [0.30, 0.37])";
  detail = oss.str();
  return expm_err <= 1e-9 && qr_err <= 1e-10 && svd_err <= 1e-10 && grad_err <= 1e-4 &&
         ess_fraction >= 0.30 && ess_fraction <= 0.37;
}

// --- C9: experiment determinism ----------------------------------------------

bool criterion_determinism(std::string& detail) {
  const char* config_template = R"({
    "manifold": {"kind": "stiefel", "n": 6, "k": 2},
    "target": {"family": "varying_n"},
    "sampler": {"name": "gss", "w": [1.0, 2.0]},
    "n_steps": 500,
    "n_repetitions": 3,
    "master_seed": 42,
    "output_path": "PATH"
  })";
  auto run_to = [&](const std::string& path) {
    std::string text = config_template;
    text.replace(text.find("PATH"), 4, path);
    gss::RunOptions opts;
    opts.quiet = true;
    gss::run_experiment(gss::parse_config_text(text, "acceptance"), opts);
  };
  run_to("/tmp/gss_acceptance_a.csv");
  run_to("/tmp/gss_acceptance_b.csv");

  auto rows_without_wall_time = [](const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::istringstream cell_stream(line);
      std::string cell;
      while (std::getline(cell_stream, cell, ',')) cells.push_back(cell);
      std::string kept;
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (i != 12) kept += cells[i] + ",";
      rows.push_back(kept);
    }
    return rows;
  };
  const auto rows_a = rows_without_wall_time("/tmp/gss_acceptance_a.csv");
  const auto rows_b = rows_without_wall_time("/tmp/gss_acceptance_b.csv");
  const bool ok = !rows_a.empty() && rows_a == rows_b;
  std::ostringstream oss;
  oss << rows_a.size() << " rows, byte-identical without the wall-time column: "
      << (ok ? "yes" : "no");
  detail = oss.str();
  return ok;
}

const Criterion kCriteria[] = {
    {1, "stepping-out / shrinkage law suite", criterion_lemma_suite},
    {2, "geodesic invariant suite", criterion_geodesic_invariants},
    {3, "gss reversibility and invariance on the sphere", criterion_gss_sphere},
    {4, "idealized 1-d slice sampler equivalence", criterion_ideal_slice},
    {5, "bracket width ess trend (stiefel)", criterion_width_trend},
    {6, "anisotropy ess ordering vs adaptive rmh", criterion_anisotropy_trend},
    {7, "stepping budget robustness (grassmann)", criterion_budget_robustness},
    {8, "numerical kernel suite", criterion_numerical_kernels},
    {9, "experiment determinism", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (const Criterion& criterion : kCriteria) {
    if (only != 0 && criterion.number != only) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[acceptance] C%d %s: %s (%s)\n", criterion.number, criterion.name,
                ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
  return failures;
}
