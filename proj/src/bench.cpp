#include "gss/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

namespace gss {

const char* const kCsvHeader =
    "sampler,manifold,n,k,family,lambda,w,m,step,run,n_steps,ess,wall_time_s,"
    "mean_shrink_attempts,superefficient_flag";

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_time(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& scope) {
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return item.key() == k; }) == allowed.end())
      throw config_error("unknown key \"" + item.key() + "\" in " + scope);
  }
}

const json& require_key(const json& obj, const char* key, const std::string& scope) {
  auto it = obj.find(key);
  if (it == obj.end()) throw config_error("missing key \"" + std::string(key) + "\" in " + scope);
  return *it;
}

std::vector<double> double_list(const json& v, const std::string& name) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array() && !v.empty()) {
    for (const auto& e : v) {
      if (!e.is_number()) throw config_error("key \"" + name + "\" must hold numbers");
      out.push_back(e.get<double>());
    }
  } else {
    throw config_error("key \"" + name + "\" must be a number or a nonempty list of numbers");
  }
  return out;
}

std::vector<int> int_list(const json& v, const std::string& name) {
  std::vector<int> out;
  for (double d : double_list(v, name)) {
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d) throw config_error("key \"" + name + "\" must hold integers");
    out.push_back(i);
  }
  return out;
}

// One resolved sweep point.
struct Variant {
  double lambda = 1.0;
  double w = 1.0;
  int m = 1;
  double h_a = 0.01;
  double h = 0.1;
};

bool sampler_uses_stepout(const std::string& s) { return s == "gss"; }

SamplerSpec make_spec(const ExperimentConfig& cfg, const Variant& v) {
  SamplerSpec spec;
  if (cfg.sampler == "gss") {
    spec.kind = SamplerKind::gss;
    spec.gss.step_out = {v.w, v.m};
    spec.gss.max_shrink_attempts = cfg.max_shrink_attempts;
  } else if (cfg.sampler == "rmh") {
    spec.kind = SamplerKind::rmh;
    spec.step_size = v.h_a;
  } else if (cfg.sampler == "geormh") {
    spec.kind = SamplerKind::geormh;
    spec.step_size = v.h_a;
  } else if (cfg.sampler == "geomala") {
    spec.kind = SamplerKind::geomala;
    spec.step_size = v.h;
    spec.adapt = false;
  } else {
    throw config_error("unknown sampler \"" + cfg.sampler + "\"");
  }
  return spec;
}

Manifold make_manifold(const ExperimentConfig& cfg) {
  if (cfg.manifold_kind == "sphere") return Manifold::sphere(cfg.n);
  if (cfg.manifold_kind == "stiefel") return Manifold::stiefel(cfg.n, cfg.k);
  if (cfg.manifold_kind == "grassmann") return Manifold::grassmann(cfg.n, cfg.k);
  throw config_error("unknown manifold kind \"" + cfg.manifold_kind + "\"");
}

Target make_target(const ExperimentConfig& cfg, double lambda) {
  if (cfg.family == "varying_n")
    return make_benchmark_target(cfg.n, cfg.k, BenchmarkFamily::varying_n, lambda);
  if (cfg.family == "varying_k")
    return make_benchmark_target(cfg.n, cfg.k, BenchmarkFamily::varying_k, lambda);
  if (cfg.family == "anisotropy")
    return make_benchmark_target(cfg.n, cfg.k, BenchmarkFamily::anisotropy, lambda);
  if (cfg.family == "grassmann_variance")
    return make_benchmark_target(cfg.n, cfg.k, BenchmarkFamily::grassmann_variance, lambda);
  if (cfg.family == "sphere_vmf") {
    Vector mu = Vector::Zero(cfg.n + 1);
    mu(0) = 1.0;
    return make_vmf_sphere_target(std::move(mu), lambda);
  }
  throw config_error("unknown target family \"" + cfg.family + "\"");
}

void validate(ExperimentConfig& cfg) {
  const bool stiefel_family = cfg.family == "varying_n" || cfg.family == "varying_k" ||
                              cfg.family == "anisotropy";
  if (stiefel_family && cfg.manifold_kind != "stiefel")
    throw config_error("family \"" + cfg.family + "\" requires manifold kind \"stiefel\"");
  if (cfg.family == "grassmann_variance" && cfg.manifold_kind != "grassmann")
    throw config_error("family \"grassmann_variance\" requires manifold kind \"grassmann\"");
  if (cfg.family == "sphere_vmf" && cfg.manifold_kind != "sphere")
    throw config_error("family \"sphere_vmf\" requires manifold kind \"sphere\"");
  if (cfg.manifold_kind == "sphere" && cfg.k != 1)
    throw config_error("sphere manifolds take k = 1");
  if (cfg.sampler == "rmh" && cfg.manifold_kind != "stiefel")
    throw config_error("sampler \"rmh\" is defined on the Stiefel manifold only");
  if (cfg.sampler == "geomala" && cfg.manifold_kind != "grassmann")
    throw config_error("sampler \"geomala\" is defined on the Grassmann manifold only");
  if (cfg.n_repetitions < 1) throw config_error("n_repetitions must be >= 1");
  if (cfg.n_steps < 10) throw config_error("n_steps must be >= 10");
  if (cfg.max_shrink_attempts < 1) throw config_error("max_shrink_attempts must be >= 1");
  for (double w : cfg.widths)
    if (!(w > 0.0)) throw config_error("w must be positive");
  for (int m : cfg.max_steps)
    if (m < 1) throw config_error("m must be >= 1");

  const bool lambda_used = cfg.family == "anisotropy" || cfg.family == "grassmann_variance" ||
                           cfg.family == "sphere_vmf";
  if (!lambda_used && (cfg.lambdas.size() != 1 || cfg.lambdas[0] != 1.0))
    cfg.warnings.push_back("lambda is ignored by family \"" + cfg.family + "\"");
  // Dry-build one manifold/target pair so shape errors surface as config errors.
  try {
    make_manifold(cfg);
    for (double lambda : cfg.lambdas) make_target(cfg, lambda);
  } catch (const contract_error& e) {
    throw config_error(e.what());
  }
}

struct RunRecord {
  std::uint64_t seed = 0;
  double ess_value = 0.0;
  bool superefficient = false;
  double wall_time_s = 0.0;
  double mean_shrink_attempts = 0.0;
  Point final_state{Manifold::euclidean(1), Matrix::Zero(1, 1)};
  std::exception_ptr error;
};

RunRecord execute_run(const ExperimentConfig& cfg, const Variant& variant, const Target& target,
                      std::uint64_t seed) {
  RunRecord record;
  record.seed = seed;
  try {
    Rng rng = make_rng(seed);
    const Point x0 = random_benchmark_start(target.manifold, rng);
    const SamplerSpec spec = make_spec(cfg, variant);
    const ChainResult chain = run_chain(spec, target, x0, cfg.n_steps, rng);
    const std::vector<double> trace = trace_statistic(chain, target);
    const EssResult result = ess(trace);
    record.ess_value = result.ess;
    record.superefficient = result.superefficient;
    record.wall_time_s = chain.wall_time_s;
    if (!chain.shrink_attempts.empty())
      record.mean_shrink_attempts =
          std::accumulate(chain.shrink_attempts.begin(), chain.shrink_attempts.end(), 0.0) /
          static_cast<double>(chain.shrink_attempts.size());
    record.final_state = chain.states.back();
  } catch (...) {
    record.error = std::current_exception();
  }
  return record;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& source_name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(source_name + ": " + e.what());
  }
  if (!root.is_object()) throw config_error(source_name + ": top level must be an object");

  ExperimentConfig cfg;
  check_keys(root,
             {"manifold", "target", "sampler", "n_steps", "n_repetitions", "master_seed",
              "output_path"},
             source_name);

  const json& manifold = require_key(root, "manifold", source_name);
  check_keys(manifold, {"kind", "n", "k"}, "manifold");
  cfg.manifold_kind = require_key(manifold, "kind", "manifold").get<std::string>();
  cfg.n = require_key(manifold, "n", "manifold").get<int>();
  cfg.k = manifold.value("k", 1);

  const json& target = require_key(root, "target", source_name);
  check_keys(target, {"family", "lambda"}, "target");
  cfg.family = require_key(target, "family", "target").get<std::string>();
  if (target.contains("lambda")) cfg.lambdas = double_list(target["lambda"], "lambda");

  const json& sampler = require_key(root, "sampler", source_name);
  check_keys(sampler, {"name", "w", "m", "h_a", "h", "max_shrink_attempts"}, "sampler");
  cfg.sampler = require_key(sampler, "name", "sampler").get<std::string>();
  if (sampler.contains("w")) cfg.widths = double_list(sampler["w"], "w");
  if (sampler.contains("m")) cfg.max_steps = int_list(sampler["m"], "m");
  if (sampler.contains("h_a")) cfg.mh_step_sizes = double_list(sampler["h_a"], "h_a");
  if (sampler.contains("h")) cfg.mala_step_sizes = double_list(sampler["h"], "h");
  if (sampler.contains("max_shrink_attempts"))
    cfg.max_shrink_attempts = sampler["max_shrink_attempts"].get<long>();

  if (!sampler_uses_stepout(cfg.sampler) && (sampler.contains("w") || sampler.contains("m")))
    cfg.warnings.push_back("w/m are ignored by sampler \"" + cfg.sampler + "\"");
  if (cfg.sampler != "rmh" && cfg.sampler != "geormh" && sampler.contains("h_a"))
    cfg.warnings.push_back("h_a is ignored by sampler \"" + cfg.sampler + "\"");
  if (cfg.sampler != "geomala" && sampler.contains("h"))
    cfg.warnings.push_back("h is ignored by sampler \"" + cfg.sampler + "\"");

  if (root.contains("n_steps")) cfg.n_steps = root["n_steps"].get<long>();
  if (root.contains("n_repetitions")) cfg.n_repetitions = root["n_repetitions"].get<int>();
  if (root.contains("master_seed")) cfg.master_seed = root["master_seed"].get<std::uint64_t>();
  if (root.contains("output_path")) cfg.output_path = root["output_path"].get<std::string>();

  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file \"" + path + "\"");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

nlohmann::json point_to_json(const Point& x) {
  json j;
  j["kind"] = to_string(x.manifold.kind());
  j["rows"] = x.manifold.rows();
  j["cols"] = x.manifold.cols();
  std::vector<double> data;
  data.reserve(x.value.size());
  for (int i = 0; i < x.value.rows(); ++i)
    for (int c = 0; c < x.value.cols(); ++c) data.push_back(x.value(i, c));
  j["data"] = std::move(data);
  return j;
}

Point point_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const std::vector<double> data = j.at("data").get<std::vector<double>>();
  if (static_cast<int>(data.size()) != rows * cols)
    throw config_error("point_from_json: data length does not match the shape");
  Manifold manifold = [&] {
    if (kind == "euclidean") return Manifold::euclidean(rows);
    if (kind == "sphere") return Manifold::sphere(rows - 1);
    if (kind == "stiefel") return Manifold::stiefel(rows, cols);
    if (kind == "grassmann") return Manifold::grassmann(rows, cols);
    throw config_error("point_from_json: unknown manifold kind \"" + kind + "\"");
  }();
  Matrix value(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) value(i, c) = data[static_cast<std::size_t>(i) * cols + c];
  return make_point(manifold, std::move(value));
}

void run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  // Sweep expansion in the fixed field order lambda, w, m, h_a, h; only the
  // fields the chosen sampler consumes contribute factors.
  std::vector<Variant> variants;
  const bool gss_sampler = cfg.sampler == "gss";
  const bool mh_sampler = cfg.sampler == "rmh" || cfg.sampler == "geormh";
  const bool mala_sampler = cfg.sampler == "geomala";
  for (double lambda : cfg.lambdas) {
    const std::vector<double> ws = gss_sampler ? cfg.widths : std::vector<double>{cfg.widths[0]};
    for (double w : ws) {
      const std::vector<int> ms = gss_sampler ? cfg.max_steps : std::vector<int>{cfg.max_steps[0]};
      for (int m : ms) {
        const std::vector<double> has =
            mh_sampler ? cfg.mh_step_sizes : std::vector<double>{cfg.mh_step_sizes[0]};
        for (double h_a : has) {
          const std::vector<double> hs =
              mala_sampler ? cfg.mala_step_sizes : std::vector<double>{cfg.mala_step_sizes[0]};
          for (double h : hs) variants.push_back({lambda, w, m, h_a, h});
        }
      }
    }
  }

  std::ofstream out(cfg.output_path);
  if (!out) throw config_error("cannot open output file \"" + cfg.output_path + "\"");
  out << kCsvHeader << "\n";

  json meta;
  {
    json echo;
    echo["manifold"] = {{"kind", cfg.manifold_kind}, {"n", cfg.n}, {"k", cfg.k}};
    echo["target"] = {{"family", cfg.family}, {"lambda", cfg.lambdas}};
    echo["sampler"] = {{"name", cfg.sampler},        {"w", cfg.widths},
                       {"m", cfg.max_steps},         {"h_a", cfg.mh_step_sizes},
                       {"h", cfg.mala_step_sizes},   {"max_shrink_attempts", cfg.max_shrink_attempts}};
    echo["n_steps"] = cfg.n_steps;
    echo["n_repetitions"] = cfg.n_repetitions;
    echo["master_seed"] = cfg.master_seed;
    echo["output_path"] = cfg.output_path;
    meta["config"] = std::move(echo);
    meta["build"] = __VERSION__;
    meta["warnings"] = cfg.warnings;
    meta["variants"] = json::array();
  }

  auto write_meta = [&] {
    std::ofstream meta_out(cfg.output_path + ".meta.json");
    if (meta_out) meta_out << meta.dump(2) << "\n";
  };

  const int workers = std::max(1, opts.workers);
  long global_row = 0;
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    const Variant& variant = variants[vi];
    const Target target = make_target(cfg, variant.lambda);
    std::vector<RunRecord> records(cfg.n_repetitions);
    std::vector<std::uint64_t> seeds(cfg.n_repetitions);
    for (int r = 0; r < cfg.n_repetitions; ++r)
      seeds[r] = mix_seed(cfg.master_seed, static_cast<std::uint64_t>(global_row + r));

    std::atomic<int> next_run{0};
    auto worker_loop = [&] {
      for (;;) {
        const int r = next_run.fetch_add(1);
        if (r >= cfg.n_repetitions) break;
        records[r] = execute_run(cfg, variant, target, seeds[r]);
      }
    };
    if (workers == 1 || cfg.n_repetitions == 1) {
      worker_loop();
    } else {
      std::vector<std::thread> pool;
      const int pool_size = std::min(workers, cfg.n_repetitions);
      pool.reserve(pool_size);
      for (int t = 0; t < pool_size; ++t) pool.emplace_back(worker_loop);
      for (auto& t : pool) t.join();
    }

    auto variant_prefix = [&](const std::string& run_label) {
      std::ostringstream row;
      row << cfg.sampler << ',' << cfg.manifold_kind << ',' << cfg.n << ',' << cfg.k << ','
          << cfg.family << ',' << fmt(variant.lambda) << ',';
      row << (gss_sampler ? fmt(variant.w) : std::string()) << ',';
      row << (gss_sampler ? std::to_string(variant.m) : std::string()) << ',';
      if (mh_sampler)
        row << fmt(variant.h_a);
      else if (mala_sampler)
        row << fmt(variant.h);
      row << ',' << run_label << ',' << cfg.n_steps << ',';
      return row.str();
    };

    json variant_meta;
    variant_meta["lambda"] = variant.lambda;
    if (gss_sampler) {
      variant_meta["w"] = variant.w;
      variant_meta["m"] = variant.m;
    }
    if (mh_sampler) variant_meta["h_a"] = variant.h_a;
    if (mala_sampler) variant_meta["h"] = variant.h;
    variant_meta["runs"] = json::array();

    std::vector<double> per_run_ess;
    double wall_total = 0.0;
    double shrink_total = 0.0;
    bool any_superefficient = false;
    for (int r = 0; r < cfg.n_repetitions; ++r) {
      const RunRecord& record = records[r];
      if (record.error) {
        write_meta();
        out.flush();
        std::rethrow_exception(record.error);
      }
      out << variant_prefix(std::to_string(r + 1)) << fmt(record.ess_value) << ','
          << fmt_time(record.wall_time_s) << ','
          << (gss_sampler ? fmt(record.mean_shrink_attempts) : std::string()) << ','
          << (record.superefficient ? '1' : '0') << "\n";
      per_run_ess.push_back(record.ess_value);
      wall_total += record.wall_time_s;
      shrink_total += record.mean_shrink_attempts;
      any_superefficient = any_superefficient || record.superefficient;

      json run_meta;
      run_meta["run"] = r + 1;
      run_meta["seed"] = record.seed;
      run_meta["ess"] = record.ess_value;
      run_meta["superefficient"] = record.superefficient;
      run_meta["wall_time_s"] = record.wall_time_s;
      run_meta["final_state"] = point_to_json(record.final_state);
      variant_meta["runs"].push_back(std::move(run_meta));
    }
    global_row += cfg.n_repetitions;

    const EssSummary summary = summarize_repetitions(per_run_ess, cfg.n_steps);
    out << variant_prefix("summary") << fmt(summary.median) << ',' << fmt_time(wall_total) << ','
        << (gss_sampler ? fmt(shrink_total / cfg.n_repetitions) : std::string()) << ','
        << (any_superefficient ? '1' : '0') << "\n";
    variant_meta["ess_summary"] = {{"min", summary.min},
                                   {"median", summary.median},
                                   {"max", summary.max},
                                   {"per_run", summary.per_run_ess},
                                   {"n_samples", summary.n_samples}};
    meta["variants"].push_back(std::move(variant_meta));

    if (!opts.quiet) {
      std::printf("[%s %s n=%d k=%d lambda=%g", cfg.sampler.c_str(), cfg.manifold_kind.c_str(),
                  cfg.n, cfg.k, variant.lambda);
      if (gss_sampler) std::printf(" w=%g m=%d", variant.w, variant.m);
      std::printf("] ess min/median/max = %.1f / %.1f / %.1f\n", summary.min, summary.median,
                  summary.max);
    }
  }
  out.flush();
  write_meta();
}

}  // namespace gss
