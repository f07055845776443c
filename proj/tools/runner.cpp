#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include "coupled/criteria.hpp"
#include "coupled/generate.hpp"
#include "coupled/matrix_io.hpp"
#include "coupled/problems.hpp"
#include "coupled/stability.hpp"

namespace coupled::cli {

using nlohmann::json;

namespace {

// Sub-stream indices for seeds derived from the top-level seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kSampleStream = 2;
constexpr std::uint64_t kDerivStream = 3;

json to_json(const Vec& v) { return json(v.values()); }

json complex_list(const std::vector<Complex>& values) {
  json out = json::array();
  for (const auto& c : values) out.push_back({c.real(), c.imag()});
  return out;
}

json state_json(const PcaState& s) { return {{"w", to_json(s.w)}, {"lambda", s.lambda}}; }

json state_json(const SvdState& s) {
  json j = {{"u", to_json(s.u)}, {"v", to_json(s.v)}, {"sigma", s.sigma}};
  if (s.rho) j["rho"] = *s.rho;
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  os << j.dump(2) << '\n';
}

void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj) {
  std::ofstream os(dir / "trajectory.csv");
  if (!os) throw Error("cannot write '" + (dir / "trajectory.csv").string() + "'");
  traj.write_csv(os);
}

/// Matrix construction errors are configuration errors.
Mat build_matrix(const ExperimentConfig& cfg) {
  try {
    if (cfg.matrix.csv) return load_matrix(cfg.matrix.csv->string());
    if (cfg.problem == Problem::pca) {
      if (cfg.matrix.rows || cfg.matrix.cols) throw ConfigError("'rows'/'cols' apply to svd problems only");
      return make_spd(cfg.matrix.spectrum, cfg.matrix.seed);
    }
    const std::size_t k = cfg.matrix.spectrum.size();
    const std::size_t m = cfg.matrix.rows ? cfg.matrix.rows : k;
    const std::size_t n = cfg.matrix.cols ? cfg.matrix.cols : k;
    return make_cross(cfg.matrix.spectrum, m, n, cfg.matrix.seed);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("matrix: ") + e.what());
  }
}

template <typename Problem>
Problem make_problem(Mat a, decltype(std::declval<Problem>().kind()) kind) {
  try {
    return Problem(std::move(a), kind);
  } catch (const Error& e) {
    throw ConfigError(std::string("matrix: ") + e.what());
  }
}

struct Outcome {
  json summary;
  Trajectory trajectory;
  bool diverged = false;
  std::string failure;
  std::string failure_category;
};

template <typename Problem, typename Run>
Outcome execute(const Problem& problem, Run run) {
  Outcome o;
  try {
    o.trajectory = run();
  } catch (const DivergenceError& e) {
    o.trajectory = e.partial();
    o.diverged = true;
    o.failure = e.what();
    o.failure_category = e.category();
  } catch (const GuardedScalarError& e) {
    o.diverged = true;
    o.failure = e.what();
    o.failure_category = e.category();
  }
  o.trajectory.state_names = problem.state_names();
  return o;
}

void fill_pca_summary(json& s, const PcaProblem& p, const Trajectory& traj) {
  PcaState ref = p.stationary_point(0);
  s["oracle"] = state_json(ref);
  if (traj.records.empty()) return;
  const Record& r = traj.back();
  PcaState fin = PcaState::unpack(r.state);
  s["steps_completed"] = r.step;
  s["final"] = state_json(fin);
  s["final_residual"] = r.diag.residual;
  s["angle"] = r.diag.angle;
  s["scalar_error"] = std::abs(fin.lambda - ref.lambda);
}

void fill_svd_summary(json& s, const SvdProblem& p, const Trajectory& traj) {
  SvdState ref = p.stationary_point(0);
  s["oracle"] = state_json(ref);
  if (traj.records.empty()) return;
  const Record& r = traj.back();
  SvdState fin = p.unpack(r.state);
  s["steps_completed"] = r.step;
  s["final"] = state_json(fin);
  s["final_residual"] = r.diag.residual;
  s["angle"] = r.diag.angle;
  s["angle_u"] = unsigned_angle(fin.u, ref.u);
  s["angle_v"] = unsigned_angle(fin.v, ref.v);
  double err = std::abs(fin.sigma - ref.sigma);
  if (fin.rho) err = std::max(err, std::abs(*fin.rho - *ref.rho));
  s["scalar_error"] = err;
}

int finish_run(const ExperimentConfig& cfg, Outcome& o, std::ostream& out, std::ostream& err, double wall) {
  const auto& dir = cfg.output_dir;
  o.summary["status"] = o.diverged ? o.failure_category : "ok";
  if (o.diverged) o.summary["message"] = o.failure;
  o.summary["config"] = to_json(cfg);
  if (cfg.report_wall_time) o.summary["wall_time_s"] = wall;
  if (!o.trajectory.records.empty()) write_trajectory(dir, o.trajectory);
  write_json(dir / "summary.json", o.summary);
  if (o.diverged) {
    report_error(err, o.failure_category, o.failure);
    return kExitNumerical;
  }
  out << to_string(cfg.mode) << ' ' << to_string(cfg.problem) << ' ' << cfg.rule
      << ": residual " << o.summary["final_residual"].get<double>() << ", angle "
      << o.summary["angle"].get<double>() << " rad, wall time " << wall << " s\n";
  return kExitOk;
}

int run_averaged(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Mat a = build_matrix(cfg);
  const std::uint64_t init_seed = SplitMix64::derive(cfg.seed, kInitStream);
  Outcome o;
  if (cfg.problem == Problem::pca) {
    auto p = make_problem<PcaProblem>(std::move(a), cfg.pca_kind());
    Vec z0 = pca_default_init(p.kind(), p.matrix(), init_seed, false).pack();
    std::filesystem::create_directories(cfg.output_dir);
    o = execute(p, [&] { return integrate(p.as_field(), z0, cfg.integrator, p.as_probe()); });
    fill_pca_summary(o.summary, p, o.trajectory);
  } else {
    auto p = make_problem<SvdProblem>(std::move(a), cfg.svd_kind());
    Vec z0 = svd_default_init(p.kind(), p.matrix(), init_seed, false).pack();
    std::filesystem::create_directories(cfg.output_dir);
    o = execute(p, [&] { return integrate(p.as_field(), z0, cfg.integrator, p.as_probe()); });
    fill_svd_summary(o.summary, p, o.trajectory);
  }
  o.summary["mode"] = "averaged";
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return finish_run(cfg, o, out, err, wall);
}

int run_online(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Mat a = build_matrix(cfg);
  const std::uint64_t init_seed = SplitMix64::derive(cfg.seed, kInitStream);
  const std::uint64_t sample_seed = SplitMix64::derive(cfg.seed, kSampleStream);
  OnlineOptions opts{cfg.schedule, cfg.samples, cfg.integrator.thin};
  Outcome o;
  if (cfg.problem == Problem::pca) {
    auto p = make_problem<PcaProblem>(std::move(a), cfg.pca_kind());
    GaussianStream stream(p.matrix(), sample_seed);
    PcaState z0 = pca_default_init(p.kind(), p.matrix(), init_seed, true);
    std::filesystem::create_directories(cfg.output_dir);
    o = execute(p, [&] { return train_online(p.kind(), stream, z0, opts, p.as_probe()); });
    fill_pca_summary(o.summary, p, o.trajectory);
  } else {
    auto p = make_problem<SvdProblem>(std::move(a), cfg.svd_kind());
    PairStream stream(p.matrix(), sample_seed, cfg.noise);
    SvdState z0 = svd_default_init(p.kind(), p.matrix(), init_seed, true);
    std::filesystem::create_directories(cfg.output_dir);
    o = execute(p, [&] { return train_online(p.kind(), stream, z0, opts, p.as_probe()); });
    fill_svd_summary(o.summary, p, o.trajectory);
  }
  o.summary["mode"] = "online";
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return finish_run(cfg, o, out, err, wall);
}

int run_stability(const ExperimentConfig& cfg, std::ostream& out) {
  Mat a = build_matrix(cfg);
  const bool transposed = a.rows() < a.cols();
  if (transposed) a = a.transpose();
  std::vector<std::size_t> triples = cfg.triples;
  if (triples.empty())
    for (std::size_t i = 1; i <= a.cols(); ++i) triples.push_back(i);
  for (std::size_t i : triples)
    if (i > a.cols()) throw ConfigError("triple index " + std::to_string(i) + " exceeds min(rows, cols)");

  json reports = json::array();
  std::vector<StabilityReport> done;
  for (std::size_t i : triples) done.push_back(analyze_triple(a, i));
  std::filesystem::create_directories(cfg.output_dir);
  for (const auto& r : done) {
    json j;
    j["triple_index"] = r.triple_index;
    j["transposed"] = transposed;
    j["state"] = state_json(r.state);
    j["mu"] = r.mu;
    j["predicted"] = complex_list(r.predicted);
    j["triple_aligned"] = complex_list(r.aligned);
    j["numeric"] = complex_list(r.numeric);
    j["classification"] = to_string(r.classification);
    j["data_dependent"] = r.data_dependent;
    j["radicand"] = r.radicand;
    j["match_distance"] = r.match_distance;
    j["triple_aligned_match_distance"] = r.aligned_match_distance;
    j["jacobian_gap"] = r.jacobian_gap;
    j["sigma_rho_gap"] = r.sigma_rho_gap;
    reports.push_back(j);
    out << "triple " << r.triple_index << ": " << to_string(r.classification) << ", predicted match "
        << r.match_distance << ", triple-aligned match " << r.aligned_match_distance << '\n';
  }
  write_json(cfg.output_dir / "stability.json", reports);
  return kExitOk;
}

int run_derivcheck(const ExperimentConfig& cfg, std::ostream& out) {
  DerivativeCheck d =
      check_derivatives(cfg.derivcheck_samples, cfg.derivcheck_max_dim, SplitMix64::derive(cfg.seed, kDerivStream));
  json j;
  j["samples"] = d.samples;
  j["max_dim"] = cfg.derivcheck_max_dim;
  j["max_relative_error"] = {{"rayleigh_gradient", d.rayleigh_gradient},
                             {"unit_scalar_gradient", d.unit_scalar_gradient},
                             {"P_PCA1", d.p_pca1_gradient},
                             {"P_PCA2", d.p_pca2_gradient},
                             {"P_SVD1", d.p_svd1_gradient}};
  j["gradient_norm_at_principal"] = {
      {"P_PCA1", d.p_pca1_stationary}, {"P_PCA2", d.p_pca2_stationary}, {"P_SVD1", d.p_svd1_stationary}};
  j["config"] = to_json(cfg);
  std::filesystem::create_directories(cfg.output_dir);
  write_json(cfg.output_dir / "derivcheck.json", j);
  out << "derivcheck: rayleigh " << d.rayleigh_gradient << ", unit-scalar " << d.unit_scalar_gradient
      << ", criteria " << std::max({d.p_pca1_gradient, d.p_pca2_gradient, d.p_svd1_gradient}) << '\n';
  return kExitOk;
}

}  // namespace

void report_error(std::ostream& err, const std::string& category, const std::string& message) {
  err << json{{"error", category}, {"message", message}}.dump() << '\n';
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.mode) {
      case Mode::averaged: return run_averaged(cfg, out, err);
      case Mode::online: return run_online(cfg, out, err);
      case Mode::stability: return run_stability(cfg, out);
      case Mode::derivcheck: return run_derivcheck(cfg, out);
    }
  } catch (const ConfigError& e) {
    report_error(err, e.category(), e.what());
    return kExitConfig;
  } catch (const DivergenceError& e) {
    report_error(err, e.category(), e.what());
    return kExitNumerical;
  } catch (const GuardedScalarError& e) {
    report_error(err, e.category(), e.what());
    return kExitNumerical;
  } catch (const Error& e) {
    report_error(err, e.category(), e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace coupled::cli
