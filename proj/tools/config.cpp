#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace coupled::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  return j;
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("'" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

std::size_t get_count(const json& obj, const char* key, std::size_t fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError("'" + std::string(key) + "' in " + where + " must be a non-negative integer");
  return v.get<std::size_t>();
}

std::uint64_t get_seed(const json& obj, const char* key, std::uint64_t fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ConfigError("'" + std::string(key) + "' in " + where + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError("'" + std::string(key) + "' in " + where + " must be a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const char* key, bool fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError("'" + std::string(key) + "' in " + where + " must be true or false");
  return v.get<bool>();
}

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::averaged, Mode::online, Mode::stability, Mode::derivcheck})
    if (s == to_string(m)) return m;
  throw ConfigError("unknown mode '" + s + "' (expected averaged, online, stability or derivcheck)");
}

Problem parse_problem(const std::string& s) {
  if (s == "pca") return Problem::pca;
  if (s == "svd") return Problem::svd;
  throw ConfigError("unknown problem '" + s + "' (expected pca or svd)");
}

MatrixSource parse_matrix(const json& j, std::uint64_t default_seed, const std::filesystem::path& base_dir) {
  require_object(j, "'matrix'");
  reject_unknown(j, {"spectrum", "rows", "cols", "seed", "csv"}, "'matrix'");
  MatrixSource src;
  src.seed = get_seed(j, "seed", default_seed, "'matrix'");
  if (j.contains("csv")) {
    if (j.contains("spectrum") || j.contains("rows") || j.contains("cols"))
      throw ConfigError("'matrix' takes either 'csv' or 'spectrum' (with optional rows/cols), not both");
    std::filesystem::path p = get_string(j, "csv", "", "'matrix'");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    if (!std::filesystem::exists(p)) throw ConfigError("matrix file '" + p.string() + "' does not exist");
    src.csv = p;
    return src;
  }
  if (!j.contains("spectrum")) throw ConfigError("'matrix' needs 'spectrum' or 'csv'");
  const json& spec = j.at("spectrum");
  if (!spec.is_array() || spec.empty()) throw ConfigError("'spectrum' must be a non-empty array of numbers");
  for (const auto& v : spec) {
    if (!v.is_number()) throw ConfigError("'spectrum' must be a non-empty array of numbers");
    src.spectrum.push_back(v.get<double>());
  }
  for (std::size_t k = 0; k < src.spectrum.size(); ++k) {
    const double x = src.spectrum[k];
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("'spectrum' values must be positive");
    if (k > 0 && !(src.spectrum[k - 1] - x >= 1e-6 * src.spectrum[k - 1]))
      throw ConfigError("'spectrum' must be strictly descending with relative gaps of at least 1e-6");
  }
  src.rows = get_count(j, "rows", 0, "'matrix'");
  src.cols = get_count(j, "cols", 0, "'matrix'");
  return src;
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::averaged: return "averaged";
    case Mode::online: return "online";
    case Mode::stability: return "stability";
    case Mode::derivcheck: return "derivcheck";
  }
  return "?";
}

std::string_view to_string(Problem p) { return p == Problem::pca ? "pca" : "svd"; }

PcaRuleKind ExperimentConfig::pca_kind() const { return parse_pca_kind(rule); }
SvdRuleKind ExperimentConfig::svd_kind() const { return parse_svd_kind(rule); }

ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  require_object(j, "configuration");
  reject_unknown(j,
                 {"mode", "problem", "rule", "matrix", "integrator", "schedule", "samples", "noise", "seed",
                  "output_dir", "report_wall_time", "triples", "derivcheck"},
                 "configuration");
  ExperimentConfig cfg;
  const std::string top = "configuration";
  if (!j.contains("mode")) throw ConfigError("missing required key 'mode'");
  cfg.mode = parse_mode(get_string(j, "mode", "", top));
  cfg.seed = get_seed(j, "seed", cfg.seed, top);
  cfg.output_dir = get_string(j, "output_dir", cfg.output_dir.string(), top);
  cfg.report_wall_time = get_bool(j, "report_wall_time", false, top);

  const bool needs_problem = cfg.mode == Mode::averaged || cfg.mode == Mode::online;
  if (cfg.mode == Mode::stability) {
    cfg.problem = Problem::svd;
    if (j.contains("problem") && get_string(j, "problem", "", top) != "svd")
      throw ConfigError("stability mode analyses the constant-sum SVD system; 'problem' must be svd");
    if (j.contains("rule") && parse_svd_kind(get_string(j, "rule", "", top)) != SvdRuleKind::SUM_MOD)
      throw ConfigError("stability mode analyses the SUM_MOD rule only");
    cfg.rule = "SUM_MOD";
  } else if (needs_problem) {
    if (!j.contains("problem")) throw ConfigError("missing required key 'problem' for mode " + std::string(to_string(cfg.mode)));
    cfg.problem = parse_problem(get_string(j, "problem", "", top));
    cfg.rule = get_string(j, "rule", "L2", top);
  } else {
    for (const char* k : {"problem", "rule", "matrix", "integrator", "schedule", "samples", "noise", "triples"})
      if (j.contains(k)) throw ConfigError("key '" + std::string(k) + "' is not used in derivcheck mode");
  }

  try {
    if (needs_problem || cfg.mode == Mode::stability) {
      if (cfg.problem == Problem::pca) {
        cfg.rule = std::string(to_string(cfg.pca_kind()));
      } else {
        SvdRuleKind k = cfg.svd_kind();
        cfg.rule = std::string(to_string(k));
        if (cfg.mode == Mode::online && k == SvdRuleKind::SUM_FULL)
          throw ConfigError("rule SUM_FULL has no online form (its mu terms need the full matrix); use SUM_MOD");
      }
    }
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }

  if (cfg.mode != Mode::derivcheck) {
    if (!j.contains("matrix")) throw ConfigError("missing required key 'matrix'");
    cfg.matrix = parse_matrix(j.at("matrix"), cfg.seed, base_dir);
  }

  if (j.contains("integrator")) {
    if (cfg.mode != Mode::averaged && cfg.mode != Mode::online)
      throw ConfigError("'integrator' is only used by averaged and online modes");
    const json& ij = require_object(j.at("integrator"), "'integrator'");
    reject_unknown(ij, {"dt", "steps", "method", "thin"}, "'integrator'");
    if (cfg.mode == Mode::online && (ij.contains("dt") || ij.contains("steps") || ij.contains("method")))
      throw ConfigError("online mode uses 'samples' and 'schedule'; only 'thin' is read from 'integrator'");
    cfg.integrator.dt = get_number(ij, "dt", cfg.integrator.dt, "'integrator'");
    cfg.integrator.steps = get_count(ij, "steps", cfg.integrator.steps, "'integrator'");
    cfg.integrator.thin = get_count(ij, "thin", cfg.integrator.thin, "'integrator'");
    std::string method = get_string(ij, "method", "rk4", "'integrator'");
    if (method == "rk4") cfg.integrator.method = Method::rk4;
    else if (method == "euler") cfg.integrator.method = Method::euler;
    else throw ConfigError("unknown integrator method '" + method + "' (expected rk4 or euler)");
  }
  if (!(cfg.integrator.dt > 0.0) || !std::isfinite(cfg.integrator.dt)) throw ConfigError("'dt' must be positive");
  if (cfg.integrator.steps == 0) throw ConfigError("'steps' must be positive");
  if (cfg.integrator.thin == 0) throw ConfigError("'thin' must be positive");

  if (j.contains("schedule") || j.contains("samples") || j.contains("noise")) {
    if (cfg.mode != Mode::online) throw ConfigError("'schedule', 'samples' and 'noise' are only used by online mode");
  }
  if (j.contains("schedule")) {
    const json& sj = require_object(j.at("schedule"), "'schedule'");
    reject_unknown(sj, {"kind", "gamma0", "t0"}, "'schedule'");
    std::string kind = get_string(sj, "kind", "inverse_time", "'schedule'");
    if (kind == "inverse_time") cfg.schedule.kind = RateSchedule::Kind::inverse_time;
    else if (kind == "constant") cfg.schedule.kind = RateSchedule::Kind::constant;
    else throw ConfigError("unknown schedule kind '" + kind + "' (expected inverse_time or constant)");
    cfg.schedule.gamma0 = get_number(sj, "gamma0", cfg.schedule.gamma0, "'schedule'");
    cfg.schedule.t0 = get_number(sj, "t0", cfg.schedule.t0, "'schedule'");
  }
  if (!(cfg.schedule.gamma0 > 0.0) || !std::isfinite(cfg.schedule.gamma0))
    throw ConfigError("'gamma0' must be positive");
  if (!(cfg.schedule.t0 > 0.0) || !std::isfinite(cfg.schedule.t0)) throw ConfigError("'t0' must be positive");
  cfg.samples = get_count(j, "samples", cfg.samples, top);
  if (cfg.samples == 0) throw ConfigError("'samples' must be positive");
  cfg.noise = get_number(j, "noise", cfg.noise, top);
  if (!(cfg.noise >= 0.0) || !std::isfinite(cfg.noise)) throw ConfigError("'noise' must be >= 0");
  if (cfg.noise > 0.0 && cfg.problem != Problem::svd) throw ConfigError("'noise' applies to svd problems only");

  if (j.contains("triples")) {
    if (cfg.mode != Mode::stability) throw ConfigError("'triples' is only used by stability mode");
    const json& t = j.at("triples");
    if (!t.is_array()) throw ConfigError("'triples' must be an array of 1-based indices");
    for (const auto& v : t) {
      if (!v.is_number_integer() || v.get<long long>() < 1)
        throw ConfigError("'triples' must be an array of 1-based indices");
      cfg.triples.push_back(v.get<std::size_t>());
    }
  }

  if (j.contains("derivcheck")) {
    if (cfg.mode != Mode::derivcheck) throw ConfigError("'derivcheck' is only used by derivcheck mode");
    const json& dj = require_object(j.at("derivcheck"), "'derivcheck'");
    reject_unknown(dj, {"samples", "max_dim"}, "'derivcheck'");
    cfg.derivcheck_samples = get_count(dj, "samples", cfg.derivcheck_samples, "'derivcheck'");
    cfg.derivcheck_max_dim = get_count(dj, "max_dim", cfg.derivcheck_max_dim, "'derivcheck'");
    if (cfg.derivcheck_samples == 0) throw ConfigError("'derivcheck.samples' must be positive");
    if (cfg.derivcheck_max_dim < 2) throw ConfigError("'derivcheck.max_dim' must be at least 2");
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
  return parse_config(j, path.parent_path());
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["mode"] = to_string(cfg.mode);
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir.string();
  j["report_wall_time"] = cfg.report_wall_time;
  if (cfg.mode == Mode::derivcheck) {
    j["derivcheck"] = {{"samples", cfg.derivcheck_samples}, {"max_dim", cfg.derivcheck_max_dim}};
    return j;
  }
  j["problem"] = to_string(cfg.problem);
  j["rule"] = cfg.rule;
  json m;
  m["seed"] = cfg.matrix.seed;
  if (cfg.matrix.csv) {
    m["csv"] = cfg.matrix.csv->string();
  } else {
    m["spectrum"] = cfg.matrix.spectrum;
    if (cfg.matrix.rows) m["rows"] = cfg.matrix.rows;
    if (cfg.matrix.cols) m["cols"] = cfg.matrix.cols;
  }
  j["matrix"] = m;
  if (cfg.mode == Mode::averaged) {
    j["integrator"] = {{"dt", cfg.integrator.dt},
                       {"steps", cfg.integrator.steps},
                       {"method", cfg.integrator.method == Method::rk4 ? "rk4" : "euler"},
                       {"thin", cfg.integrator.thin}};
  } else if (cfg.mode == Mode::online) {
    j["integrator"] = {{"thin", cfg.integrator.thin}};
    j["schedule"] = {{"kind", cfg.schedule.kind == RateSchedule::Kind::constant ? "constant" : "inverse_time"},
                     {"gamma0", cfg.schedule.gamma0},
                     {"t0", cfg.schedule.t0}};
    j["samples"] = cfg.samples;
    j["noise"] = cfg.noise;
  } else if (cfg.mode == Mode::stability) {
    j["triples"] = cfg.triples;
  }
  return j;
}

std::string config_reference() {
  return R"(Configuration keys (JSON object, unknown keys are rejected):
  mode              averaged | online | stability | derivcheck (required)
  problem           pca | svd (required for averaged/online; stability implies svd)
  rule              pca: L2 | L2_ALA | SUM_EXACT | SUM_MOD; svd: L2 | L2_SIMPLE | SUM_FULL | SUM_MOD
                    (default L2; stability always uses SUM_MOD; SUM_FULL is not available online)
  matrix            {"spectrum": [descending positive values], "rows": m, "cols": n, "seed": s}
                    or {"csv": "path"} (relative to the config file). rows/cols default to the
                    spectrum length; seed defaults to the top-level seed.
  integrator        {"dt": 0.05, "steps": 10000, "method": "rk4" | "euler", "thin": 100}
                    (online mode reads only "thin")
  schedule          {"kind": "inverse_time" | "constant", "gamma0": 0.05, "t0": 100}   (online)
  samples           100000   number of online updates
  noise             0        svd online: y = A x + noise * g
  triples           []       stability: 1-based triple indices, empty for all
  derivcheck        {"samples": 100, "max_dim": 8}
  seed              1        seeds the matrix generator, initial state and sample stream
  output_dir        "out"    overridden by --out
  report_wall_time  false    add wall_time_s to summary.json (breaks byte-identical output)
)";
}

}  // namespace coupled::cli
