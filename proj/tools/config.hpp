#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "coupled/dynamics.hpp"
#include "coupled/errors.hpp"
#include "coupled/rules_pca.hpp"
#include "coupled/rules_svd.hpp"
#include "json.hpp"

namespace coupled::cli {

/// Invalid or unreadable configuration (exit status 3).
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "config"; }
};

enum class Mode { averaged, online, stability, derivcheck };
enum class Problem { pca, svd };

/// Where the experiment matrix comes from: a generated spectrum or a CSV file.
struct MatrixSource {
  std::vector<double> spectrum;
  std::size_t rows = 0;  // svd only; defaults to the spectrum length
  std::size_t cols = 0;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> csv;
};

struct ExperimentConfig {
  Mode mode = Mode::averaged;
  Problem problem = Problem::pca;
  std::string rule = "L2";
  MatrixSource matrix;
  IntegratorOptions integrator{0.05, 10000, Method::rk4, 100};
  RateSchedule schedule;
  std::size_t samples = 100000;  // online updates
  double noise = 0.0;            // online svd: y = Ax + noise·g
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
  bool report_wall_time = false;
  std::vector<std::size_t> triples;  // stability; empty means all
  std::size_t derivcheck_samples = 100;
  std::size_t derivcheck_max_dim = 8;

  PcaRuleKind pca_kind() const;
  SvdRuleKind svd_kind() const;
};

/// Strict parse: unknown keys, wrong types and invalid combinations throw
/// ConfigError. Relative CSV paths resolve against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Config with every default filled in, as echoed into summary.json.
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Text for `--help`, listing every key and its default.
std::string config_reference();

std::string_view to_string(Mode m);
std::string_view to_string(Problem p);

}  // namespace coupled::cli
