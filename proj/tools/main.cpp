#include <iostream>

#include "CLI11.hpp"
#include "config.hpp"
#include "runner.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

}  // namespace

int main(int argc, char** argv) {
  using namespace coupled::cli;

  CLI::App app{"Coupled PCA/SVD learning rules: experiment runner"};
  app.footer(config_reference());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config,-c", config_path, "JSON config file")->required();
  run->add_option("--out,-o", out_dir, "Output directory (overrides output_dir)");

  auto* validate = app.add_subcommand("validate", "Parse and check a config file without running it");
  validate->add_option("--config,-c", config_path, "JSON config file")->required();

  app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (app.got_subcommand("version")) {
    std::cout << "coupled " << kVersion << '\n';
    return kExitOk;
  }

  ExperimentConfig cfg;
  try {
    cfg = parse_config_file(config_path);
  } catch (const ConfigError& e) {
    report_error(std::cerr, e.category(), e.what());
    return kExitConfig;
  }
  if (app.got_subcommand("validate")) {
    std::cout << to_json(cfg).dump(2) << '\n';
    return kExitOk;
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  return run_experiment(cfg, std::cout, std::cerr);
}
