#pragma once

#include <filesystem>
#include <iosfwd>

#include "config.hpp"

namespace coupled::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitConfig = 3;

/// Runs one experiment, writing artifacts into cfg.output_dir. Errors are
/// reported as one-line JSON on `err`; the return value is the exit status.
int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// One-line JSON diagnostic: {"error": category, "message": text}.
void report_error(std::ostream& err, const std::string& category, const std::string& message);

}  // namespace coupled::cli
