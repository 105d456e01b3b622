#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "problem.hpp"

namespace degwave {

using MessageSink = std::function<void(const std::string&)>;

struct RunOutcome {
  std::string experiment;
  bool gate_passed = false;
  /// Measured value against threshold, one line per gate.
  std::vector<std::string> gate_lines;
  std::vector<std::filesystem::path> artifacts;
};

/// Profile from coeff.kind = power_law (coeff.K, coeff.h, coeff.c) or
/// tabulated (coeff.table_path, resolved against the config's directory).
CoefficientProfile profile_from_config(const Config& cfg);

/// Runs the experiment named by `experiment` and writes its artifacts into
/// out.dir (or out_dir_override). Config problems throw Error(config_error);
/// gate failures are reported through RunOutcome.
RunOutcome run_experiment(const Config& cfg,
                          const std::optional<std::filesystem::path>& out_dir_override,
                          const MessageSink& sink);

/// Human-readable table of every constant derived from the coeff.* keys; the
/// inequality constants are included when time.T is present.
std::string constants_table(const Config& cfg);

}  // namespace degwave
