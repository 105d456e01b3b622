// Command-line front end. Links only the C API.
//
//   degwave run <config>        run the experiment, exit 0 / 2 (gate) / 1 (error)
//   degwave constants <config>  print the constants of the coeff.* keys
//
// OUT_DIR in the environment overrides out.dir.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "degwave/degwave.h"

namespace {

void print_line(const char* line, void*) { std::printf("%s\n", line); }

int exit_code(dw_status status) {
  if (status == DW_OK) return 0;
  if (status == DW_GATE_FAILED) {
    std::fprintf(stderr, "gate failed: %s\n", dw_last_error());
    return 2;
  }
  std::fprintf(stderr, "error (%s): %s\n", dw_status_name(status), dw_last_error());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate wave equation lab: observability, multiplier identities, HUM control"};
  app.set_version_flag("--version", std::string(dw_version()));
  app.require_subcommand(1);

  std::string run_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", run_path, "Experiment config (key = value lines)")->required();

  std::string constants_path;
  auto* constants = app.add_subcommand("constants", "Print K, M, T0 and the inequality constants");
  constants->add_option("config", constants_path, "Experiment config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run) {
    const char* out_dir = std::getenv("OUT_DIR");
    return exit_code(dw_run_config(run_path.c_str(), out_dir, print_line, nullptr));
  }
  return exit_code(dw_print_constants(constants_path.c_str(), print_line, nullptr));
}
