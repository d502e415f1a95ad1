#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace lcc {

enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitUsage = 2 };

struct RunConfig {
  std::string command;

  // instance source: either `in` or a generator
  std::string in;
  std::string kind = "hadamard";
  std::size_t n = 0;
  std::optional<double> delta; // generator density, or corruption fraction for ldc-demo

  // code parameters
  unsigned k = 12;
  unsigned b = 3;
  unsigned blocks = 1;
  double tau = 1.0 / 6;

  std::optional<std::uint64_t> seed;
  std::size_t trials = 100;
  double c_factor = 64;
  std::size_t max_vc = 8;
  std::string inner = "hadamard";

  std::string out;
  std::string csv;
  bool emit_bounds = false;
};

int cmd_gen(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_normal_form(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_seed_search(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_decode(const RunConfig &cfg, std::ostream &out, std::ostream &err);
int cmd_ldc_demo(const RunConfig &cfg, std::ostream &out, std::ostream &err);

/// Dispatches on cfg.command and maps exceptions to exit codes.
int run_command(const RunConfig &cfg, std::ostream &out, std::ostream &err);

/// Full command-line entry point.
int lcc_lab_main(int argc, char **argv);

} // namespace lcc
