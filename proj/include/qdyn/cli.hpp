#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "qdyn/rational.hpp"

namespace qdyn {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitInvariant = 3,
  kExitIo = 4,
};

struct RunConfig {
  std::string command;
  long D = 5;
  int n = 3;
  Rational t_min{1, 10};
  Rational t_max{1, 4};
  Rational t_step{1, 200};
  std::optional<Rational> m1_bound;
  long denom_cap = 8;
  long i_extra = 0;
  long count = 10;  ///< rows for minima
  std::string out = "-";
  std::string manifest;
  bool perturb = false;
  unsigned long seed = 1;

  /// Throws ConfigError on t_min >= t_max, t_step <= 0, n < 0, ...
  void validate() const;
};

/// "a:b:c" -> (t_min, t_max, t_step).
void parse_grid(const std::string& spec, RunConfig& cfg);

int cmd_curve(const RunConfig& cfg, std::ostream& log);
int cmd_minima(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_partition_dump(const RunConfig& cfg, std::ostream& log);
int cmd_ik_dump(const RunConfig& cfg, std::ostream& log);
int cmd_sft_export(const RunConfig& cfg, std::ostream& log);

/// Parses argv, dispatches, and maps exceptions to exit codes.
int run_cli(int argc, char** argv);

}  // namespace qdyn
