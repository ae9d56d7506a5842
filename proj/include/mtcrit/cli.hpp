#pragma once
// Batch front-end: subcommands read a JSON scenario and write JSON reports and CSV curves.
// Exit codes: 0 ok, 1 error, 2 inconclusive verdict.

#include <string>

#include "mtcrit/io.hpp"

namespace mtc {

struct CliOptions {
  std::string config;
  std::string out = ".";
  int jobs = 0;
  unsigned seed = 1;
  double tolerance_scale = 1.0;
};

int cmd_criterion(const Json& cfg, const CliOptions& opt);
int cmd_profiles(const Json& cfg, const CliOptions& opt);
int cmd_bubble(const Json& cfg, const CliOptions& opt);
int cmd_extremal(const Json& cfg, const CliOptions& opt);
int cmd_verify(const Json& cfg, const CliOptions& opt);

int run_cli(int argc, char** argv);

}  // namespace mtc
