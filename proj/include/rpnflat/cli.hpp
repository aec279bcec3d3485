#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rpnflat/schwartz_analysis.hpp"

namespace rpnflat::cli {

enum ExitCode : int { kOk = 0, kVerdictMismatch = 1, kConfigError = 2 };

/// Everything a CLI invocation can set. Defaults are the desk-scale budgets.
struct RunConfig {
  std::string subcommand;
  std::size_t dim = 1;
  std::string function;
  int source = 1;
  int target = 2;
  std::vector<double> point;
  std::vector<double> sphere_point;
  std::vector<double> base_point;
  int max_alpha = 3;
  int max_beta = 3;
  int order = 3;
  int max_weight = 3;
  std::vector<int> alpha;
  std::vector<int> beta;
  std::vector<double> radii{1.5, 3.0, 6.0, 12.0};
  std::size_t points_per_axis = 0;
  std::vector<double> range{-10.0, 10.0};
  std::vector<double> annulus;
  int levels = 20;
  int samples = 256;
  std::uint64_t seed = kDefaultSeed;
  double radius = 0.5;
  std::size_t base_points = 8;
  double spread = 2.0;
  Thresholds thresholds;
  std::vector<std::size_t> dims{2, 3, 5};
  std::size_t atlas_samples = 1000;
  std::size_t workers = 1;
  std::string output;
  std::string format = "json";
  bool check = false;
};

/// Executes one subcommand. Writes the report to config.output (atomically)
/// or to `out`; diagnostics go to `err`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (RPNFLAT_SEED supplies the default seed) and calls run().
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rpnflat::cli
