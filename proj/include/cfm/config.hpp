#pragma once

#include <istream>
#include <string>
#include <vector>

#include "cfm/types.hpp"

namespace cfm {

/// Experiment settings read from a `key = value` file.
struct RunConfig {
  std::string problem = "circle";
  std::string name;  // output file stem, defaults to <problem>_o<order>
  int order = 4;
  int degree = 3;
  std::vector<int> cells = {20, 28, 40, 52, 72, 96};  // h = 1 / cells
  double cfl = 0.5;
  double final_time = 0.5;
  std::string output_dir = "output";
  std::vector<double> snapshot_times;
  bool corrections = true;
  bool divergence_corrections = true;
  Physics physics;

  std::string stem() const { return name.empty() ? problem + "_o" + std::to_string(order) : name; }
};

/// Environment variable that overrides `output_dir`.
inline constexpr const char* kOutputDirEnv = "CFM_OUTPUT_DIR";

/// Throws Error(Config) naming the source, line and key of the first bad entry.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Applies the output directory override when the variable is set and non-empty.
void apply_environment(RunConfig& cfg);

}  // namespace cfm
