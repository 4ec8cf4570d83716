#pragma once

#include <string>

#include <json.hpp>

#include "fpls/solver.hpp"

namespace fpls {

using ordered_json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Weight families: constant value, sin(k*pi*x_hat) with x_hat the first
/// axis rescaled to [0,1], a two-level step in x_hat, or a grid-function
/// file.
struct WeightSpec {
  enum class Kind { Const, Sin, Step, File };
  Kind kind = Kind::Const;
  double value = 1.0;           // Const
  int k = 1;                    // Sin
  double amp = 1.0;             // Sin
  double split = 0.5;           // Step: x_hat < split -> left, else right
  double left = 1.0;
  double right = -1.0;
  std::string path;             // File
};

enum class BranchMode { Plus, Minus, Both };

struct RunConfig {
  int dim = 1;
  std::vector<std::array<double, 2>> bounds{{-1.0, 1.0}};
  int nodes_per_axis = 64;
  ProblemParams params;
  WeightSpec wf, wg, wh;
  SolverConfig solver;
  BranchMode branch = BranchMode::Both;
  std::string output = "out";
};

/// Parses and validates a JSON config document. Unknown keys are
/// rejected; all constraint violations are reported together.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

ordered_json config_to_json(const RunConfig& cfg);

/// Samples the weight families at the grid nodes; h is renormalized to
/// sup-norm 1 (error when h vanishes identically).
WeightSet build_weights(const RunConfig& cfg, const GridPtr& grid);

ordered_json thresholds_to_json(const ThresholdReport& th);
ordered_json report_to_json(const RunConfig& cfg, const SolveReport& rep);

std::string classification_name(Classification c);
std::string branch_name(Branch b);

void write_state_file(const std::string& path, const StatePair& z);
StatePair read_state_file(const std::string& path);

}  // namespace fpls
