#pragma once

#include "minper/certify.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace minper {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Exit code contract shared by the library pipelines and the CLI.
//   0  solve succeeded and the certificate is green
//   1  usage or configuration error (no document written)
//   2  solver finished but certification failed
//   3  hypothesis checks failed (report still written)
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNotCertified = 2,
  kExitConditionsFailed = 3,
};

struct RunConfig {
  std::string mode;  // solve_direct, solve_dual, check_conditions, fenchel_table,
                     // certify, sweep
  std::string model_kind;  // potential or hamiltonian
  std::string model_name;
  std::map<std::string, double> model_params;
  double period = 0.0;
  int dimension = 0;
  SymmetryClass symmetry = SymmetryClass::E1;
  int num_modes = 0;
  SolverConfig solver;
  int infmax_rays = 50;
  bool force = false;
  double tol_cone = 1e-10;
  std::vector<double> periods;      // sweep
  std::string candidate_document;   // certify
  std::string out_dir = ".";
  std::string document_name = "result.json";
  std::string trajectory_name = "trajectory.csv";
  std::string plot_name = "orbit.svg";

  nlohmann::json echo() const;  // resolved configuration, reparseable
};

// Parses and validates a configuration object. Unknown keys are rejected;
// missing required keys throw std::invalid_argument.
RunConfig parse_config(const nlohmann::json& j);

struct PipelineResult {
  int exit_code = kExitUsage;
  nlohmann::json document;
};

// Dispatches on config.mode. Throws std::invalid_argument for config errors
// (the CLI maps those to exit 1); solver/certification outcomes land in the
// exit code and document instead.
PipelineResult run_pipeline(const RunConfig& config);

// Writes the result document, the trajectory table and the plot into
// config.out_dir. Plot emission is best effort: failures downgrade to a
// warning inside the document rather than an error.
void emit_outputs(const RunConfig& config, PipelineResult& result);

// Serialization used for the determinism contract: the document minus the
// timing fields.
std::string document_fingerprint(const nlohmann::json& document);

}  // namespace minper
