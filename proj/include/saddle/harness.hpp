#pragma once

#include "saddle/agm.hpp"
#include "saddle/inner.hpp"
#include "saddle/problem.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace saddle {

using Json = nlohmann::json;

// A config document that cannot be acted on: parse failure, unknown
// generator, inconsistent dimensions, missing files, bad sweep grids. The CLI
// maps this to exit code 1; every other completed-but-negative outcome
// (non-convergence, validation FAIL) maps to 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Least-squares line y = slope * x + intercept with the coefficient of
// determination of the fit.
struct AffineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

AffineFit fit_affine(const std::vector<double>& xs, const std::vector<double>& ys);

struct RunConfig {
  Json doc;
  std::string source_path;  // empty for documents parsed from text
  std::string name;         // config stem; names the default output directory
};

RunConfig parse_config_text(const std::string& text, const std::string& name = "inline");
RunConfig load_config(const std::string& path);

struct BuiltProblem {
  SaddleProblem problem;
  Vec x0;
  std::uint64_t seed = 0;
};

// Instantiates the problem section (bilinear generator). The seed drives all
// sampling so a config names one reproducible instance.
BuiltProblem build_problem(const RunConfig& cfg);

// Solver section -> outer method configuration, including the inner base
// algorithm (seeded from the problem's smoothness hint).
AgmConfig build_agm_config(const RunConfig& cfg, const SaddleProblem& p);

// report.output_dir, anchored at $SADDLEBENCH_OUTPUT_ROOT when set and the
// path is relative; defaults to runs/<config name>.
std::string resolve_output_dir(const RunConfig& cfg);

std::string trace_csv_header();
std::string trace_csv_rows(const SolverTrace& trace);

struct RunReport {
  Json document;
  SolverTrace trace;
  bool converged = false;
  std::string report_path;  // report.json
  std::string csv_path;     // trace.csv
};

// Full pipeline: build, solve, write trace.csv and report.json into the
// output directory. Same config + seed gives a byte-identical CSV; wall time
// lives only in the JSON document.
RunReport run_solve(const RunConfig& cfg);

// Constant validation: declared Holder constants, the uniform convexity lower
// bound, and (when the generator carries closed forms) the smoothness the
// reduced objective inherits from them.
ValidationReport run_validation(const RunConfig& cfg);

struct ScalingSummary {
  Json document;
  AffineFit fit;
  long successful_runs = 0;
  std::string summary_path;  // scaling.json
};

// Sweeps one parameter over a grid (>= 4 points) and fits the scaling law:
//   epsilon      log(outer iterations) vs log(1/epsilon), full solver runs
//   target_gap   restarts vs log2(1/target_gap), synthetic-inner generator
ScalingSummary run_scaling(const RunConfig& cfg, const std::string& parameter,
                           const std::vector<double>& grid);

// CLI entry points; return process exit codes: 0 success, 2 completed with a
// negative verdict, 1 unusable config or execution failure.
int cmd_solve(const std::string& config_path);
int cmd_validate(const std::string& config_path);
int cmd_scaling(const std::string& config_path, const std::string& parameter,
                const std::vector<double>& grid);

}  // namespace saddle
