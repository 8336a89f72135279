#pragma once

#include "saddle/oracle.hpp"
#include "saddle/problem.hpp"
#include "saddle/prox.hpp"
#include "saddle/types.hpp"

#include <vector>

namespace saddle {

// How the per-iteration measure ||M_k (x_k - x_{k+1})|| enters the stopping
// test against epsilon: as the norm itself or as its square. The square is
// the default.
enum class StationarityConvention { norm, norm_squared };

struct AgmConfig {
  double epsilon = 1e-3;
  double l0 = 1.0;
  long max_outer_iterations = 200'000;
  int max_doublings_per_iteration = 60;
  StationarityConvention stationarity_convention = StationarityConvention::norm_squared;
  OracleSettings oracle;
};

struct IterationRecord {
  long k = 0;
  double m_k = 0.0;       // accepted curvature estimate
  int doublings = 0;      // rejected trials before acceptance
  double delta_ck = 0.0;  // oracle accuracy of the accepted trial
  double step_norm = 0.0;
  double stationarity_measure = 0.0;  // per the configured convention
  double oracle_value = 0.0;          // accepted value at x_k
  double z_value = 0.0;               // accepted value at the step target x_{k+1}
  long inner_iterations = 0;          // summed over every oracle call this iteration
  long first_order_calls = 0;
  Vec x;  // x_k
  Vec z;  // x_{k+1}
};

struct SolverTrace {
  std::vector<IterationRecord> records;
  long best_index = -1;  // iteration attaining the smallest measure
  bool converged = false;
  Vec output;  // the step target of the best iteration
  double best_measure = kNoBound;
  long total_inner_iterations = 0;
  long total_first_order_calls = 0;
};

// Adaptive projected gradient descent on g + r driven by the inexact oracle.
// Each iteration starts the curvature trial at the inherited estimate, doubles
// it until the oracle's descent test accepts, then relaxes the inherited
// estimate to half the accepted value. Oracle accuracy is tied to the trial:
// delta_c = epsilon / (20 M). Stops once the smallest measure on record
// reaches epsilon; gives up non-converged after max_outer_iterations.
SolverTrace agm_solve(const SaddleProblem& p, const Vec& x0, const AgmConfig& cfg);

// Worst-case outer iteration count to drive the squared measure below
// epsilon: smoothness^{1/e} * initial_gap / epsilon^{(1+e)/(2e)} with e the
// Holder exponent of grad g. Reporting only, never used for termination.
double predicted_outer_complexity(const ValueFunctionSmoothness& s, double initial_gap,
                                  double epsilon);

}  // namespace saddle
