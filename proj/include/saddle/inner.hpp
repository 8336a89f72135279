#pragma once

#include "saddle/problem.hpp"
#include "saddle/types.hpp"

#include <functional>
#include <limits>
#include <optional>

namespace saddle {

// Guarantee shape a base algorithm declares about itself: running m iterations
// from start point y reduces the objective gap to at most
//
//   constant * ||y - y*||^{distance_exponent} / m^{rate_exponent}.
struct RateCertificate {
  double constant = 1.0;
  double distance_exponent = 2.0;
  double rate_exponent = 2.0;

  void validate() const;
};

// Distance-halving restart plan for a uniformly convex objective. Budgets are
// evaluated lazily: closed forms can overflow long before any real run would.
struct RestartSchedule {
  long initial_budget = 1;                  // budget of restart 0
  std::optional<long> scheduled_restarts;   // after this many restarts the budget is 1
  double budget_decay = 0.0;                // (distance_exponent - q) / rate_exponent

  long budget(long k) const;
};

// initial_budget = ceil((2^q q c R^{d-q} / sigma_q)^{1/r}) where d is the
// certificate's distance exponent. The scheduled restart count is finite only
// for q < d; small radii can make it non-positive, which collapses the
// schedule to unit budgets from the start.
RestartSchedule compute_schedule(const RateCertificate& cert,
                                 const UniformConvexitySpec& uniform, double radius);

// Under degree-q uniform convexity with modulus sigma_q,
//   f(y) - min f  <=  ((q-1)/q) sigma_q^{-1/(q-1)} ||grad f(y)||^{q/(q-1)},
// so a gradient norm certifies an optimality gap.
double certify_gap(double grad_norm, const UniformConvexitySpec& uniform);

struct InnerObjective {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
};

inline constexpr double kNoBound = std::numeric_limits<double>::infinity();

struct InnerRun {
  Vec point;                  // best certified iterate seen
  long iterations = 0;
  double gap_bound = kNoBound;
};

// run(objective, start, budget, uniform, early_stop_gap): perform at most
// `budget` iterations; a base may stop early once some iterate certifies a gap
// at or below early_stop_gap (<= 0 disables early exit).
struct InnerAlgorithm {
  RateCertificate certificate;
  std::function<InnerRun(const InnerObjective&, const Vec&, long, const UniformConvexitySpec&,
                         double)>
      run;
};

struct InnerSolution {
  Vec point;
  double gap_bound = kNoBound;
  long iterations_used = 0;
  long restarts_used = 0;
};

struct RestartEvent {
  long restart_index = 0;
  long budget = 0;
  long iterations = 0;
  Vec point;
  double gap_bound = kNoBound;
};

struct RestartOptions {
  long restart_cap = 200;
  long iteration_cap = 10'000'000;
  std::function<void(const RestartEvent&)> observer;
};

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(const std::string& msg, InnerSolution best);
  const InnerSolution& best() const { return best_; }

 private:
  InnerSolution best_;
};

// Restarted base algorithm on a uniformly convex objective: each restart
// continues from the previous output with the scheduled budget, until some
// iterate certifies a gap <= target_gap. Raises BudgetExhausted (carrying the
// best point and its bound) when a cap is hit first. `radius` must bound
// ||start - minimizer||.
InnerSolution restarted_solve(const InnerObjective& objective, const InnerAlgorithm& base,
                              const UniformConvexitySpec& uniform, const Vec& start,
                              double radius, double target_gap,
                              const RestartOptions& opts = {});

// Accelerated gradient descent with doubling backtracking and momentum reset
// on non-descent. Certificate: constant 8*smoothness, distance exponent
// 1 + nu, rate exponent (1 + 3 nu)/2. Raises when the backtracked local
// estimate exceeds 2^30 * smoothness, which signals a mis-declared constant.
InnerAlgorithm fast_gradient_base(double smoothness, double nu = 1.0);

// Test instrument with exactly the declared rate: from y with budget m it
// lands at the point whose gap in the objective 0.5 ||y - minimizer||^2 equals
// constant * ||y - minimizer||^{distance_exponent} / m^{rate_exponent}. Pair
// with uniform convexity (q = 2, sigma_q = 1).
InnerAlgorithm make_synthetic_base(Vec true_minimizer, RateCertificate cert);
InnerObjective make_synthetic_objective(Vec true_minimizer);

}  // namespace saddle
