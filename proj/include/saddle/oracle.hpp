#pragma once

#include "saddle/inner.hpp"
#include "saddle/problem.hpp"
#include "saddle/types.hpp"

namespace saddle {

// Smoothness the reduced objective g(x) = max_y { F(x,y) - h(y) } inherits
// from the coupling and the uniform convexity of h: its gradient is Holder
// continuous with exponent nu/(q - nu) and constant
//   l_xy (q l_xy / sigma_q)^{nu/(q-nu)} + l_xx D0^{nu (q-nu-1)/(q-nu)},
// D0 the feasible-set diameter.
struct ValueFunctionSmoothness {
  double constant = 0.0;  // Holder constant of grad g
  double exponent = 1.0;  // in (0, 1]
};

ValueFunctionSmoothness value_function_smoothness(const HolderSpec& holder,
                                                  const UniformConvexitySpec& uniform,
                                                  double diameter);

// Smallest quadratic-model constant L(delta) such that a delta-corrupted
// first-order model with L(delta)/2 ||.||^2 curvature upper-bounds a function
// whose gradient is Holder with the given constant and exponent:
//   L(delta) = ((1-e)/(1+e) * 2/delta)^{(1-e)/(1+e)} * c^{2/(1+e)},
// with the first factor read as 1 when the exponent e is 1.
double quadratic_model_constant(const ValueFunctionSmoothness& s, double delta);

struct OracleResponse {
  double value = 0.0;      // Shat(x, y_tilde), within delta_c of g(x)
  Vec gradient;            // grad_x F(x, y_tilde)
  double delta_c = 0.0;    // accuracy that was requested
  double model_constant = 0.0;  // L(delta_c) for the quadratic model bound
  Vec y_tilde;             // inner point backing the answer; callers may reuse
                           // it to warm-start the next query
  double inner_gap_bound = 0.0;
  long inner_iterations = 0;
  long inner_restarts = 0;
};

struct OracleSettings {
  InnerAlgorithm base;
  long restart_cap = 200;
  long iteration_cap = 10'000'000;
  // Numerical floor for the inner target gap. The worst-case mapping from
  // delta_c to an inner gap scales like delta_c^{q/nu} and lands far below
  // double precision for q >= 3 at small delta_c; certifying it is hopeless,
  // while the quadratic model absorbs the floored gradient error through
  // L(delta_c). The floor never rises above delta_c / 2.
  double min_inner_gap = 1e-13;
  bool use_analytic_radius = true;  // off: always use the doubling heuristic
  double radius_slack = 1.1;        // analytic maximizer: radius = slack * distance
  double fallback_radius = 1.0;     // no closed form: doubling starts here
};

// Inexact first-order information for g at x: solves the inner maximization
// until the certified gap reaches
//   min(delta_c / 2, (sigma_q/q) (delta_c / (2 l_xy D0))^{q/nu})
// (the second term is dropped when l_xy = 0), which makes the returned value
// delta_c-accurate and the returned gradient accurate enough for the
// quadratic model with constant L(delta_c). Stateless; pass the previous
// y_tilde as warm_start to resume near the last maximizer.
OracleResponse oracle_call(const SaddleProblem& p, const Vec& x, double delta_c,
                           const OracleSettings& settings, const Vec* warm_start = nullptr);

}  // namespace saddle
