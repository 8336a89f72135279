#include "saddle/agm.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace saddle {
namespace {

double measure_of(StationarityConvention c, double m, double step_norm) {
  const double raw = m * step_norm;
  return c == StationarityConvention::norm ? raw : raw * raw;
}

}  // namespace

SolverTrace agm_solve(const SaddleProblem& p, const Vec& x0, const AgmConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("agm: epsilon must be positive");
  if (!(cfg.l0 > 0.0)) throw std::invalid_argument("agm: l0 must be positive");
  if (x0.size() != p.dim_x) throw std::invalid_argument("agm: x0 has wrong dimension");
  check_finite("agm: x0", x0);
  if (p.feasible_x.violation(x0) > kFeasTol)
    throw std::invalid_argument("agm: x0 is infeasible");

  SolverTrace trace;
  Vec x = x0;
  double inherited = cfg.l0;
  std::optional<Vec> warm;  // inner solution accepted at the current x

  for (long k = 0; k < cfg.max_outer_iterations; ++k) {
    IterationRecord rec;
    rec.k = k;

    double m = inherited;
    std::optional<Vec> warm_x = warm;
    while (true) {
      const double delta_c = cfg.epsilon / (20.0 * m);
      OracleResponse at_x =
          oracle_call(p, x, delta_c, cfg.oracle, warm_x ? &*warm_x : nullptr);
      warm_x = at_x.y_tilde;
      rec.inner_iterations += at_x.inner_iterations;
      rec.first_order_calls += 1;

      Vec z = composite_prox(at_x.gradient, x, 1.0 / m, p.feasible_x, p.composite).point;
      OracleResponse at_z =
          oracle_call(p, z, delta_c, cfg.oracle, &*warm_x);
      rec.inner_iterations += at_z.inner_iterations;
      rec.first_order_calls += 1;

      const Vec step = z - x;
      const double model = at_x.value + at_x.gradient.dot(step) +
                           0.5 * m * step.squaredNorm() + cfg.epsilon / (10.0 * m);
      if (at_z.value <= model) {
        rec.m_k = m;
        rec.delta_ck = delta_c;
        rec.step_norm = step.norm();
        rec.stationarity_measure = measure_of(cfg.stationarity_convention, m, rec.step_norm);
        rec.oracle_value = at_x.value;
        rec.z_value = at_z.value;
        rec.x = x;
        rec.z = z;
        x = z;
        warm = at_z.y_tilde;
        inherited = 0.5 * m;
        break;
      }
      rec.doublings += 1;
      if (rec.doublings > cfg.max_doublings_per_iteration)
        throw std::runtime_error("agm: curvature search exceeded " +
                                 std::to_string(cfg.max_doublings_per_iteration) +
                                 " doublings; declared smoothness or epsilon looks wrong");
      m *= 2.0;
    }

    trace.total_inner_iterations += rec.inner_iterations;
    trace.total_first_order_calls += rec.first_order_calls;
    if (rec.stationarity_measure < trace.best_measure) {
      trace.best_measure = rec.stationarity_measure;
      trace.best_index = k;
    }
    trace.records.push_back(std::move(rec));

    if (trace.best_measure <= cfg.epsilon) {
      trace.converged = true;
      break;
    }
  }

  if (trace.best_index >= 0)
    trace.output = trace.records[static_cast<size_t>(trace.best_index)].z;
  else
    trace.output = x0;
  return trace;
}

double predicted_outer_complexity(const ValueFunctionSmoothness& s, double initial_gap,
                                  double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("predicted bound: epsilon must be positive");
  if (!(s.exponent > 0.0) || s.exponent > 1.0)
    throw std::invalid_argument("predicted bound: exponent must lie in (0, 1]");
  const double e = s.exponent;
  return std::pow(s.constant, 1.0 / e) * initial_gap /
         std::pow(epsilon, (1.0 + e) / (2.0 * e));
}

}  // namespace saddle
