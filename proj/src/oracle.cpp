#include "saddle/oracle.hpp"

#include <cmath>

namespace saddle {

ValueFunctionSmoothness value_function_smoothness(const HolderSpec& holder,
                                                  const UniformConvexitySpec& uniform,
                                                  double diameter) {
  holder.validate();
  uniform.validate();
  if (diameter < 0.0) {
    throw std::invalid_argument("value function smoothness: negative diameter");
  }
  const double nu = holder.nu;
  const double q = uniform.degree_q;
  ValueFunctionSmoothness s;
  s.exponent = nu / (q - nu);
  double coupling = holder.l_xy > 0.0
                        ? holder.l_xy * std::pow(q * holder.l_xy / uniform.sigma_q, s.exponent)
                        : 0.0;
  double direct = holder.l_xx * std::pow(diameter, nu * (q - nu - 1.0) / (q - nu));
  s.constant = coupling + direct;
  return s;
}

double quadratic_model_constant(const ValueFunctionSmoothness& s, double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("quadratic model constant: delta must be positive");
  }
  if (!(s.exponent > 0.0 && s.exponent <= 1.0)) {
    throw std::invalid_argument("quadratic model constant: exponent must lie in (0, 1]");
  }
  const double e = s.exponent;
  if (e == 1.0) return s.constant;
  double ratio = (1.0 - e) / (1.0 + e);
  return std::pow(ratio * 2.0 / delta, ratio) * std::pow(s.constant, 2.0 / (1.0 + e));
}

OracleResponse oracle_call(const SaddleProblem& p, const Vec& x, double delta_c,
                           const OracleSettings& settings, const Vec* warm_start) {
  if (!(delta_c > 0.0) || !std::isfinite(delta_c)) {
    throw std::invalid_argument("oracle: delta_c must be positive and finite");
  }
  if (x.size() != p.dim_x) {
    throw std::invalid_argument("oracle: x has dimension " + std::to_string(x.size()) +
                                ", problem expects " + std::to_string(p.dim_x));
  }
  check_finite("oracle: x", x);

  const double q = p.uniform.degree_q;
  const double sigma_q = p.uniform.sigma_q;
  const double d0 = p.feasible_x.diameter();

  // split delta_c evenly between the value channel and the gradient channel;
  // the gradient half converts to a distance and then to a gap through the
  // degree-q growth of the inner objective
  double target = 0.5 * delta_c;
  if (p.holder.l_xy > 0.0 && d0 > 0.0) {
    double dist_budget = delta_c / (2.0 * p.holder.l_xy * d0);
    target = std::min(target, (sigma_q / q) * std::pow(dist_budget, q / p.holder.nu));
  }
  target = std::max(target, std::min(settings.min_inner_gap, 0.5 * delta_c));

  InnerObjective inner;
  inner.value = [&p, &x](const Vec& y) { return p.h(y) - p.f(x, y); };
  inner.grad = [&p, &x](const Vec& y) -> Vec { return p.grad_h(y) - p.grad_y_f(x, y); };

  Vec start = warm_start ? *warm_start : Vec::Zero(p.dim_y);
  if (start.size() != p.dim_y) {
    throw std::invalid_argument("oracle: warm start has wrong dimension");
  }

  RestartOptions opts;
  opts.restart_cap = settings.restart_cap;
  opts.iteration_cap = settings.iteration_cap;

  InnerSolution sol;
  if (p.y_star && settings.use_analytic_radius) {
    double radius = settings.radius_slack * (start - p.y_star(x)).norm() + 1e-12;
    sol = restarted_solve(inner, settings.base, p.uniform, start, radius, target, opts);
  } else {
    // no closed-form maximizer: guess a radius and double it while the
    // schedule comes up short
    double radius = settings.fallback_radius;
    for (int attempt = 0;; ++attempt) {
      try {
        sol = restarted_solve(inner, settings.base, p.uniform, start, radius, target, opts);
        break;
      } catch (const BudgetExhausted&) {
        if (attempt >= 12) throw;
        radius *= 2.0;
      }
    }
  }

  OracleResponse resp;
  resp.value = eval_shat(p, x, sol.point);
  resp.gradient = p.grad_x_f(x, sol.point);
  resp.delta_c = delta_c;
  resp.model_constant =
      quadratic_model_constant(value_function_smoothness(p.holder, p.uniform, d0), delta_c);
  resp.y_tilde = sol.point;
  resp.inner_gap_bound = sol.gap_bound;
  resp.inner_iterations = sol.iterations_used;
  resp.inner_restarts = sol.restarts_used;
  return resp;
}

}  // namespace saddle
