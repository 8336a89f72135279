#include "saddle/inner.hpp"

#include <cmath>
#include <sstream>

namespace saddle {

void RateCertificate::validate() const {
  if (constant <= 0.0) throw std::invalid_argument("rate certificate: constant must be positive");
  if (distance_exponent <= 0.0) {
    throw std::invalid_argument("rate certificate: distance exponent must be positive");
  }
  if (rate_exponent <= 0.0) {
    throw std::invalid_argument("rate certificate: rate exponent must be positive");
  }
}

long RestartSchedule::budget(long k) const {
  if (k < 0) throw std::invalid_argument("restart schedule: negative index");
  if (scheduled_restarts && k >= *scheduled_restarts) return 1;
  double m = std::ceil(static_cast<double>(initial_budget) *
                       std::pow(2.0, -budget_decay * static_cast<double>(k)));
  if (!(m >= 1.0)) return 1;
  if (m > 4e18) {
    throw std::overflow_error("restart schedule: budget overflows at restart " +
                              std::to_string(k));
  }
  return static_cast<long>(m);
}

RestartSchedule compute_schedule(const RateCertificate& cert,
                                 const UniformConvexitySpec& uniform, double radius) {
  cert.validate();
  uniform.validate();
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("compute schedule: radius must be positive and finite");
  }
  const double q = uniform.degree_q;
  const double s = uniform.sigma_q;
  const double c = cert.constant;
  const double d = cert.distance_exponent;
  const double r = cert.rate_exponent;

  double m0_real =
      std::pow(std::pow(2.0, q) * q * c * std::pow(radius, d - q) / s, 1.0 / r);
  if (!std::isfinite(m0_real) || m0_real > 4e18) {
    throw std::overflow_error("compute schedule: initial budget overflows");
  }

  RestartSchedule sched;
  sched.initial_budget = std::max(1L, static_cast<long>(std::ceil(m0_real)));
  sched.budget_decay = (d - q) / r;
  if (q < d) {
    double k0 = std::ceil(1.0 / q + (d / q) * std::log2(radius) +
                          (1.0 / (d - q)) * std::log2(q * c / s));
    sched.scheduled_restarts = k0 <= 0.0 ? 0L : static_cast<long>(k0);
  }
  return sched;
}

double certify_gap(double grad_norm, const UniformConvexitySpec& uniform) {
  uniform.validate();
  if (grad_norm < 0.0) throw std::invalid_argument("certify gap: negative gradient norm");
  const double q = uniform.degree_q;
  return ((q - 1.0) / q) * std::pow(uniform.sigma_q, -1.0 / (q - 1.0)) *
         std::pow(grad_norm, q / (q - 1.0));
}

BudgetExhausted::BudgetExhausted(const std::string& msg, InnerSolution best)
    : std::runtime_error(msg), best_(std::move(best)) {}

InnerSolution restarted_solve(const InnerObjective& objective, const InnerAlgorithm& base,
                              const UniformConvexitySpec& uniform, const Vec& start,
                              double radius, double target_gap, const RestartOptions& opts) {
  if (!(target_gap > 0.0)) {
    throw std::invalid_argument("restarted solve: target gap must be positive");
  }
  check_finite("restarted solve: start", start);

  InnerSolution best;
  best.point = start;
  best.gap_bound = certify_gap(objective.grad(start).norm(), uniform);
  if (best.gap_bound <= target_gap) return best;

  RestartSchedule sched = compute_schedule(base.certificate, uniform, radius);
  Vec z = start;
  for (long k = 0;; ++k) {
    if (k >= opts.restart_cap) {
      std::ostringstream msg;
      msg << "restarted solve: restart cap " << opts.restart_cap << " reached, best bound "
          << best.gap_bound << " vs target " << target_gap;
      throw BudgetExhausted(msg.str(), best);
    }
    long m = sched.budget(k);
    InnerRun run = base.run(objective, z, m, uniform, target_gap);
    best.iterations_used += run.iterations;
    best.restarts_used = k + 1;
    z = run.point;
    double bound = certify_gap(objective.grad(z).norm(), uniform);
    if (bound < best.gap_bound) {
      best.gap_bound = bound;
      best.point = z;
    }
    if (opts.observer) {
      opts.observer(RestartEvent{k, m, run.iterations, z, bound});
    }
    if (best.gap_bound <= target_gap) return best;
    if (best.iterations_used > opts.iteration_cap) {
      std::ostringstream msg;
      msg << "restarted solve: iteration cap " << opts.iteration_cap
          << " exceeded, best bound " << best.gap_bound << " vs target " << target_gap;
      throw BudgetExhausted(msg.str(), best);
    }
  }
}

InnerAlgorithm fast_gradient_base(double smoothness, double nu) {
  if (!(smoothness > 0.0)) {
    throw std::invalid_argument("fast gradient base: smoothness must be positive");
  }
  if (!(nu > 0.0 && nu <= 1.0)) {
    throw std::invalid_argument("fast gradient base: nu must lie in (0, 1]");
  }

  InnerAlgorithm alg;
  alg.certificate = RateCertificate{.constant = 8.0 * smoothness,
                                    .distance_exponent = 1.0 + nu,
                                    .rate_exponent = (1.0 + 3.0 * nu) / 2.0};
  alg.run = [smoothness](const InnerObjective& obj, const Vec& start, long budget,
                         const UniformConvexitySpec& uniform, double early_stop) -> InnerRun {
    InnerRun out;
    out.point = start;

    Vec x = start;
    Vec x_prev = start;
    double fx = obj.value(start);
    double t = 1.0;
    double m_local = smoothness;
    const double m_floor = smoothness * 0x1p-20;
    const double m_ceil = smoothness * 0x1p30;
    // per-iteration slack keeps the line search finite for nu < 1; harmless
    // for nu = 1 and zero when no early-stop target is given
    const double slack =
        early_stop > 0.0 && budget > 0 ? 0.5 * early_stop / static_cast<double>(budget) : 0.0;

    auto consider = [&](const Vec& p, double grad_norm) {
      double bound = certify_gap(grad_norm, uniform);
      if (bound < out.gap_bound) {
        out.gap_bound = bound;
        out.point = p;
      }
    };

    for (long i = 0; i < budget; ++i) {
      double beta = t > 1.0 ? (t - 1.0) / (0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t))) : 0.0;
      double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      Vec y = x + beta * (x - x_prev);
      Vec gy = obj.grad(y);
      double fy = obj.value(y);
      consider(y, gy.norm());
      if (early_stop > 0.0 && out.gap_bound <= early_stop) {
        out.iterations = i;
        return out;
      }

      m_local = std::max(m_local * 0.5, m_floor);
      Vec x_new;
      double fx_new;
      for (;;) {
        x_new = y - gy / m_local;
        fx_new = obj.value(x_new);
        double model = fy + gy.dot(x_new - y) + 0.5 * m_local * (x_new - y).squaredNorm();
        if (fx_new <= model + slack) break;
        m_local *= 2.0;
        if (m_local > m_ceil) {
          throw std::runtime_error(
              "fast gradient base: local smoothness exceeded 2^30 times the declared "
              "constant; the declared smoothness looks wrong");
        }
      }

      // momentum reset on non-descent keeps the tail linear on strongly
      // convex objectives
      t = fx_new > fx ? 1.0 : t_next;
      x_prev = x;
      x = x_new;
      fx = fx_new;
      out.iterations = i + 1;
    }

    consider(x, obj.grad(x).norm());
    return out;
  };
  return alg;
}

InnerObjective make_synthetic_objective(Vec true_minimizer) {
  InnerObjective obj;
  obj.value = [m = true_minimizer](const Vec& y) { return 0.5 * (y - m).squaredNorm(); };
  obj.grad = [m = true_minimizer](const Vec& y) -> Vec { return y - m; };
  return obj;
}

InnerAlgorithm make_synthetic_base(Vec true_minimizer, RateCertificate cert) {
  cert.validate();
  InnerAlgorithm alg;
  alg.certificate = cert;
  alg.run = [min = std::move(true_minimizer), cert](const InnerObjective&, const Vec& start,
                                                    long budget, const UniformConvexitySpec&,
                                                    double) -> InnerRun {
    if (budget < 1) throw std::invalid_argument("synthetic base: budget must be >= 1");
    Vec d = start - min;
    double dist = d.norm();
    double gap = cert.constant * std::pow(dist, cert.distance_exponent) /
                 std::pow(static_cast<double>(budget), cert.rate_exponent);
    InnerRun out;
    out.iterations = budget;
    out.gap_bound = gap;
    if (dist == 0.0) {
      out.point = min;
    } else {
      out.point = min + (std::sqrt(2.0 * gap) / dist) * d;
    }
    return out;
  };
  return alg;
}

}  // namespace saddle
