// Acceptance suite: one self-contained check per shipped guarantee, each with
// a wall-clock budget. Prints one PASS/FAIL line per criterion; the exit code
// is the number of failures.

#include "saddle/harness.hpp"

#include "helpers.hpp"
#include "prox_reference.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace saddle;
namespace fs = std::filesystem;

namespace {

std::string config_dir() {
  const char* d = std::getenv("SADDLEBENCH_CONFIG_DIR");
  return d && *d ? d : "configs";
}

double log_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

OracleSettings oracle_settings(const SaddleProblem& p) {
  OracleSettings s;
  s.base = fast_gradient_base(p.inner_smoothness_hint);
  return s;
}

// Failure detail, empty on success.
using CriterionBody = std::function<std::string()>;

std::string check_oracle_definition() {
  Rng rng(2024);
  for (double q : {2.0, 3.0, 4.0}) {
    SaddleProblem p = testing::make_test_instance(q, 100 + static_cast<int>(q));
    OracleSettings settings = oracle_settings(p);
    for (int trial = 0; trial < 100; ++trial) {
      const Vec x = p.feasible_x.sample(rng);
      const double delta = log_uniform(rng, 1e-8, 1e-2);
      const OracleResponse resp = oracle_call(p, x, delta, settings);
      const double g = p.g_exact(x);
      if (std::abs(resp.value - g) > delta) {
        char msg[160];
        std::snprintf(msg, sizeof(msg), "q=%g trial %d: value error %.3g exceeds %.3g", q,
                      trial, std::abs(resp.value - g), delta);
        return msg;
      }
      const double l = resp.model_constant;
      for (int j = 0; j < 100; ++j) {
        const Vec z = p.feasible_x.sample(rng);
        const Vec d = z - x;
        const double bound =
            resp.value + resp.gradient.dot(d) + 0.5 * l * d.squaredNorm() + delta + 1e-9;
        const double gz = p.g_exact(z);
        if (gz > bound) {
          char msg[160];
          std::snprintf(msg, sizeof(msg),
                        "q=%g trial %d: model bound violated by %.3g at delta %.3g", q, trial,
                        gz - bound, delta);
          return msg;
        }
      }
    }
  }
  return {};
}

std::string check_maximizer_regularity() {
  const double slack = 1.0 + 1e-6;
  for (double q : {2.0, 3.0, 4.0}) {
    SaddleProblem p = testing::make_test_instance(q, 200 + static_cast<int>(q));
    const double nu = p.holder.nu;
    const double y_exp = 1.0 / (q - nu);
    const double y_allowed = std::pow(q * p.holder.l_xy / p.uniform.sigma_q, y_exp);
    const auto smooth =
        value_function_smoothness(p.holder, p.uniform, p.feasible_x.diameter());
    Rng rng(300 + static_cast<int>(q));
    for (int i = 0; i < 1000; ++i) {
      const Vec x1 = p.feasible_x.sample(rng);
      const Vec x2 = p.feasible_x.sample(rng);
      const double dx = (x2 - x1).norm();
      if (dx < 1e-12) continue;
      const double y_obs = (p.y_star(x2) - p.y_star(x1)).norm();
      if (y_obs > y_allowed * std::pow(dx, y_exp) * slack + 1e-12) {
        char msg[160];
        std::snprintf(msg, sizeof(msg), "q=%g pair %d: maximizer moved %.3g, allowed %.3g", q,
                      i, y_obs, y_allowed * std::pow(dx, y_exp));
        return msg;
      }
      const double g_obs = (p.grad_g_exact(x2) - p.grad_g_exact(x1)).norm();
      const double g_allowed = smooth.constant * std::pow(dx, smooth.exponent);
      if (g_obs > g_allowed * slack + 1e-12) {
        char msg[160];
        std::snprintf(msg, sizeof(msg), "q=%g pair %d: gradient moved %.3g, allowed %.3g", q,
                      i, g_obs, g_allowed);
        return msg;
      }
    }
  }
  return {};
}

std::string check_gradient_identity() {
  SaddleProblem p = testing::make_test_instance(2.0, 404);
  Rng rng(405);
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const Vec x = p.feasible_x.sample(rng);
    const Vec grad = p.grad_x_f(x, p.y_star(x));
    Vec fd(p.dim_x);
    for (Eigen::Index j = 0; j < p.dim_x; ++j) {
      Vec hi = x, lo = x;
      hi[j] += h;
      lo[j] -= h;
      fd[j] = (p.g_exact(hi) - p.g_exact(lo)) / (2.0 * h);
    }
    const double err = (grad - fd).norm() / std::max(1.0, fd.norm());
    if (err > 1e-5) {
      char msg[120];
      std::snprintf(msg, sizeof(msg), "point %d: relative gradient error %.3g", i, err);
      return msg;
    }
  }
  return {};
}

std::string check_restart_schedule() {
  const RestartSchedule flat =
      compute_schedule(RateCertificate{4.0, 2.0, 2.0}, UniformConvexitySpec{2.0, 1.0}, 1.0);
  if (flat.initial_budget != 6) return "flat schedule: initial budget != 6";
  if (flat.scheduled_restarts.has_value()) return "flat schedule: unexpected restart bound";
  if (flat.budget(0) != 6 || flat.budget(57) != 6) return "flat schedule: budget not constant";

  const RestartSchedule decaying =
      compute_schedule(RateCertificate{1.0, 3.0, 2.0}, UniformConvexitySpec{2.0, 1.0}, 1.0);
  if (decaying.initial_budget != 3) return "decaying schedule: initial budget != 3";
  if (!decaying.scheduled_restarts.has_value() || *decaying.scheduled_restarts != 2)
    return "decaying schedule: restart bound != 2";
  if (decaying.budget(0) != 3 || decaying.budget(1) != 3 || decaying.budget(2) != 1)
    return "decaying schedule: budget sequence mismatch";
  return {};
}

std::string check_restart_contraction_scaling() {
  RunConfig cfg = load_config(config_dir() + "/synthetic_inner.json");
  const std::vector<double> grid{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  const ScalingSummary sum = run_scaling(cfg, "target_gap", grid);
  if (sum.successful_runs != static_cast<long>(grid.size())) {
    char msg[120];
    std::snprintf(msg, sizeof(msg), "only %ld of %zu sweep runs certified their target",
                  sum.successful_runs, grid.size());
    return msg;
  }
  if (sum.fit.r_squared < 0.95) {
    char msg[120];
    std::snprintf(msg, sizeof(msg), "restart growth fit R^2 %.4f below 0.95",
                  sum.fit.r_squared);
    return msg;
  }
  for (const auto& pt : sum.document["points"]) {
    const double contraction = pt["max_restart_contraction"].get<double>();
    if (contraction > 0.5) {
      char msg[120];
      std::snprintf(msg, sizeof(msg), "restart contraction %.4f above 1/2 at gap %.1e",
                    contraction, pt["target_gap"].get<double>());
      return msg;
    }
  }
  return {};
}

std::string check_outer_iteration_scaling() {
  RunConfig cfg = load_config(config_dir() + "/ladder_scaling.json");
  const std::vector<double> grid{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  const ScalingSummary sum = run_scaling(cfg, "epsilon", grid);
  if (sum.successful_runs != static_cast<long>(grid.size())) {
    char msg[120];
    std::snprintf(msg, sizeof(msg), "only %ld of %zu sweep solves converged",
                  sum.successful_runs, grid.size());
    return msg;
  }
  if (sum.fit.slope < 0.7 || sum.fit.slope > 1.3) {
    char msg[120];
    std::snprintf(msg, sizeof(msg), "iteration growth slope %.4f outside 1.0 +/- 0.3",
                  sum.fit.slope);
    return msg;
  }
  for (const auto& pt : sum.document["points"]) {
    const double excess = pt["max_curvature_excess"].get<double>();
    if (excess > 1e-9) {
      char msg[120];
      std::snprintf(msg, sizeof(msg),
                    "accepted curvature exceeded twice the model constant by %.3g", excess);
      return msg;
    }
  }
  return {};
}

std::string check_end_to_end_solve() {
  RunConfig cfg = load_config(config_dir() + "/bilinear_q2.json");
  const RunReport rep = run_solve(cfg);
  if (!rep.converged) return "solve did not converge";
  const double eps = cfg.doc["solver"]["epsilon"].get<double>();
  if (rep.trace.best_measure > eps) {
    char msg[120];
    std::snprintf(msg, sizeof(msg), "final stationarity %.3g above epsilon %.3g",
                  rep.trace.best_measure, eps);
    return msg;
  }

  // totals must reconcile with the written trace, row by row
  const std::string csv = slurp(rep.csv_path);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  long rows = 0, inner_sum = 0, call_sum = 0;
  while (std::getline(lines, line)) {
    long k = 0, inner = 0;
    int doublings = 0;
    double m_k = 0, delta = 0, step = 0, stat = 0, value = 0;
    if (std::sscanf(line.c_str(), "%ld,%lf,%d,%lf,%lf,%lf,%lf,%ld", &k, &m_k, &doublings,
                    &delta, &step, &stat, &value, &inner) != 8)
      return "trace row failed to parse: " + line;
    ++rows;
    inner_sum += inner;
    call_sum += 2 * (doublings + 1);
  }
  const auto& totals = rep.document["totals"];
  if (rows != totals["outer_iterations"].get<long>()) return "outer iteration total mismatch";
  if (inner_sum != totals["inner_iterations"].get<long>())
    return "inner iteration total mismatch";
  if (call_sum != totals["first_order_calls"].get<long>())
    return "first-order call total mismatch";

  const RunReport again = run_solve(cfg);
  if (slurp(again.csv_path) != csv) return "repeat run produced a different trace";
  return {};
}

std::string check_prox_certificates() {
  struct Combo {
    FeasibleSet set;
    CompositeTerm comp;
    const char* tag;
  };
  const Vec lo = Vec::Constant(2, -1.0), hi = Vec::Constant(2, 1.0);
  std::vector<Combo> combos;
  for (int c = 0; c < 3; ++c) {
    CompositeTerm comp = c == 0   ? CompositeTerm::none()
                         : c == 1 ? CompositeTerm::l1(0.3)
                                  : CompositeTerm::quadratic(0.8);
    combos.push_back({FeasibleSet(Box{lo, hi}), comp, "box"});
    combos.push_back({FeasibleSet(Simplex{2, 1.3}), comp, "simplex"});
    if (c != 1) {
      Vec center(2);
      center << 0.4, -0.2;
      combos.push_back({FeasibleSet(Ball{center, 0.9}), comp, "shifted ball"});
    }
    combos.push_back({FeasibleSet(Ball{Vec::Zero(2), 1.2}), comp, "centered ball"});
  }

  Rng rng(808);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (const Combo& combo : combos) {
    for (int trial = 0; trial < 2; ++trial) {
      Vec eta(2), center = combo.set.sample(rng);
      eta << gauss(rng), gauss(rng);
      const double gamma = 0.25 + 0.5 * trial;
      const ProxResult res = composite_prox(eta, center, gamma, combo.set, combo.comp);
      if (res.certificate_delta != 0.0) return std::string(combo.tag) + ": nonzero slack";

      const double mine = testing::prox_objective(eta, center, gamma, combo.comp, res.point);
      const double grid =
          testing::brute_force_prox_min(combo.set, eta, center, gamma, combo.comp);
      if (mine > grid + 1e-9 || grid - mine > 1e-5) {
        char msg[160];
        std::snprintf(msg, sizeof(msg), "%s: objective %.9g vs grid %.9g", combo.tag, mine,
                      grid);
        return msg;
      }

      const Vec field = eta + (res.point - center) / gamma +
                        composite_subgradient_at(eta, center, gamma, combo.set, combo.comp,
                                                 res.point);
      for (int j = 0; j < 1000; ++j) {
        const Vec z = combo.set.sample(rng);
        if (field.dot(z - res.point) < -1e-9) {
          char msg[160];
          std::snprintf(msg, sizeof(msg), "%s: optimality certificate fails by %.3g",
                        combo.tag, -field.dot(z - res.point));
          return msg;
        }
      }
    }
  }
  return {};
}

}  // namespace

int main() {
  const fs::path out_root =
      fs::temp_directory_path() / ("saddlebench_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(out_root);
  ::setenv("SADDLEBENCH_OUTPUT_ROOT", out_root.c_str(), 1);

  struct Criterion {
    const char* label;
    double budget_seconds;
    CriterionBody body;
  };
  const std::vector<Criterion> criteria{
      {"inexact oracle: value error and quadratic model bound", 30.0, check_oracle_definition},
      {"maximizer map and reduced gradient obey their Holder bounds", 10.0,
       check_maximizer_regularity},
      {"reduced gradient equals the partial gradient at the maximizer", 5.0,
       check_gradient_identity},
      {"restart schedule closed forms", 5.0, check_restart_schedule},
      {"restart count scales affinely in target-gap decades, contraction <= 1/2", 5.0,
       check_restart_contraction_scaling},
      {"outer iterations scale linearly in 1/epsilon, curvature stays bounded", 120.0,
       check_outer_iteration_scaling},
      {"end-to-end solve: stationarity, reconciled totals, reproducibility", 60.0,
       check_end_to_end_solve},
      {"prox mapping matches brute force and certifies optimality", 10.0,
       check_prox_certificates},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    try {
      detail = criteria[i].body();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (detail.empty() && elapsed >= criteria[i].budget_seconds) {
      char msg[80];
      std::snprintf(msg, sizeof(msg), "exceeded the %.0f s budget", criteria[i].budget_seconds);
      detail = msg;
    }
    const bool ok = detail.empty();
    failures += ok ? 0 : 1;
    std::printf("criterion %zu %s  %s (%.2f s)%s%s\n", i + 1, ok ? "PASS" : "FAIL",
                criteria[i].label, elapsed, ok ? "" : ": ", detail.c_str());
    std::fflush(stdout);
  }

  std::printf("acceptance: %zu of %zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  std::error_code ec;
  fs::remove_all(out_root, ec);
  return failures;
}
