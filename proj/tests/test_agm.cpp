#include "saddle/agm.hpp"

#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <vector>

using namespace saddle;

namespace {

// phi(x) = 0.5 x^2 - 0.3 x on [-1,1], constrained minimum at 0.3
SaddleProblem make_decoupled_quadratic() {
  BilinearConfig cfg;
  cfg.coupling = Mat::Zero(1, 1);
  cfg.phi = make_sin_quadratic_field(Vec::Zero(1), Vec::Constant(1, 1.0), Mat::Identity(1, 1),
                                     Vec::Constant(1, -0.3));
  cfg.feasible = FeasibleSet(Box{Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)});
  return make_bilinear_coupling(std::move(cfg));
}

SaddleProblem make_decoupled_wavy() {
  BilinearConfig cfg;
  cfg.coupling = Mat::Zero(2, 2);
  Vec amp(2), freq(2), lin(2);
  amp << 0.3, 0.2;
  freq << 2.0, 3.0;
  lin << 0.05, -0.1;
  Mat qm = Mat::Zero(2, 2);
  qm(0, 0) = 0.4;
  qm(1, 1) = -0.4;
  cfg.phi = make_sin_quadratic_field(amp, freq, qm, lin);
  cfg.feasible = FeasibleSet(Box{Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)});
  return make_bilinear_coupling(std::move(cfg));
}

AgmConfig make_config(const SaddleProblem& p, double epsilon) {
  AgmConfig cfg;
  cfg.epsilon = epsilon;
  cfg.oracle.base = fast_gradient_base(p.inner_smoothness_hint);
  return cfg;
}

}  // namespace

TEST_CASE("decoupled quadratic reaches the constrained minimum in two iterations") {
  SaddleProblem p = make_decoupled_quadratic();
  AgmConfig cfg = make_config(p, 1e-6);
  SolverTrace trace = agm_solve(p, Vec::Zero(1), cfg);

  REQUIRE(trace.records.size() == 2);
  CHECK(trace.converged);
  CHECK(trace.best_index == 1);
  CHECK(std::abs(trace.output(0) - 0.3) <= 1e-14);

  const auto& first = trace.records[0];
  CHECK(first.m_k == 1.0);
  CHECK(first.doublings == 0);
  CHECK(first.step_norm == doctest::Approx(0.3));
  CHECK(first.stationarity_measure == doctest::Approx(0.09));
  CHECK(first.delta_ck == doctest::Approx(5e-8));
  CHECK(first.oracle_value == doctest::Approx(0.0));
  CHECK(first.z_value == doctest::Approx(-0.045));

  const auto& second = trace.records[1];
  CHECK(second.m_k == 0.5);  // inherits half the accepted estimate
  CHECK(second.step_norm == 0.0);
  CHECK(second.stationarity_measure == 0.0);
  CHECK(trace.best_measure == 0.0);
  CHECK(trace.total_first_order_calls == 4);
}

TEST_CASE("stationary start converges in one iteration") {
  SaddleProblem p = make_decoupled_quadratic();
  AgmConfig cfg = make_config(p, 1e-6);
  SolverTrace trace = agm_solve(p, Vec::Constant(1, 0.3), cfg);
  REQUIRE(trace.records.size() == 1);
  CHECK(trace.converged);
  CHECK(trace.records[0].step_norm == 0.0);
  CHECK(trace.output(0) == 0.3);
}

TEST_CASE("trace bookkeeping is internally consistent") {
  SaddleProblem p = testing::make_test_instance(2.0, 41);
  AgmConfig cfg = make_config(p, 1e-3);
  SolverTrace trace = agm_solve(p, p.feasible_x.center_point(), cfg);

  REQUIRE(trace.converged);
  REQUIRE(!trace.records.empty());

  long inner_sum = 0, call_sum = 0;
  double best = kNoBound;
  long best_at = -1;
  double prev_m = cfg.l0;
  for (size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    CHECK(r.k == static_cast<long>(i));
    // accuracy is tied to the accepted trial: delta * 20 * M = epsilon
    CHECK(r.delta_ck * 20.0 * r.m_k == doctest::Approx(cfg.epsilon).epsilon(1e-12));
    // the trial ladder is powers of two over the inherited estimate
    double start_m = i == 0 ? cfg.l0 : 0.5 * prev_m;
    CHECK(r.m_k == start_m * std::pow(2.0, r.doublings));
    prev_m = r.m_k;
    CHECK(r.first_order_calls == 2 * (r.doublings + 1));
    double raw = r.m_k * r.step_norm;
    CHECK(r.stationarity_measure == doctest::Approx(raw * raw).epsilon(1e-12));
    CHECK(r.step_norm == doctest::Approx((r.z - r.x).norm()).epsilon(1e-12));
    CHECK(p.feasible_x.violation(r.z) <= 1e-9);
    inner_sum += r.inner_iterations;
    call_sum += r.first_order_calls;
    if (r.stationarity_measure < best) {
      best = r.stationarity_measure;
      best_at = r.k;
    }
  }
  CHECK(trace.total_inner_iterations == inner_sum);
  CHECK(trace.total_first_order_calls == call_sum);
  CHECK(trace.best_measure == best);
  CHECK(trace.best_index == best_at);
  CHECK(trace.best_measure <= cfg.epsilon);
  CHECK((trace.output - trace.records[static_cast<size_t>(best_at)].z).norm() == 0.0);
}

TEST_CASE("norm convention reports the unsquared measure") {
  SaddleProblem p = make_decoupled_wavy();
  AgmConfig cfg = make_config(p, 1e-14);
  cfg.max_outer_iterations = 5;
  cfg.stationarity_convention = StationarityConvention::norm;
  SolverTrace trace = agm_solve(p, Vec::Zero(2), cfg);
  for (const auto& r : trace.records) {
    CHECK(r.stationarity_measure == doctest::Approx(r.m_k * r.step_norm).epsilon(1e-12));
  }
}

TEST_CASE("accepted curvature stays within twice the model constant") {
  for (double q : {2.0, 3.0}) {
    CAPTURE(q);
    SaddleProblem p = testing::make_test_instance(q, 47);
    AgmConfig cfg = make_config(p, 1e-3);
    SolverTrace trace = agm_solve(p, p.feasible_x.center_point(), cfg);
    REQUIRE(trace.converged);
    ValueFunctionSmoothness s =
        value_function_smoothness(p.holder, p.uniform, p.feasible_x.diameter());
    for (const auto& r : trace.records) {
      double cap = std::max(cfg.l0, 2.0 * quadratic_model_constant(s, r.delta_ck));
      CHECK(r.m_k <= cap * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("matches a hand-rolled adaptive projected gradient loop when the oracle is exact") {
  SaddleProblem p = make_decoupled_wavy();
  AgmConfig cfg = make_config(p, 1e-14);
  cfg.max_outer_iterations = 10;
  SolverTrace trace = agm_solve(p, Vec::Zero(2), cfg);
  REQUIRE(trace.records.size() == 10);
  CHECK_FALSE(trace.converged);

  const Vec y0 = Vec::Zero(2);
  Vec x = Vec::Zero(2);
  double inherited = cfg.l0;
  for (size_t k = 0; k < 10; ++k) {
    double m = inherited;
    for (;;) {
      Vec g = p.grad_x_f(x, y0);
      Vec z = (x - g / m).cwiseMax(-1.0).cwiseMin(1.0);
      Vec step = z - x;
      double model = p.f(x, y0) + g.dot(step) + 0.5 * m * step.squaredNorm() +
                     cfg.epsilon / (10.0 * m);
      if (p.f(z, y0) <= model) {
        x = z;
        inherited = 0.5 * m;
        break;
      }
      m *= 2.0;
    }
    CHECK((trace.records[k].z - x).norm() <= 1e-10);
    CHECK(trace.records[k].m_k == doctest::Approx(2.0 * inherited));
  }
}

TEST_CASE("non-convergence within the iteration cap is reported") {
  SaddleProblem p = testing::make_test_instance(2.0, 53);
  AgmConfig cfg = make_config(p, 1e-12);
  cfg.max_outer_iterations = 3;
  SolverTrace trace = agm_solve(p, p.feasible_x.center_point(), cfg);
  CHECK_FALSE(trace.converged);
  CHECK(trace.records.size() == 3);
  CHECK(trace.best_index >= 0);
  CHECK(trace.best_measure > cfg.epsilon);
  CHECK((trace.output - trace.records[static_cast<size_t>(trace.best_index)].z).norm() == 0.0);
}

TEST_CASE("curvature search gives up after the configured doublings") {
  SaddleProblem p = make_decoupled_quadratic();
  AgmConfig cfg = make_config(p, 1e-12);
  cfg.l0 = 1e-6;  // far below the true curvature 1
  cfg.max_doublings_per_iteration = 2;
  try {
    agm_solve(p, Vec::Constant(1, -0.9), cfg);
    FAIL("expected the doubling guard to fire");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("doublings") != std::string::npos);
  }
}

TEST_CASE("solver input validation") {
  SaddleProblem p = make_decoupled_quadratic();
  AgmConfig cfg = make_config(p, 1e-6);

  AgmConfig bad = cfg;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(agm_solve(p, Vec::Zero(1), bad), std::invalid_argument);
  bad = cfg;
  bad.l0 = -1.0;
  CHECK_THROWS_AS(agm_solve(p, Vec::Zero(1), bad), std::invalid_argument);
  CHECK_THROWS_AS(agm_solve(p, Vec::Zero(2), cfg), std::invalid_argument);
  CHECK_THROWS_AS(agm_solve(p, Vec::Constant(1, 7.0), cfg), std::invalid_argument);
  Vec nan1 = Vec::Constant(1, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(agm_solve(p, nan1, cfg), std::invalid_argument);
}

TEST_CASE("worst-case outer complexity closed forms") {
  CHECK(predicted_outer_complexity({10.0, 1.0}, 3.0, 0.01) == doctest::Approx(3000.0));
  CHECK(predicted_outer_complexity({1.0, 0.5}, 1.0, 0.01) == doctest::Approx(1000.0));
  // with a Lipschitz gradient, halving epsilon doubles the bound
  double a = predicted_outer_complexity({2.0, 1.0}, 1.0, 1e-3);
  double b = predicted_outer_complexity({2.0, 1.0}, 1.0, 5e-4);
  CHECK(b / a == doctest::Approx(2.0));
  CHECK_THROWS(predicted_outer_complexity({1.0, 1.0}, 1.0, 0.0));
  CHECK_THROWS(predicted_outer_complexity({1.0, 2.0}, 1.0, 0.1));
}
