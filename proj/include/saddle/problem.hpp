#pragma once

#include "saddle/types.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace saddle {

// Problem family
//
//   min_{x in X}  max_{y in R^m}  F(x, y) - h(y) + r(x)
//
// X compact convex, h uniformly convex of degree q >= 2, F concave in y and
// possibly non-convex in x. The reduced outer objective is
//
//   g(x) = max_y { F(x, y) - h(y) },
//
// minimized over X together with the simple composite r.

// Holder continuity description of the partial gradients of F:
//   ||grad_x F(x,y) - grad_x F(x',y)|| <= l_xx ||x - x'||^nu      (same y)
//   ||grad_x F(x,y) - grad_x F(x,y')|| <= l_xy ||y - y'||^nu      (same x)
// and symmetrically l_yx, l_yy for grad_y F. order_p is carried as metadata;
// the solvers shipped here consume first-order information only.
struct HolderSpec {
  int order_p = 1;
  double nu = 1.0;  // in (0, 1]
  double l_xx = 0.0;
  double l_xy = 0.0;
  double l_yx = 0.0;
  double l_yy = 0.0;

  void validate() const;
};

// h(y') >= h(y) + <grad h(y), y' - y> + (sigma_q / q) ||y' - y||^q
struct UniformConvexitySpec {
  double degree_q = 2.0;  // q >= 2
  double sigma_q = 1.0;   // > 0

  void validate() const;
};

// Smooth scalar field with an explicit gradient and a declared Lipschitz
// constant for that gradient.
struct ScalarField {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  double grad_lipschitz = 0.0;
};

ScalarField make_zero_field();

// phi(x) = sum_i a_i sin(b_i x_i) + 0.5 x'Qx + c'x. Q may be indefinite, so
// the field is genuinely non-convex for nonzero amplitudes or negative
// curvature. grad_lipschitz = ||Q||_2 + max_i |a_i| b_i^2.
ScalarField make_sin_quadratic_field(const Vec& amplitudes, const Vec& frequencies,
                                     const Mat& q_matrix, const Vec& linear);

struct SaddleProblem {
  Eigen::Index dim_x = 0;
  Eigen::Index dim_y = 0;

  std::function<double(const Vec&, const Vec&)> f;
  std::function<Vec(const Vec&, const Vec&)> grad_x_f;
  std::function<Vec(const Vec&, const Vec&)> grad_y_f;

  std::function<double(const Vec&)> h;
  std::function<Vec(const Vec&)> grad_h;

  HolderSpec holder;
  UniformConvexitySpec uniform;
  FeasibleSet feasible_x = FeasibleSet(Box{Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)});
  CompositeTerm composite;

  // Closed forms, populated by generators that have them. Absent for problems
  // assembled from raw callables.
  std::function<Vec(const Vec&)> y_star;           // argmax_y of F(x,.) - h
  std::function<double(const Vec&)> g_exact;       // value of the inner max
  std::function<Vec(const Vec&)> grad_g_exact;

  // Estimate of the gradient Lipschitz constant of the inner minimization
  // objective h(y) - F(x,y) over the region the inner solver visits. Used to
  // seed line searches; correctness never depends on it.
  double inner_smoothness_hint = 1.0;

  bool has_analytic() const { return static_cast<bool>(g_exact); }
};

// F(x,y) - h(y). Errors on dimension mismatch, non-finite input, or x outside
// the feasible set (reported with the violation magnitude).
double eval_shat(const SaddleProblem& p, const Vec& x, const Vec& y);

struct BilinearConfig {
  Mat coupling;  // A, shape dim_y x dim_x; F(x,y) = phi(x) + (Ax)'y
  ScalarField phi;
  double sigma = 1.0;  // h(y) = (sigma/q) ||y||^q
  double q = 2.0;
  FeasibleSet feasible = FeasibleSet(Box{Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)});
  CompositeTerm composite;
};

// Coupling family with closed-form inner maximizer:
//   y*(x) = sigma^{-1/(q-1)} ||Ax||^{(2-q)/(q-1)} Ax        (0 when Ax = 0)
//   g(x)  = phi(x) + (1 - 1/q) sigma^{-1/(q-1)} ||Ax||^{q/(q-1)}
// Declared constants: l_xx from phi, l_xy = l_yx = ||A||_2, l_yy = 0,
// sigma_q = sigma 2^{2-q}.
SaddleProblem make_bilinear_coupling(BilinearConfig cfg);

struct CheckRow {
  std::string name;
  double observed = 0.0;
  double allowed = 0.0;
  bool pass = true;
};

struct ValidationReport {
  std::vector<CheckRow> rows;
  bool all_passed() const;
  std::string table() const;
};

// Samples random pairs within the feasible set (x side) and a bounded ball
// (y side) and compares empirical Holder ratios of the partial gradients of F
// against the declared constants. A declared constant fails when the
// empirical ratio exceeds it by more than 1%.
ValidationReport validate_holder(const SaddleProblem& p, int samples, std::uint64_t seed,
                                 double y_radius = 5.0);

// Checks the degree-q lower bound of h on random pairs; fails on violation
// beyond 1e-9.
ValidationReport validate_uniform_convexity(const SaddleProblem& p, int samples,
                                            std::uint64_t seed, double y_radius = 5.0);

// Dense text format: first line "rows cols", then row-major whitespace
// separated decimals.
void save_matrix(const std::string& path, const Mat& m);
Mat load_matrix(const std::string& path);

double operator_norm(const Mat& m);

}  // namespace saddle
