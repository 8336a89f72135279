#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

namespace saddle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

// Shared feasibility tolerance: a point is treated as a member of a set when
// its constraint violation does not exceed this.
inline constexpr double kFeasTol = 1e-9;

void check_finite(const char* what, const Vec& v);
void check_finite(const char* what, double v);

struct Box {
  Vec lower;
  Vec upper;
};

struct Ball {
  Vec center;
  double radius = 1.0;
};

// {x : x >= 0, sum x = scale}
struct Simplex {
  Eigen::Index dim = 0;
  double scale = 1.0;
};

class FeasibleSet {
 public:
  using Shape = std::variant<Box, Ball, Simplex>;

  explicit FeasibleSet(Shape shape);

  Eigen::Index dim() const { return dim_; }
  double diameter() const { return diameter_; }
  // sup of the Euclidean norm over the set
  double max_norm() const { return max_norm_; }

  const Shape& shape() const { return shape_; }

  // 0 inside the set, otherwise a positive magnitude of the worst violated
  // constraint (sign conventions per shape, see implementation).
  double violation(const Vec& x) const;
  bool contains(const Vec& x, double tol = kFeasTol) const;

  Vec center_point() const;
  Vec sample(Rng& rng) const;

 private:
  Shape shape_;
  Eigen::Index dim_;
  double diameter_;
  double max_norm_;
};

enum class CompositeKind { zero, l1, quadratic };

// Simple convex term r(x) added to the outer objective. The prox module knows
// how to handle each kind in closed form.
struct CompositeTerm {
  CompositeKind kind = CompositeKind::zero;
  double weight = 0.0;  // l1 coefficient or quadratic coefficient

  double value(const Vec& x) const;
  static CompositeTerm none() { return {}; }
  static CompositeTerm l1(double w) { return {CompositeKind::l1, w}; }
  static CompositeTerm quadratic(double w) { return {CompositeKind::quadratic, w}; }
};

// Uniform sample from a Euclidean ball centered at the origin.
Vec sample_ball(Rng& rng, Eigen::Index dim, double radius);

}  // namespace saddle
