#include "saddle/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace saddle {

double bregman_divergence(const Vec& center, const Vec& point) {
  if (center.size() != point.size()) {
    throw std::invalid_argument("bregman divergence: dimension mismatch");
  }
  return 0.5 * (point - center).squaredNorm();
}

namespace {

Vec project_simplex(const Simplex& sx, const Vec& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = (std::accumulate(u.begin(), u.end(), 0.0) - sx.scale) / static_cast<double>(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[static_cast<size_t>(j)];
    double cand = (cumsum - sx.scale) / static_cast<double>(j + 1);
    // keep extending while the next coordinate stays active; the tiny slack
    // admits exact ties, which lands on the larger support
    if (u[static_cast<size_t>(j)] - cand > -1e-15) {
      theta = cand;
    } else {
      break;
    }
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

}  // namespace

Vec project(const FeasibleSet& set, const Vec& point) {
  if (point.size() != set.dim()) {
    throw std::invalid_argument("project: point dimension " + std::to_string(point.size()) +
                                " does not match set dimension " + std::to_string(set.dim()));
  }
  check_finite("project: point", point);
  const auto& shape = set.shape();
  if (const auto* b = std::get_if<Box>(&shape)) {
    return point.cwiseMax(b->lower).cwiseMin(b->upper);
  }
  if (const auto* b = std::get_if<Ball>(&shape)) {
    Vec d = point - b->center;
    double n = d.norm();
    if (n <= b->radius) return point;
    return b->center + (b->radius / n) * d;
  }
  return project_simplex(std::get<Simplex>(shape), point);
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

ProxResult composite_prox(const Vec& eta, const Vec& center, double gamma,
                          const FeasibleSet& set, const CompositeTerm& composite) {
  if (gamma <= 0.0) throw std::invalid_argument("composite prox: gamma must be positive");
  if (eta.size() != center.size() || eta.size() != set.dim()) {
    throw std::invalid_argument("composite prox: dimension mismatch");
  }
  check_finite("composite prox: eta", eta);
  check_finite("composite prox: center", center);

  Vec target = center - gamma * eta;
  switch (composite.kind) {
    case CompositeKind::zero:
      return {project(set, target)};
    case CompositeKind::quadratic:
      // combined quadratic stays a rescaled distance, so projecting the
      // shrunk target is exact for every set
      return {project(set, target / (1.0 + gamma * composite.weight))};
    case CompositeKind::l1: {
      const auto& shape = set.shape();
      if (std::holds_alternative<Simplex>(shape)) {
        // ||x||_1 is constant on the simplex
        return {project(set, target)};
      }
      if (const auto* b = std::get_if<Ball>(&shape)) {
        if (b->center.norm() != 0.0) {
          throw std::invalid_argument(
              "composite prox: unsupported combination (off-center ball, l1)");
        }
      }
      Vec t(target.size());
      for (Eigen::Index i = 0; i < target.size(); ++i) {
        t[i] = soft_threshold(target[i], gamma * composite.weight);
      }
      // box: separable, threshold-then-clip is the coordinate-wise exact
      // minimizer; origin-centered ball: the constrained solution is a radial
      // rescale of the thresholded point, which is what projection does
      return {project(set, t)};
    }
  }
  throw std::logic_error("composite prox: unhandled composite kind");
}

Vec composite_subgradient_at(const Vec& eta, const Vec& center, double gamma,
                             const FeasibleSet& set, const CompositeTerm& composite,
                             const Vec& point) {
  if (eta.size() != center.size() || eta.size() != point.size() ||
      eta.size() != set.dim()) {
    throw std::invalid_argument("composite subgradient: dimension mismatch");
  }
  switch (composite.kind) {
    case CompositeKind::zero:
      return Vec::Zero(point.size());
    case CompositeKind::quadratic:
      return composite.weight * point;
    case CompositeKind::l1: {
      const double w = composite.weight;
      if (std::holds_alternative<Simplex>(set.shape())) {
        // the prox skipped thresholding here; the sum constraint absorbs a
        // constant shift, and +w is inside the subdifferential at zero
        return Vec::Constant(point.size(), w);
      }
      Vec s(point.size());
      for (Eigen::Index i = 0; i < point.size(); ++i) {
        if (point[i] > 0.0) {
          s[i] = w;
        } else if (point[i] < 0.0) {
          s[i] = -w;
        } else {
          double residual = -eta[i] - (point[i] - center[i]) / gamma;
          s[i] = std::clamp(residual, -w, w);
        }
      }
      return s;
    }
  }
  throw std::logic_error("composite subgradient: unhandled composite kind");
}

}  // namespace saddle
