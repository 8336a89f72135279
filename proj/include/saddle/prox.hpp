#pragma once

#include "saddle/types.hpp"

namespace saddle {

// Euclidean mirror setup: d(x) = 0.5 ||x||^2, so the divergence below is
// 0.5 ||point - center||^2. Solvers only touch this seam and the two entry
// points underneath, which is what another mirror instance would replace.
double bregman_divergence(const Vec& center, const Vec& point);

// Euclidean projection onto the set. Box and ball are direct closed forms; the
// simplex uses the sort-and-threshold rule in O(n log n), with ties at the
// threshold resolved toward the larger support.
Vec project(const FeasibleSet& set, const Vec& point);

struct ProxResult {
  Vec point;
  // inexactness actually incurred; the closed forms here are exact
  double certificate_delta = 0.0;
};

// argmin_{x in set} { <eta, x> + (1/(2 gamma)) ||x - center||^2 + r(x) }
//
// Computed as a gradient step center - gamma*eta, then the composite piece
// (soft-threshold for l1, shrink by 1/(1 + gamma*mu) for quadratic), then
// projection. Each supported (set, composite) pair below makes that sequence
// the exact minimizer:
//   box x {zero, l1, quadratic}, ball x {zero, quadratic},
//   origin-centered ball x l1, simplex x {zero, l1, quadratic}.
// l1 is constant on the simplex, so no thresholding is applied there. An
// off-center ball with l1 has no closed form here and raises an error naming
// the pair.
ProxResult composite_prox(const Vec& eta, const Vec& center, double gamma,
                          const FeasibleSet& set, const CompositeTerm& composite);

double soft_threshold(double v, double t);

// Subgradient s of the composite at the prox output satisfying the first-order
// optimality of composite_prox: free coordinates take the forced value, and
// coordinates at a kink take the KKT residual clamped into the subdifferential.
// The set is needed because the certifying choice is shape-dependent: on the
// simplex the l1 term is constant and the witness is +weight everywhere.
// Used to certify prox outputs:
//   <eta + (point - center)/gamma + s, z - point> >= 0 for all feasible z.
Vec composite_subgradient_at(const Vec& eta, const Vec& center, double gamma,
                             const FeasibleSet& set, const CompositeTerm& composite,
                             const Vec& point);

}  // namespace saddle
