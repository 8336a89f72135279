#pragma once

#include "saddle/problem.hpp"

#include <random>

namespace saddle::testing {

// Standard nondegenerate instance used across the tests: gaussian coupling,
// sin+indefinite-quadratic phi, box feasible set.
inline SaddleProblem make_test_instance(double q, std::uint64_t seed, Eigen::Index dim_x = 10,
                                        Eigen::Index dim_y = 10, double coupling_scale = 0.3) {
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat a(dim_y, dim_x);
  for (Eigen::Index r = 0; r < dim_y; ++r)
    for (Eigen::Index c = 0; c < dim_x; ++c) a(r, c) = coupling_scale * gauss(rng);

  Vec amplitudes = Vec::Constant(dim_x, 0.3);
  Vec frequencies = Vec::Constant(dim_x, 2.0);
  Mat qm = Mat::Zero(dim_x, dim_x);
  for (Eigen::Index i = 0; i < dim_x; ++i) qm(i, i) = (i % 2 == 0) ? 0.3 : -0.3;

  BilinearConfig cfg;
  cfg.coupling = std::move(a);
  cfg.phi = make_sin_quadratic_field(amplitudes, frequencies, qm, Vec::Zero(dim_x));
  cfg.sigma = 1.0;
  cfg.q = q;
  cfg.feasible = FeasibleSet(Box{Vec::Constant(dim_x, -1.0), Vec::Constant(dim_x, 1.0)});
  cfg.composite = CompositeTerm::none();
  return make_bilinear_coupling(std::move(cfg));
}

// phi-free coupling on a small box, the textbook case with y*(x) = Ax.
inline SaddleProblem make_identity_instance(Eigen::Index dim = 2) {
  BilinearConfig cfg;
  cfg.coupling = Mat::Identity(dim, dim);
  cfg.phi = make_zero_field();
  cfg.sigma = 1.0;
  cfg.q = 2.0;
  cfg.feasible = FeasibleSet(Box{Vec::Constant(dim, -1.0), Vec::Constant(dim, 1.0)});
  return make_bilinear_coupling(std::move(cfg));
}

}  // namespace saddle::testing
