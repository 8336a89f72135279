#include "saddle/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace saddle {

void check_finite(const char* what, const Vec& v) {
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
  }
}

void check_finite(const char* what, double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + ": non-finite value");
  }
}

namespace {

Eigen::Index shape_dim(const FeasibleSet::Shape& s) {
  if (const auto* b = std::get_if<Box>(&s)) {
    if (b->lower.size() != b->upper.size()) {
      throw std::invalid_argument("box: lower/upper dimension mismatch");
    }
    if ((b->upper - b->lower).minCoeff() < 0.0) {
      throw std::invalid_argument("box: upper < lower in some coordinate");
    }
    return b->lower.size();
  }
  if (const auto* b = std::get_if<Ball>(&s)) {
    if (b->radius <= 0.0) throw std::invalid_argument("ball: radius must be positive");
    return b->center.size();
  }
  const auto& sx = std::get<Simplex>(s);
  if (sx.dim <= 0) throw std::invalid_argument("simplex: dimension must be positive");
  if (sx.scale <= 0.0) throw std::invalid_argument("simplex: scale must be positive");
  return sx.dim;
}

double shape_diameter(const FeasibleSet::Shape& s) {
  if (const auto* b = std::get_if<Box>(&s)) return (b->upper - b->lower).norm();
  if (const auto* b = std::get_if<Ball>(&s)) return 2.0 * b->radius;
  const auto& sx = std::get<Simplex>(s);
  // distance between two vertices scale * e_i, scale * e_j
  return sx.dim >= 2 ? sx.scale * std::sqrt(2.0) : 0.0;
}

double shape_max_norm(const FeasibleSet::Shape& s) {
  if (const auto* b = std::get_if<Box>(&s)) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < b->lower.size(); ++i) {
      acc += std::pow(std::max(std::abs(b->lower[i]), std::abs(b->upper[i])), 2);
    }
    return std::sqrt(acc);
  }
  if (const auto* b = std::get_if<Ball>(&s)) return b->center.norm() + b->radius;
  return std::get<Simplex>(s).scale;
}

}  // namespace

FeasibleSet::FeasibleSet(Shape shape)
    : shape_(std::move(shape)),
      dim_(shape_dim(shape_)),
      diameter_(shape_diameter(shape_)),
      max_norm_(shape_max_norm(shape_)) {}

double FeasibleSet::violation(const Vec& x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("feasible set: point has dimension " +
                                std::to_string(x.size()) + ", set has " +
                                std::to_string(dim_));
  }
  if (const auto* b = std::get_if<Box>(&shape_)) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < dim_; ++i) {
      v = std::max({v, b->lower[i] - x[i], x[i] - b->upper[i]});
    }
    return v;
  }
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    return std::max(0.0, (x - b->center).norm() - b->radius);
  }
  const auto& sx = std::get<Simplex>(shape_);
  double v = std::abs(x.sum() - sx.scale);
  for (Eigen::Index i = 0; i < dim_; ++i) v = std::max(v, -x[i]);
  return v;
}

bool FeasibleSet::contains(const Vec& x, double tol) const { return violation(x) <= tol; }

Vec FeasibleSet::center_point() const {
  if (const auto* b = std::get_if<Box>(&shape_)) return 0.5 * (b->lower + b->upper);
  if (const auto* b = std::get_if<Ball>(&shape_)) return b->center;
  const auto& sx = std::get<Simplex>(shape_);
  return Vec::Constant(sx.dim, sx.scale / static_cast<double>(sx.dim));
}

Vec FeasibleSet::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (const auto* b = std::get_if<Box>(&shape_)) {
    Vec x(dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) {
      x[i] = b->lower[i] + unif(rng) * (b->upper[i] - b->lower[i]);
    }
    return x;
  }
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    return b->center + sample_ball(rng, dim_, b->radius);
  }
  const auto& sx = std::get<Simplex>(shape_);
  // normalized exponential spacings give the uniform distribution
  std::exponential_distribution<double> expd(1.0);
  Vec e(dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) e[i] = expd(rng);
  return (sx.scale / e.sum()) * e;
}

Vec sample_ball(Rng& rng, Eigen::Index dim, double radius) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec d(dim);
  for (Eigen::Index i = 0; i < dim; ++i) d[i] = gauss(rng);
  double n = d.norm();
  if (n == 0.0) return Vec::Zero(dim);
  double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim));
  return (r / n) * d;
}

double CompositeTerm::value(const Vec& x) const {
  switch (kind) {
    case CompositeKind::zero:
      return 0.0;
    case CompositeKind::l1:
      return weight * x.lpNorm<1>();
    case CompositeKind::quadratic:
      return 0.5 * weight * x.squaredNorm();
  }
  return 0.0;
}

void HolderSpec::validate() const {
  if (order_p < 1) throw std::invalid_argument("holder: order_p must be >= 1");
  if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("holder: nu must lie in (0, 1]");
  if (l_xx < 0.0 || l_xy < 0.0 || l_yx < 0.0 || l_yy < 0.0) {
    throw std::invalid_argument("holder: constants must be non-negative");
  }
}

void UniformConvexitySpec::validate() const {
  if (degree_q < 2.0) throw std::invalid_argument("uniform convexity: degree_q must be >= 2");
  if (sigma_q <= 0.0) throw std::invalid_argument("uniform convexity: sigma_q must be positive");
}

ScalarField make_zero_field() {
  ScalarField f;
  f.value = [](const Vec&) { return 0.0; };
  f.grad = [](const Vec& x) { return Vec::Zero(x.size()); };
  f.grad_lipschitz = 0.0;
  return f;
}

ScalarField make_sin_quadratic_field(const Vec& amplitudes, const Vec& frequencies,
                                     const Mat& q_matrix, const Vec& linear) {
  const Eigen::Index n = amplitudes.size();
  if (frequencies.size() != n || linear.size() != n || q_matrix.rows() != n ||
      q_matrix.cols() != n) {
    throw std::invalid_argument("sin-quadratic field: inconsistent dimensions");
  }
  Mat q_sym = 0.5 * (q_matrix + q_matrix.transpose());
  double q_norm = 0.0;
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(q_sym, Eigen::EigenvaluesOnly);
    q_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  double wave = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    wave = std::max(wave, std::abs(amplitudes[i]) * frequencies[i] * frequencies[i]);
  }

  ScalarField f;
  f.grad_lipschitz = q_norm + wave;
  f.value = [a = amplitudes, b = frequencies, q = q_sym, c = linear](const Vec& x) {
    double s = 0.5 * x.dot(q * x) + c.dot(x);
    for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * std::sin(b[i] * x[i]);
    return s;
  };
  f.grad = [a = amplitudes, b = frequencies, q = q_sym, c = linear](const Vec& x) {
    Vec g = q * x + c;
    for (Eigen::Index i = 0; i < a.size(); ++i) g[i] += a[i] * b[i] * std::cos(b[i] * x[i]);
    return g;
  };
  return f;
}

double eval_shat(const SaddleProblem& p, const Vec& x, const Vec& y) {
  if (x.size() != p.dim_x || y.size() != p.dim_y) {
    throw std::invalid_argument(
        "eval: dimension mismatch, got (" + std::to_string(x.size()) + ", " +
        std::to_string(y.size()) + "), expected (" + std::to_string(p.dim_x) + ", " +
        std::to_string(p.dim_y) + ")");
  }
  check_finite("eval: x", x);
  check_finite("eval: y", y);
  double v = p.feasible_x.violation(x);
  if (v > kFeasTol) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    throw std::invalid_argument(std::string("eval: x infeasible, violation ") + buf);
  }
  return p.f(x, y) - p.h(y);
}

double operator_norm(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.isZero(0.0)) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

SaddleProblem make_bilinear_coupling(BilinearConfig cfg) {
  if (cfg.q < 2.0) throw std::invalid_argument("bilinear coupling: q must be >= 2");
  if (cfg.sigma <= 0.0) throw std::invalid_argument("bilinear coupling: sigma must be positive");
  const Eigen::Index nx = cfg.coupling.cols();
  const Eigen::Index ny = cfg.coupling.rows();
  if (cfg.feasible.dim() != nx) {
    throw std::invalid_argument("bilinear coupling: feasible set dimension " +
                                std::to_string(cfg.feasible.dim()) + " does not match A with " +
                                std::to_string(nx) + " columns");
  }
  if (!cfg.phi.value || !cfg.phi.grad) {
    throw std::invalid_argument("bilinear coupling: phi must provide value and gradient");
  }

  const double sigma = cfg.sigma;
  const double q = cfg.q;
  const double a_norm = operator_norm(cfg.coupling);

  SaddleProblem p;
  p.feasible_x = cfg.feasible;
  p.dim_x = nx;
  p.dim_y = ny;
  p.composite = cfg.composite;

  Mat a = cfg.coupling;
  p.f = [a, phi = cfg.phi](const Vec& x, const Vec& y) { return phi.value(x) + (a * x).dot(y); };
  p.grad_x_f = [a, phi = cfg.phi](const Vec& x, const Vec& y) -> Vec {
    return phi.grad(x) + a.transpose() * y;
  };
  p.grad_y_f = [a](const Vec& x, const Vec&) -> Vec { return a * x; };

  p.h = [sigma, q](const Vec& y) { return (sigma / q) * std::pow(y.norm(), q); };
  p.grad_h = [sigma, q](const Vec& y) -> Vec {
    double n = y.norm();
    if (n == 0.0) return Vec::Zero(y.size());
    return sigma * std::pow(n, q - 2.0) * y;
  };

  p.holder = HolderSpec{.order_p = 1,
                        .nu = 1.0,
                        .l_xx = cfg.phi.grad_lipschitz,
                        .l_xy = a_norm,
                        .l_yx = a_norm,
                        .l_yy = 0.0};
  p.uniform = UniformConvexitySpec{.degree_q = q, .sigma_q = sigma * std::pow(2.0, 2.0 - q)};
  p.holder.validate();
  p.uniform.validate();

  p.y_star = [a, sigma, q](const Vec& x) -> Vec {
    Vec ax = a * x;
    double n = ax.norm();
    if (n == 0.0) return Vec::Zero(ax.size());
    return std::pow(n, (2.0 - q) / (q - 1.0)) * std::pow(sigma, -1.0 / (q - 1.0)) * ax;
  };
  p.g_exact = [a, sigma, q, phi = cfg.phi](const Vec& x) {
    double n = (a * x).norm();
    return phi.value(x) +
           (1.0 - 1.0 / q) * std::pow(sigma, -1.0 / (q - 1.0)) * std::pow(n, q / (q - 1.0));
  };
  p.grad_g_exact = [a, ys = p.y_star, phi = cfg.phi](const Vec& x) -> Vec {
    return phi.grad(x) + a.transpose() * ys(x);
  };

  if (q == 2.0) {
    p.inner_smoothness_hint = sigma;
  } else {
    // local curvature of h grows like sigma (q-1) ||y||^{q-2}; bound the region
    // by 1.5x the largest attainable maximizer norm
    double ax_max = a_norm * cfg.feasible.max_norm();
    double y_max = std::pow(ax_max / sigma, 1.0 / (q - 1.0));
    p.inner_smoothness_hint =
        std::max(1e-6, sigma * (q - 1.0) * std::pow(1.5 * y_max, q - 2.0));
  }
  return p;
}

bool ValidationReport::all_passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

std::string ValidationReport::table() const {
  std::ostringstream out;
  out << "check                                  observed      allowed       result\n";
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-38s %-13.6g %-13.6g %s\n", r.name.c_str(), r.observed,
                  r.allowed, r.pass ? "PASS" : "FAIL");
    out << buf;
  }
  return out.str();
}

ValidationReport validate_holder(const SaddleProblem& p, int samples, std::uint64_t seed,
                                 double y_radius) {
  p.holder.validate();
  Rng rng(seed);
  double r_xx = 0.0, r_xy = 0.0, r_yx = 0.0, r_yy = 0.0;
  const double nu = p.holder.nu;
  for (int s = 0; s < samples; ++s) {
    Vec x1 = p.feasible_x.sample(rng);
    Vec x2 = p.feasible_x.sample(rng);
    Vec y1 = sample_ball(rng, p.dim_y, y_radius);
    Vec y2 = sample_ball(rng, p.dim_y, y_radius);
    double dx = (x1 - x2).norm();
    double dy = (y1 - y2).norm();
    if (dx > 1e-12) {
      double num_x = (p.grad_x_f(x1, y1) - p.grad_x_f(x2, y1)).norm();
      double num_y = (p.grad_y_f(x1, y1) - p.grad_y_f(x2, y1)).norm();
      r_xx = std::max(r_xx, num_x / std::pow(dx, nu));
      r_yx = std::max(r_yx, num_y / std::pow(dx, nu));
    }
    if (dy > 1e-12) {
      double num_x = (p.grad_x_f(x1, y1) - p.grad_x_f(x1, y2)).norm();
      double num_y = (p.grad_y_f(x1, y1) - p.grad_y_f(x1, y2)).norm();
      r_xy = std::max(r_xy, num_x / std::pow(dy, nu));
      r_yy = std::max(r_yy, num_y / std::pow(dy, nu));
    }
  }
  auto row = [](const char* name, double observed, double declared) {
    // 1% slack on the declared constant
    double allowed = declared * 1.01 + 1e-12;
    return CheckRow{name, observed, allowed, observed <= allowed};
  };
  ValidationReport rep;
  rep.rows.push_back(row("holder l_xx", r_xx, p.holder.l_xx));
  rep.rows.push_back(row("holder l_xy", r_xy, p.holder.l_xy));
  rep.rows.push_back(row("holder l_yx", r_yx, p.holder.l_yx));
  rep.rows.push_back(row("holder l_yy", r_yy, p.holder.l_yy));
  return rep;
}

ValidationReport validate_uniform_convexity(const SaddleProblem& p, int samples,
                                            std::uint64_t seed, double y_radius) {
  p.uniform.validate();
  Rng rng(seed);
  const double q = p.uniform.degree_q;
  const double sq = p.uniform.sigma_q;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec y1 = sample_ball(rng, p.dim_y, y_radius);
    Vec y2 = sample_ball(rng, p.dim_y, y_radius);
    double lhs = p.h(y1) + p.grad_h(y1).dot(y2 - y1) + (sq / q) * std::pow((y2 - y1).norm(), q);
    worst = std::max(worst, lhs - p.h(y2));
  }
  ValidationReport rep;
  rep.rows.push_back(CheckRow{"uniform convexity", worst, 1e-9, worst <= 1e-9});
  return rep;
}

void save_matrix(const std::string& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << m.rows() << " " << m.cols() << "\n";
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf << (j + 1 == m.cols() ? "" : " ");
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Mat load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
    throw std::runtime_error("matrix file " + path + ": bad header, expected 'rows cols'");
  }
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> m(i, j))) {
        throw std::runtime_error("matrix file " + path + ": ran out of values at entry (" +
                                 std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  return m;
}

}  // namespace saddle
