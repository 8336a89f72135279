#include "saddle/harness.hpp"

#include "saddle/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace saddle {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad_config(const std::string& msg) { throw ConfigError("config: " + msg); }

const Json& member(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad_config(std::string("missing required field '") + key + "'");
  return *it;
}

double number_or(const Json& j, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) bad_config(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

long integer_or(const Json& j, const char* key, long fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer())
    bad_config(std::string("field '") + key + "' must be an integer");
  return it->get<long>();
}

bool bool_or(const Json& j, const char* key, bool fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) bad_config(std::string("field '") + key + "' must be a boolean");
  return it->get<bool>();
}

std::string string_or(const Json& j, const char* key, const std::string& fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_string()) bad_config(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

// Scalar entries broadcast to the full dimension; arrays must match it.
Vec vec_field(const Json& j, const char* key, Eigen::Index dim, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return Vec::Constant(dim, fallback);
  if (it->is_number()) return Vec::Constant(dim, it->get<double>());
  if (it->is_array()) {
    if (static_cast<Eigen::Index>(it->size()) != dim)
      bad_config(std::string("array '") + key + "' has " + std::to_string(it->size()) +
                 " entries, expected " + std::to_string(dim));
    Vec v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = (*it)[static_cast<size_t>(i)].get<double>();
    return v;
  }
  bad_config(std::string("field '") + key + "' must be a number or an array");
}

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

FeasibleSet build_feasible(const Json& node, Eigen::Index dim) {
  std::string kind = string_or(node, "kind", "box");
  if (kind == "box") {
    return FeasibleSet(Box{vec_field(node, "lower", dim, -1.0), vec_field(node, "upper", dim, 1.0)});
  }
  if (kind == "ball") {
    return FeasibleSet(Ball{vec_field(node, "center", dim, 0.0), number_or(node, "radius", 1.0)});
  }
  if (kind == "simplex") {
    return FeasibleSet(Simplex{dim, number_or(node, "scale", 1.0)});
  }
  bad_config("unknown feasible set kind '" + kind + "'");
}

CompositeTerm build_composite(const Json& node) {
  std::string kind = string_or(node, "kind", "zero");
  if (kind == "zero") return CompositeTerm::none();
  double w = number_or(node, "weight", 0.0);
  if (w < 0.0) bad_config("composite weight must be nonnegative");
  if (kind == "l1") return CompositeTerm::l1(w);
  if (kind == "quadratic") return CompositeTerm::quadratic(w);
  bad_config("unknown composite kind '" + kind + "'");
}

ScalarField build_phi(const Json& node, Eigen::Index dim) {
  std::string kind = string_or(node, "kind", "zero");
  if (kind == "zero") return make_zero_field();
  if (kind != "sin-quadratic") bad_config("unknown phi kind '" + kind + "'");

  Vec amplitudes = node.contains("amplitudes")
                       ? vec_field(node, "amplitudes", dim, 0.0)
                       : Vec::Constant(dim, number_or(node, "amplitude", 0.0));
  Vec frequencies;
  if (node.contains("frequencies")) {
    frequencies = vec_field(node, "frequencies", dim, 1.0);
  } else {
    double base = number_or(node, "base_frequency", 1.0);
    double decay = number_or(node, "frequency_decay", 1.0);
    frequencies.resize(dim);
    double f = base;
    for (Eigen::Index i = 0; i < dim; ++i, f *= decay) frequencies[i] = f;
  }
  Mat q = Mat::Zero(dim, dim);
  if (node.contains("q_alternating")) {
    double m = member(node, "q_alternating").get<double>();
    for (Eigen::Index i = 0; i < dim; ++i) q(i, i) = (i % 2 == 0) ? m : -m;
  } else if (node.contains("q_diagonal")) {
    q = Mat(vec_field(node, "q_diagonal", dim, 0.0).asDiagonal());
  }
  Vec linear = vec_field(node, "linear", dim, 0.0);
  return make_sin_quadratic_field(amplitudes, frequencies, q, linear);
}

Mat build_coupling(const Json& node, Eigen::Index dim_x, Eigen::Index dim_y, Rng& rng,
                   const fs::path& base_dir) {
  std::string kind = string_or(node, "kind", "zero");
  if (kind == "zero") return Mat::Zero(dim_y, dim_x);
  if (kind == "identity") return Mat::Identity(dim_y, dim_x);
  if (kind == "gaussian") {
    double scale = number_or(node, "scale", 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat a(dim_y, dim_x);
    for (Eigen::Index r = 0; r < dim_y; ++r)
      for (Eigen::Index c = 0; c < dim_x; ++c) a(r, c) = scale * gauss(rng);
    return a;
  }
  if (kind == "file") {
    std::string p = member(node, "path").get<std::string>();
    fs::path full = fs::path(p).is_relative() && !base_dir.empty() ? base_dir / p : fs::path(p);
    Mat a;
    try {
      a = load_matrix(full.string());
    } catch (const std::exception& e) {
      bad_config(std::string("coupling file: ") + e.what());
    }
    if (a.rows() != dim_y || a.cols() != dim_x)
      bad_config("coupling file is " + std::to_string(a.rows()) + "x" +
                 std::to_string(a.cols()) + ", config declares " + std::to_string(dim_y) +
                 "x" + std::to_string(dim_x));
    return a;
  }
  bad_config("unknown coupling kind '" + kind + "'");
}

StationarityConvention parse_convention(const std::string& s) {
  if (s == "norm") return StationarityConvention::norm;
  if (s == "norm-squared") return StationarityConvention::norm_squared;
  bad_config("stationarity_convention must be 'norm' or 'norm-squared', got '" + s + "'");
}

const char* convention_name(StationarityConvention c) {
  return c == StationarityConvention::norm ? "norm" : "norm-squared";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) bad_config("cannot write '" + path + "'");
}

}  // namespace

AffineFit fit_affine(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_affine: need at least two matched points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_affine: degenerate abscissae");
  AffineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

RunConfig parse_config_text(const std::string& text, const std::string& name) {
  RunConfig cfg;
  try {
    cfg.doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad_config(std::string("parse error: ") + e.what());
  }
  if (!cfg.doc.is_object()) bad_config("document root must be an object");
  cfg.name = name;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad_config("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config_text(buf.str(), fs::path(path).stem().string());
  cfg.source_path = path;
  return cfg;
}

BuiltProblem build_problem(const RunConfig& cfg) {
  const Json& prob = member(cfg.doc, "problem");
  std::string generator = string_or(prob, "generator", "bilinear");
  if (generator != "bilinear")
    bad_config("generator '" + generator + "' does not build a saddle problem");

  const Eigen::Index dim_x = integer_or(prob, "dim_x", 0);
  const Eigen::Index dim_y = integer_or(prob, "dim_y", 0);
  if (dim_x <= 0 || dim_y <= 0) bad_config("dim_x and dim_y must be positive");

  BuiltProblem built;
  built.seed = static_cast<std::uint64_t>(
      cfg.doc.contains("report") ? integer_or(cfg.doc["report"], "seed", 0) : 0);
  Rng rng(built.seed);

  fs::path base_dir =
      cfg.source_path.empty() ? fs::path() : fs::path(cfg.source_path).parent_path();

  BilinearConfig bc;
  bc.coupling = build_coupling(member(prob, "coupling"), dim_x, dim_y, rng, base_dir);
  bc.phi = prob.contains("phi") ? build_phi(prob["phi"], dim_x) : make_zero_field();
  bc.sigma = number_or(prob, "sigma", 1.0);
  bc.q = number_or(prob, "q", 2.0);
  bc.feasible = build_feasible(member(prob, "feasible"), dim_x);
  bc.composite = prob.contains("composite") ? build_composite(prob["composite"])
                                            : CompositeTerm::none();
  built.problem = make_bilinear_coupling(std::move(bc));

  // Declared-constant multipliers. The functions stay untouched, so scaling a
  // declaration away from its derived value is how the validation FAIL paths
  // get exercised.
  if (prob.contains("declared_scale")) {
    const Json& ds = prob["declared_scale"];
    built.problem.holder.l_xx *= number_or(ds, "l_xx", 1.0);
    built.problem.holder.l_xy *= number_or(ds, "l_xy", 1.0);
    built.problem.holder.l_yx *= number_or(ds, "l_yx", 1.0);
    built.problem.holder.l_yy *= number_or(ds, "l_yy", 1.0);
    built.problem.uniform.sigma_q *= number_or(ds, "sigma_q", 1.0);
  }

  if (!prob.contains("x0")) {
    built.x0 = built.problem.feasible_x.center_point();
  } else if (prob["x0"].is_string()) {
    std::string mode = prob["x0"].get<std::string>();
    if (mode == "center")
      built.x0 = built.problem.feasible_x.center_point();
    else if (mode == "sample")
      built.x0 = built.problem.feasible_x.sample(rng);
    else
      bad_config("x0 must be 'center', 'sample', or an array");
  } else {
    built.x0 = vec_field(prob, "x0", dim_x, 0.0);
    if (built.problem.feasible_x.violation(built.x0) > kFeasTol)
      bad_config("x0 lies outside the feasible set");
  }
  return built;
}

AgmConfig build_agm_config(const RunConfig& cfg, const SaddleProblem& p) {
  AgmConfig a;
  const Json* sol = cfg.doc.contains("solver") ? &cfg.doc["solver"] : nullptr;
  const Json empty = Json::object();
  const Json& s = sol ? *sol : empty;

  a.epsilon = number_or(s, "epsilon", 1e-3);
  if (!(a.epsilon > 0.0)) bad_config("solver.epsilon must be positive");
  a.l0 = number_or(s, "l0", 1.0);
  if (!(a.l0 > 0.0)) bad_config("solver.l0 must be positive");
  a.max_outer_iterations = integer_or(s, "max_outer_iterations", 200'000);
  if (a.max_outer_iterations < 1) bad_config("solver.max_outer_iterations must be >= 1");
  a.max_doublings_per_iteration = static_cast<int>(integer_or(s, "max_doublings", 60));
  a.stationarity_convention =
      parse_convention(string_or(s, "stationarity_convention", "norm-squared"));

  const Json& inner = s.contains("inner") ? s["inner"] : empty;
  std::string base = string_or(inner, "base", "fast-gradient");
  if (base != "fast-gradient")
    bad_config("inner base '" + base + "' is not available for full solves");
  a.oracle.base = fast_gradient_base(p.inner_smoothness_hint, number_or(inner, "holder_nu", 1.0));
  a.oracle.restart_cap = integer_or(inner, "restart_cap", 200);
  a.oracle.iteration_cap = integer_or(inner, "iteration_cap", 10'000'000);
  a.oracle.min_inner_gap = number_or(inner, "min_gap_floor", 1e-13);
  a.oracle.use_analytic_radius = bool_or(inner, "analytic_radius", true);
  a.oracle.radius_slack = number_or(inner, "radius_slack", 1.1);
  a.oracle.fallback_radius = number_or(inner, "fallback_radius", 1.0);
  return a;
}

std::string resolve_output_dir(const RunConfig& cfg) {
  std::string dir = "runs/" + (cfg.name.empty() ? std::string("run") : cfg.name);
  if (cfg.doc.contains("report"))
    dir = string_or(cfg.doc["report"], "output_dir", dir);
  fs::path p(dir);
  if (p.is_relative()) {
    const char* root = std::getenv("SADDLEBENCH_OUTPUT_ROOT");
    if (root && *root) p = fs::path(root) / p;
  }
  return p.string();
}

std::string trace_csv_header() {
  return "k,M_k,doublings,delta_ck,step_norm,stationarity,oracle_value,inner_iters\n";
}

std::string trace_csv_rows(const SolverTrace& trace) {
  std::string out;
  char buf[512];
  for (const IterationRecord& r : trace.records) {
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%ld\n", r.k, r.m_k,
                  r.doublings, r.delta_ck, r.step_norm, r.stationarity_measure, r.oracle_value,
                  r.inner_iterations);
    out += buf;
  }
  return out;
}

RunReport run_solve(const RunConfig& cfg) {
  BuiltProblem built = build_problem(cfg);
  AgmConfig acfg = build_agm_config(cfg, built.problem);

  const auto t0 = std::chrono::steady_clock::now();
  SolverTrace trace = agm_solve(built.problem, built.x0, acfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string out_dir = resolve_output_dir(cfg);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) bad_config("cannot create output directory '" + out_dir + "': " + ec.message());

  RunReport rep;
  rep.converged = trace.converged;
  rep.csv_path = out_dir + "/trace.csv";
  rep.report_path = out_dir + "/report.json";
  write_text_file(rep.csv_path, trace_csv_header() + trace_csv_rows(trace));

  const auto& best = trace.records.at(static_cast<size_t>(trace.best_index));
  double g_value;
  const char* g_source;
  if (built.problem.g_exact) {
    g_value = built.problem.g_exact(trace.output);
    g_source = "analytic";
  } else {
    g_value = best.z_value;
    g_source = "oracle";
  }

  // Reporting-only complexity estimate: the true objective gap is unknown, so
  // the best observed composite value stands in for the optimum.
  const auto smooth = value_function_smoothness(built.problem.holder, built.problem.uniform,
                                                built.problem.feasible_x.diameter());
  const double r0 = built.problem.composite.value(built.x0);
  double best_value = std::numeric_limits<double>::infinity();
  for (const IterationRecord& r : trace.records)
    best_value = std::min(best_value, r.z_value + built.problem.composite.value(r.z));
  const double gap_estimate =
      std::max(0.0, trace.records.front().oracle_value + r0 - best_value);

  Json doc;
  doc["config"] = cfg.doc;
  doc["seed"] = built.seed;
  doc["converged"] = trace.converged;
  doc["stationarity_convention"] = convention_name(acfg.stationarity_convention);
  doc["final_stationarity"] = trace.best_measure;
  doc["final_point"] = vec_to_json(trace.output);
  doc["g_value_at_output"] = g_value;
  doc["g_value_source"] = g_source;
  doc["totals"] = {{"outer_iterations", static_cast<long>(trace.records.size())},
                   {"first_order_calls", trace.total_first_order_calls},
                   {"inner_iterations", trace.total_inner_iterations},
                   {"wall_seconds", wall}};
  doc["trace_csv"] = rep.csv_path;
  doc["predicted_outer_complexity"] = {
      {"value", predicted_outer_complexity(smooth, gap_estimate, acfg.epsilon)},
      {"objective_gap_estimate", gap_estimate},
      {"note", "estimate: gap taken from the best observed value"}};

  long verbosity =
      cfg.doc.contains("report") ? integer_or(cfg.doc["report"], "trace_verbosity", 1) : 1;
  if (verbosity >= 2) {
    Json iterates = Json::array();
    for (const IterationRecord& r : trace.records)
      iterates.push_back({{"k", r.k}, {"x", vec_to_json(r.x)}, {"z", vec_to_json(r.z)}});
    doc["iterates"] = std::move(iterates);
  }

  write_text_file(rep.report_path, doc.dump(2) + "\n");
  rep.document = std::move(doc);
  rep.trace = std::move(trace);
  return rep;
}

ValidationReport run_validation(const RunConfig& cfg) {
  BuiltProblem built = build_problem(cfg);
  const Json empty = Json::object();
  const Json& v = cfg.doc.contains("validate") ? cfg.doc["validate"] : empty;
  const int samples = static_cast<int>(integer_or(v, "samples", 200));
  const double y_radius = number_or(v, "y_radius", 5.0);
  const SaddleProblem& p = built.problem;

  ValidationReport rep = validate_holder(p, samples, built.seed, y_radius);
  ValidationReport uc = validate_uniform_convexity(p, samples, built.seed + 1, y_radius);
  rep.rows.insert(rep.rows.end(), uc.rows.begin(), uc.rows.end());

  if (p.y_star && p.grad_g_exact) {
    // Empirical Holder bounds the closed forms must inherit from the declared
    // constants: the maximizer map with exponent 1/(q - nu) and the reduced
    // gradient with exponent nu/(q - nu).
    Rng rng(built.seed + 2);
    const double q = p.uniform.degree_q;
    const double nu = p.holder.nu;
    const double y_exp = 1.0 / (q - nu);
    const double y_allowed = std::pow(q * p.holder.l_xy / p.uniform.sigma_q, y_exp);
    const auto smooth = value_function_smoothness(p.holder, p.uniform, p.feasible_x.diameter());

    double y_observed = 0.0, g_observed = 0.0, stat_observed = 0.0;
    for (int i = 0; i < samples; ++i) {
      const Vec x1 = p.feasible_x.sample(rng);
      const Vec x2 = p.feasible_x.sample(rng);
      const double dist = (x2 - x1).norm();
      if (dist < 1e-12) continue;
      y_observed = std::max(y_observed, (p.y_star(x2) - p.y_star(x1)).norm() / std::pow(dist, y_exp));
      g_observed = std::max(g_observed, (p.grad_g_exact(x2) - p.grad_g_exact(x1)).norm() /
                                            std::pow(dist, smooth.exponent));
      const Vec ys = p.y_star(x1);
      stat_observed = std::max(
          stat_observed, (p.grad_y_f(x1, ys) - p.grad_h(ys)).lpNorm<Eigen::Infinity>());
    }
    const double slack = 1.0 + 1e-6;
    rep.rows.push_back({"holder bound on the maximizer map", y_observed, y_allowed,
                        y_observed <= y_allowed * slack + 1e-12});
    rep.rows.push_back({"holder bound on the reduced gradient", g_observed, smooth.constant,
                        g_observed <= smooth.constant * slack + 1e-12});
    rep.rows.push_back({"inner first-order optimality", stat_observed, 1e-8,
                        stat_observed <= 1e-8});
  }
  return rep;
}

namespace {

ScalingSummary scaling_outer_epsilon(const RunConfig& cfg, const std::vector<double>& grid) {
  const BuiltProblem built = build_problem(cfg);  // fail fast on bad configs
  const auto smooth = value_function_smoothness(built.problem.holder, built.problem.uniform,
                                                built.problem.feasible_x.diameter());
  const std::string out_root = resolve_output_dir(cfg);

  Json points = Json::array();
  std::vector<double> xs, ys;
  long successful = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    char sub[32];
    std::snprintf(sub, sizeof(sub), "point_%02zu", i);
    RunConfig pt = cfg;
    pt.doc["solver"]["epsilon"] = grid[i];
    pt.doc["report"]["output_dir"] = out_root + "/" + sub;
    pt.name = cfg.name + "_" + sub;

    RunReport rep = run_solve(pt);
    const long iters = static_cast<long>(rep.trace.records.size());
    double max_excess = -std::numeric_limits<double>::infinity();
    for (const IterationRecord& r : rep.trace.records)
      max_excess = std::max(max_excess, r.m_k - 2.0 * quadratic_model_constant(smooth, r.delta_ck));

    points.push_back({{"epsilon", grid[i]},
                      {"outer_iterations", iters},
                      {"converged", rep.converged},
                      {"first_order_calls", rep.trace.total_first_order_calls},
                      {"inner_iterations", rep.trace.total_inner_iterations},
                      {"max_curvature_excess", max_excess}});
    if (rep.converged) {
      ++successful;
      xs.push_back(std::log(1.0 / grid[i]));
      ys.push_back(std::log(static_cast<double>(std::max(1L, iters))));
    }
  }

  ScalingSummary sum;
  sum.successful_runs = successful;
  if (successful >= 2) sum.fit = fit_affine(xs, ys);
  sum.document = {{"sweep", "epsilon"},
                  {"fit_kind", "log_outer_iterations_vs_log_inverse_epsilon"},
                  {"grid", grid},
                  {"points", std::move(points)},
                  {"successful_runs", successful},
                  {"fit",
                   {{"slope", sum.fit.slope},
                    {"intercept", sum.fit.intercept},
                    {"r_squared", sum.fit.r_squared}}}};
  sum.summary_path = out_root + "/scaling.json";
  write_text_file(sum.summary_path, sum.document.dump(2) + "\n");
  return sum;
}

ScalingSummary scaling_inner_target(const RunConfig& cfg, const std::vector<double>& grid) {
  const Json& prob = member(cfg.doc, "problem");
  if (string_or(prob, "generator", "") != "synthetic-inner")
    bad_config("target_gap sweeps need the 'synthetic-inner' generator");
  const Eigen::Index dim = integer_or(prob, "dim_y", 0);
  if (dim <= 0) bad_config("dim_y must be positive");

  const Json& c = member(prob, "certificate");
  RateCertificate cert;
  cert.constant = number_or(c, "constant", 1.0);
  cert.distance_exponent = number_or(c, "distance_exponent", 2.0);
  cert.rate_exponent = number_or(c, "rate_exponent", 2.0);
  cert.validate();

  UniformConvexitySpec uniform;
  if (prob.contains("uniform")) {
    uniform.degree_q = number_or(prob["uniform"], "degree_q", 2.0);
    uniform.sigma_q = number_or(prob["uniform"], "sigma_q", 1.0);
  }
  uniform.validate();

  const double start_distance = number_or(prob, "start_distance", 1.0);
  if (!(start_distance > 0.0)) bad_config("start_distance must be positive");
  const double radius = number_or(prob, "radius", start_distance);

  const Vec minimizer = Vec::Zero(dim);
  const Vec start = Vec::Constant(dim, start_distance / std::sqrt(static_cast<double>(dim)));
  const InnerAlgorithm base = make_synthetic_base(minimizer, cert);
  const InnerObjective objective = make_synthetic_objective(minimizer);

  RestartOptions opts;
  if (cfg.doc.contains("solver") && cfg.doc["solver"].contains("inner")) {
    const Json& inner = cfg.doc["solver"]["inner"];
    opts.restart_cap = integer_or(inner, "restart_cap", opts.restart_cap);
    opts.iteration_cap = integer_or(inner, "iteration_cap", opts.iteration_cap);
  }

  const std::string out_root = resolve_output_dir(cfg);
  std::error_code ec;
  fs::create_directories(out_root, ec);
  if (ec) bad_config("cannot create output directory '" + out_root + "': " + ec.message());

  Json points = Json::array();
  std::vector<double> xs, ys;
  long successful = 0;
  for (double gap : grid) {
    std::vector<double> distances{(start - minimizer).norm()};
    RestartOptions local = opts;
    local.observer = [&](const RestartEvent& ev) {
      distances.push_back((ev.point - minimizer).norm());
    };
    Json pj{{"target_gap", gap}};
    try {
      InnerSolution sol = restarted_solve(objective, base, uniform, start, radius, gap, local);
      double max_contraction = 0.0;
      for (size_t i = 0; i + 1 < distances.size(); ++i)
        if (distances[i] > 1e-300)
          max_contraction = std::max(max_contraction, distances[i + 1] / distances[i]);
      pj["restarts"] = sol.restarts_used;
      pj["iterations"] = sol.iterations_used;
      pj["gap_bound"] = sol.gap_bound;
      pj["max_restart_contraction"] = max_contraction;
      pj["succeeded"] = true;
      ++successful;
      xs.push_back(std::log2(1.0 / gap));
      ys.push_back(static_cast<double>(sol.restarts_used));
    } catch (const BudgetExhausted& e) {
      pj["succeeded"] = false;
      pj["error"] = e.what();
    }
    points.push_back(std::move(pj));
  }

  ScalingSummary sum;
  sum.successful_runs = successful;
  if (successful >= 2) sum.fit = fit_affine(xs, ys);
  sum.document = {{"sweep", "target_gap"},
                  {"fit_kind", "restarts_vs_log2_inverse_target_gap"},
                  {"grid", grid},
                  {"points", std::move(points)},
                  {"successful_runs", successful},
                  {"fit",
                   {{"slope", sum.fit.slope},
                    {"intercept", sum.fit.intercept},
                    {"r_squared", sum.fit.r_squared}}}};
  sum.summary_path = out_root + "/scaling.json";
  write_text_file(sum.summary_path, sum.document.dump(2) + "\n");
  return sum;
}

}  // namespace

ScalingSummary run_scaling(const RunConfig& cfg, const std::string& parameter,
                           const std::vector<double>& grid) {
  if (grid.size() < 4)
    bad_config("scaling sweep needs at least 4 grid points, got " + std::to_string(grid.size()));
  for (double v : grid)
    if (!(v > 0.0) || !std::isfinite(v)) bad_config("sweep grid values must be positive");
  if (parameter == "epsilon") return scaling_outer_epsilon(cfg, grid);
  if (parameter == "target_gap") return scaling_inner_target(cfg, grid);
  bad_config("unknown sweep parameter '" + parameter + "' (use 'epsilon' or 'target_gap')");
}

int cmd_solve(const std::string& config_path) {
  try {
    RunConfig cfg = load_config(config_path);
    RunReport rep = run_solve(cfg);
    const auto& totals = rep.document["totals"];
    std::printf("%s: stationarity %.6g (%s) after %ld outer iterations, %ld inner iterations\n",
                rep.converged ? "converged" : "not converged",
                rep.document["final_stationarity"].get<double>(),
                rep.document["stationarity_convention"].get<std::string>().c_str(),
                totals["outer_iterations"].get<long>(), totals["inner_iterations"].get<long>());
    std::printf("report: %s\n", rep.report_path.c_str());
    return rep.converged ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_validate(const std::string& config_path) {
  try {
    RunConfig cfg = load_config(config_path);
    ValidationReport rep = run_validation(cfg);
    std::fputs(rep.table().c_str(), stdout);
    return rep.all_passed() ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_scaling(const std::string& config_path, const std::string& parameter,
                const std::vector<double>& grid) {
  try {
    RunConfig cfg = load_config(config_path);
    ScalingSummary sum = run_scaling(cfg, parameter, grid);
    std::printf("sweep %s over %zu points: slope %.6g, intercept %.6g, R^2 %.6g\n",
                parameter.c_str(), grid.size(), sum.fit.slope, sum.fit.intercept,
                sum.fit.r_squared);
    std::printf("summary: %s\n", sum.summary_path.c_str());
    if (sum.successful_runs < 4) {
      std::fprintf(stderr, "only %ld of %zu sweep runs succeeded\n", sum.successful_runs,
                   grid.size());
      return 2;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace saddle
