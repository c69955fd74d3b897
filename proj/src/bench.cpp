#include "rmdopt/bench.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace rmdopt {

ProblemKind parse_problem(const std::string& name) {
  if (name == "eig") return ProblemKind::Eig;
  if (name == "procrustes") return ProblemKind::Procrustes;
  throw ConfigError("unknown problem: " + name);
}

std::string problem_name(ProblemKind kind) {
  return kind == ProblemKind::Eig ? "eig" : "procrustes";
}

namespace {

// Shortest round-trip decimal form; keeps regenerated reports byte-stable.
std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct GeneratedProblem {
  Problem solver_problem;
  double optimum = 0.0;
};

GeneratedProblem generate(ProblemKind kind, int n, int p, SeededRng& rng) {
  SeededRng problem_rng = rng.split(1);
  SeededRng start_rng = rng.split(2);
  GeneratedProblem out;
  if (kind == ProblemKind::Eig) {
    EigProblem pr = eig_generate(n, p, problem_rng);
    out.optimum = pr.optimum;
    out.solver_problem =
        make_solver_problem(pr, random_stiefel(n, p, start_rng));
  } else {
    ProcrustesProblem pr = procrustes_generate(n, p, problem_rng);
    out.optimum = 0.0;
    out.solver_problem =
        make_solver_problem(pr, random_stiefel(n, p, start_rng));
  }
  return out;
}

void validate_spec(const ExperimentSpec& spec) {
  if (spec.n < spec.p || spec.p < 1) {
    throw ConfigError("benchmark: need n >= p >= 1");
  }
  if (spec.repeats < 1) {
    throw ConfigError("benchmark: repeats must be >= 1");
  }
  if (spec.format != "csv" && spec.format != "json") {
    throw ConfigError("benchmark: format must be csv or json");
  }
  if (spec.solve.method == Method::RmdExp && spec.p != 1) {
    throw ConfigError("benchmark: rmd-exp needs p = 1 (the sphere)");
  }
  if (spec.solve.method == Method::RmdEuclid &&
      spec.problem != ProblemKind::Procrustes) {
    throw ConfigError(
        "benchmark: rmd-euclid is the unconstrained baseline and only "
        "applies to procrustes (eig is unbounded below off the manifold)");
  }
}

}  // namespace

BenchmarkResult run_benchmark(const ExperimentSpec& spec) {
  validate_spec(spec);
  BenchmarkResult result;
  const SeededRng base(spec.solve.seed);

  for (int r = 0; r < spec.repeats; ++r) {
    SeededRng run_rng = base.split(static_cast<std::uint64_t>(r) + 1);
    GeneratedProblem gp = generate(spec.problem, spec.n, spec.p, run_rng);

    SolveConfig config = spec.solve;
    config.seed = run_rng.split(3).seed();

    const auto tic = std::chrono::steady_clock::now();
    SolveResult solved;
    try {
      solved = run_solver(gp.solver_problem, config);
    } catch (Error& e) {
      e.prepend_context("benchmark run " + std::to_string(r));
      throw;
    }
    const double wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - tic)
                               .count();

    RunSummary row;
    row.run = r;
    row.seed = config.seed;
    row.iters = solved.trace.records.back().iter;
    row.final_f = solved.trace.records.back().f;
    row.error = std::abs(row.final_f - gp.optimum);
    row.stop_reason = solved.trace.stop_reason;
    row.wall_ms = wall_ms;
    result.rows.push_back(row);
    result.traces.push_back(std::move(solved.trace));

    result.mean_error += row.error;
    result.mean_wall_ms += wall_ms;
  }
  result.mean_error /= spec.repeats;
  result.mean_wall_ms /= spec.repeats;
  return result;
}

void write_summary_csv(std::ostream& os, const std::vector<RunSummary>& rows) {
  os << "run,seed,iters,final_f,error,stop_reason,wall_ms\n";
  for (const auto& r : rows) {
    os << r.run << ',' << r.seed << ',' << r.iters << ',' << fmt(r.final_f)
       << ',' << fmt(r.error) << ',' << stop_reason_name(r.stop_reason) << ','
       << fmt(r.wall_ms) << '\n';
  }
}

void write_summary_json(std::ostream& os,
                        const std::vector<RunSummary>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"run", r.run},
                   {"seed", r.seed},
                   {"iters", r.iters},
                   {"final_f", r.final_f},
                   {"error", r.error},
                   {"stop_reason", stop_reason_name(r.stop_reason)},
                   {"wall_ms", r.wall_ms}});
  }
  os << arr.dump(2) << '\n';
}

void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  os << "iter,f,grad_norm,feasibility,step,backtracks,wall_ms\n";
  for (const auto& rec : trace.records) {
    os << rec.iter << ',' << fmt(rec.f) << ',' << fmt(rec.grad_norm) << ','
       << fmt(rec.feasibility) << ',' << fmt(rec.step) << ',' << rec.backtracks
       << ',' << fmt(rec.wall_ms) << '\n';
  }
}

void write_trace_json(std::ostream& os, const IterationTrace& trace) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& rec : trace.records) {
    arr.push_back({{"iter", rec.iter},
                   {"f", rec.f},
                   {"grad_norm", rec.grad_norm},
                   {"feasibility", rec.feasibility},
                   {"step", rec.step},
                   {"backtracks", rec.backtracks},
                   {"wall_ms", rec.wall_ms}});
  }
  nlohmann::json out = {{"records", arr},
                        {"stop_reason", stop_reason_name(trace.stop_reason)}};
  os << out.dump(2) << '\n';
}

double fd_gradient_check(const Problem& problem, const StiefelPoint& X,
                         double h, int directions, SeededRng& rng) {
  double worst = 0.0;
  const Matrix G = problem.euclidean_gradient(X.matrix());
  for (int k = 0; k < directions; ++k) {
    Matrix D =
        stiefel_project_tangent(X, rand_gaussian(rng, X.n(), X.p())).matrix();
    const double norm = D.norm();
    if (norm < 1e-12) continue;
    D /= norm;
    const double analytic = (G.array() * D.array()).sum();
    const double fd = (problem.value(X.matrix() + h * D) -
                       problem.value(X.matrix() - h * D)) /
                      (2.0 * h);
    worst = std::max(worst, std::abs(analytic - fd) / (1.0 + std::abs(fd)));
  }
  return worst;
}

UnbiasednessReport unbiasedness_mc(int n, int p, int K, long trials,
                                   SeededRng& rng) {
  UnbiasednessReport report;
  report.n = n;
  report.K = K;
  report.trials = trials;
  report.exhaustive = trials == 0;

  SeededRng data_rng = rng.split(1);
  const StiefelPoint X(random_stiefel(n, p, data_rng));
  const Matrix G = rand_gaussian(data_rng, n, p);
  const Matrix A = G * X.matrix().transpose();
  const Matrix W = A - A.transpose();

  if (report.exhaustive) {
    const auto parts = enumerate_equal_partitions(n, K);
    Matrix mean = Matrix::Zero(n, n);
    for (const auto& part : parts) {
      mean += estimate_full_skew(block_skew_set(X, G, part)).matrix();
    }
    mean /= static_cast<double>(parts.size());
    report.max_deviation = (mean - W).cwiseAbs().maxCoeff();
    report.band = 1e-12;
    report.pass = report.max_deviation <= report.band;
    return report;
  }

  if (trials < 1000) {
    throw ConfigError("unbiasedness_mc: need trials >= 1e3 (or 0 for "
                      "exhaustive enumeration)");
  }
  SeededRng part_rng = rng.split(2);
  Matrix sum = Matrix::Zero(n, n);
  Matrix sum_sq = Matrix::Zero(n, n);
  for (long t = 0; t < trials; ++t) {
    const BlockPartition part = sample_partition(n, K, part_rng);
    const Matrix est = estimate_full_skew(block_skew_set(X, G, part)).matrix();
    sum += est;
    sum_sq += est.cwiseProduct(est);
  }
  const double T = static_cast<double>(trials);
  const Matrix mean = sum / T;
  const Matrix var =
      ((sum_sq / T - mean.cwiseProduct(mean)) * (T / (T - 1.0))).cwiseMax(0.0);
  const Matrix dev = (mean - W).cwiseAbs();
  const Matrix band = 5.0 / std::sqrt(T) * var.cwiseSqrt();

  report.pass = true;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (dev(i, j) > report.max_deviation) {
        report.max_deviation = dev(i, j);
        report.band = band(i, j);
      }
      // Absolute slack covers exactly-deterministic entries (the diagonal).
      if (dev(i, j) > band(i, j) + 1e-12) report.pass = false;
    }
  }
  return report;
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

LineFit least_squares(const std::vector<double>& xs,
                      const std::vector<double>& ys) {
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
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
      ss_res += r * r;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

}  // namespace

RateFitReport fit_loglog(const std::vector<int>& budgets,
                         const std::vector<double>& metrics) {
  if (budgets.size() != metrics.size()) {
    throw DimensionMismatch("fit_loglog: budgets/metrics size mismatch");
  }
  RateFitReport report;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < budgets.size(); ++i) {
    if (metrics[i] > 0.0) {
      report.budgets.push_back(budgets[i]);
      report.metrics.push_back(metrics[i]);
      lx.push_back(std::log(static_cast<double>(budgets[i])));
      ly.push_back(std::log(metrics[i]));
    }
  }
  if (lx.size() < 2) {
    throw NonpositiveMetric(
        "fit_loglog: fewer than two positive metrics after truncation");
  }
  const LineFit fit = least_squares(lx, ly);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  report.r_squared = fit.r_squared;
  return report;
}

RateFitReport rate_fit(ProblemKind problem, int n, int p,
                       const std::vector<int>& budgets, SolveConfig config,
                       bool stochastic_metric, int repeats) {
  if (budgets.size() < 4) {
    throw ConfigError("rate_fit: need at least 4 budgets");
  }
  if (repeats < 1) {
    throw ConfigError("rate_fit: repeats must be >= 1");
  }
  config.fixed_budget = true;

  std::vector<double> metrics;
  metrics.reserve(budgets.size());
  const SeededRng base(config.seed);
  for (int T : budgets) {
    if (T < 1) throw ConfigError("rate_fit: budgets must be >= 1");
    double metric = 0.0;
    for (int r = 0; r < repeats; ++r) {
      SeededRng run_rng = base.split(static_cast<std::uint64_t>(r) + 1);
      GeneratedProblem gp = generate(problem, n, p, run_rng);
      SolveConfig cfg = config;
      cfg.seed = run_rng.split(3).seed();
      cfg.max_iters = T;
      const SolveResult solved = run_solver(gp.solver_problem, cfg);
      if (stochastic_metric) {
        double acc = 0.0;
        const auto& recs = solved.trace.records;
        for (size_t t = 1; t < recs.size(); ++t) {
          acc += recs[t].grad_norm * recs[t].grad_norm;
        }
        metric += acc / static_cast<double>(recs.size() - 1);
      } else {
        metric += std::abs(solved.trace.records.back().f - gp.optimum);
      }
    }
    metrics.push_back(metric / repeats);
  }
  return fit_loglog(budgets, metrics);
}

RetractionProbeReport retraction_regularity_probe(int dim, int samples,
                                                  SeededRng& rng) {
  if (dim < 2 || samples < 1) {
    throw ConfigError("retraction_regularity_probe: need dim >= 2, "
                      "samples >= 1");
  }
  std::vector<double> log_t, log_gap;
  RetractionProbeReport report;

  constexpr int kGrid = 13;
  for (int s = 0; s < samples; ++s) {
    Vector raw = rand_gaussian(rng, dim, 1).col(0);
    const SpherePoint x(raw / raw.norm());
    Vector u = rand_gaussian(rng, dim, 1).col(0);
    u -= x.vector() * x.vector().dot(u);
    const double norm = u.norm();
    if (norm < 1e-8) continue;
    u /= norm;

    for (int g = 0; g < kGrid; ++g) {
      const double t = std::pow(10.0, -3.0 + 2.0 * g / (kGrid - 1));
      const SphereTangent step(x, t * u);
      const SpherePoint retracted = sphere_retract(x, step);
      const Vector pulled = sphere_log(x, retracted).vector();
      const double gap = (pulled - t * u).norm();
      report.max_ratio = std::max(report.max_ratio, gap / (t * t));
      if (gap > 0.0) {
        log_t.push_back(std::log(t));
        log_gap.push_back(std::log(gap));
      }
    }
  }
  if (log_t.size() < 2) {
    throw NonpositiveMetric("retraction_regularity_probe: no usable gaps");
  }
  report.fitted_exponent = least_squares(log_t, log_gap).slope;
  return report;
}

}  // namespace rmdopt
