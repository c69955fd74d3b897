#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rmdopt/problems.hpp"

namespace rmdopt {

enum class ProblemKind { Eig, Procrustes };

ProblemKind parse_problem(const std::string& name);
std::string problem_name(ProblemKind kind);

/// One benchmark configuration: `repeats` independently seeded instances of
/// the chosen problem solved by the chosen method.
struct ExperimentSpec {
  ProblemKind problem = ProblemKind::Eig;
  int n = 100;
  int p = 10;
  SolveConfig solve;
  int repeats = 5;
  std::string format = "csv";  // csv | json
  std::string out_path;        // empty: stdout summary only
  std::string trace_path;      // optional per-iteration trace dump
};

struct RunSummary {
  int run = 0;
  std::uint64_t seed = 0;
  int iters = 0;
  double final_f = 0.0;
  /// |f(x_T) - f*| against the problem's optimal-value oracle.
  double error = 0.0;
  StopReason stop_reason = StopReason::MaxIters;
  double wall_ms = 0.0;
};

struct BenchmarkResult {
  std::vector<RunSummary> rows;
  std::vector<IterationTrace> traces;
  double mean_error = 0.0;
  double mean_wall_ms = 0.0;
};

BenchmarkResult run_benchmark(const ExperimentSpec& spec);

/// Summary rows: header `run,seed,iters,final_f,error,stop_reason,wall_ms`.
void write_summary_csv(std::ostream& os, const std::vector<RunSummary>& rows);
void write_summary_json(std::ostream& os, const std::vector<RunSummary>& rows);

/// Trace rows: header `iter,f,grad_norm,feasibility,step,backtracks,wall_ms`.
void write_trace_csv(std::ostream& os, const IterationTrace& trace);
void write_trace_json(std::ostream& os, const IterationTrace& trace);

/// Central-difference check of the Euclidean gradient along `directions`
/// random tangent directions; returns the largest relative error
/// |<G, D> - fd| / (1 + |fd|).
double fd_gradient_check(const Problem& problem, const StiefelPoint& X,
                         double h, int directions, SeededRng& rng);

struct UnbiasednessReport {
  int n = 0;
  int K = 0;
  long trials = 0;    // 0 in exhaustive mode
  bool exhaustive = false;
  double max_deviation = 0.0;
  /// Tolerance at the worst entry: 5 * std / sqrt(trials) for Monte Carlo,
  /// 1e-12 for exhaustive enumeration.
  double band = 0.0;
  bool pass = false;
};

/// Averages the scaled block-skew estimator over partitions at a fixed
/// random (X, G) and compares with the full W entrywise. trials == 0
/// enumerates all equal-size partitions (requires K | n).
UnbiasednessReport unbiasedness_mc(int n, int p, int K, long trials,
                                   SeededRng& rng);

struct RateFitReport {
  std::vector<int> budgets;
  std::vector<double> metrics;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of log(metric) against log(budget). Nonpositive
/// metrics are dropped (budget truncation); fewer than two surviving points
/// throws NonpositiveMetric.
RateFitReport fit_loglog(const std::vector<int>& budgets,
                         const std::vector<double>& metrics);

/// Fixed-budget convergence-rate measurement. For each budget T the solver
/// runs exactly T iterations; the decay metric is the final objective gap
/// |f(x_T) - f*| in the deterministic setting and the running mean of the
/// squared Riemannian gradient norm in the stochastic one
/// (stochastic_metric = true). Runs are averaged over `repeats` seeds.
RateFitReport rate_fit(ProblemKind problem, int n, int p,
                       const std::vector<int>& budgets, SolveConfig config,
                       bool stochastic_metric, int repeats = 1);

struct RetractionProbeReport {
  /// max over samples of ||Exp^{-1}(R(t u)) - t u|| / ||t u||^2
  /// (an empirical bound on half the chart-regularity constant).
  double max_ratio = 0.0;
  /// Pooled log-log slope of the gap against t.
  double fitted_exponent = 0.0;
};

/// Measures the gap between the projection retraction and the exponential
/// map on the unit sphere over t in [1e-3, 1e-1].
RetractionProbeReport retraction_regularity_probe(int dim, int samples,
                                                  SeededRng& rng);

}  // namespace rmdopt
