#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rmdopt/mirror.hpp"
#include "rmdopt/scgd.hpp"

namespace rmdopt {

enum class Method { Cgd, CgdSmw, Scgd, RmdExp, RmdEuclid };

std::string method_name(Method m);
Method parse_method(const std::string& name);

enum class StepPolicyKind {
  Constant,
  InverseSqrtT,
  InversePow23,
  NonmonotoneLineSearch,
};

/// Non-monotone line-search parameters. Acceptance of a trial step eta at
/// reference value C_t:
///   f(x(eta)) <= C_t - delta * eta * ||grad||^2
/// followed by the reference recursion
///   Q_{t+1} = gamma Q_t + 1,   C_{t+1} = (gamma Q_t C_t + f_{t+1}) / Q_{t+1}.
/// gamma = 0 degenerates to monotone Armijo (C_t = f_t).
struct LineSearchParams {
  double gamma = 0.85;
  double delta = 1e-4;
  double backtrack = 0.5;
  double eta_init = 1e-1;
  int max_backtracks = 30;
};

struct StepPolicy {
  StepPolicyKind kind = StepPolicyKind::Constant;
  /// eta for Constant; the constant c for the budget-scaled schedules;
  /// overrides eta_init for NonmonotoneLineSearch when positive.
  double value = 1e-3;
  LineSearchParams line_search;

  static StepPolicy constant(double eta);
  static StepPolicy inverse_sqrt_t(double c);
  static StepPolicy inverse_pow23(double c);
  static StepPolicy nonmonotone(LineSearchParams params = {});
};

/// Step size for iteration t of a T-iteration budget. The scaled schedules
/// are constant over the run: c / sqrt(T) and c / T^{2/3}.
double step_schedule(const StepPolicy& policy, int t, int T);

/// User-supplied constants for the theoretical step-size bounds: chart
/// regularity L_phi within radius r, gradient bound G, smoothness L_f, and
/// the stochastic variance sigma2. Diagnostics only, never enforced.
struct TheoryConstants {
  double L_phi = 0.0;
  double G = 0.0;
  double L_f = 0.0;
  double r = std::numeric_limits<double>::infinity();
  double sigma2 = 0.0;
};

/// min{ 1/(L_phi G/2 + L_f + L_f L_phi^2), 2/G, r/G } for deterministic
/// steps; the stochastic variant uses 1/(L_phi G + 2 L_f + 2 L_f L_phi^2).
double theoretical_step_bound(const TheoryConstants& tc, bool stochastic);

enum class StopReason { GradTol, XTol, FTol, MaxIters, LineSearchFail };

std::string stop_reason_name(StopReason r);

struct IterationRecord {
  int iter = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  double feasibility = 0.0;
  double step = 0.0;
  int backtracks = 0;
  double wall_ms = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  StopReason stop_reason = StopReason::MaxIters;
};

struct SolveConfig {
  int max_iters = 1000;
  double tol_grad = 1e-5;
  double tol_x = 1e-5;
  double tol_f = 1e-8;
  StepPolicy step_policy;
  std::uint64_t seed = 0;
  Method method = Method::Cgd;
  int blocks = 1;
  bool scale_unbiased = false;
  /// Disables the stopping criteria (rate measurements want the full budget).
  bool fixed_budget = false;
  int num_threads = 1;
};

/// First satisfied criterion in the order gradient norm, iterate movement,
/// objective movement (thresholds tol_grad, tol_x, tol_f); nullopt when the
/// iteration should continue. dx and df are absent before two iterates
/// exist.
std::optional<StopReason> check_stop(double grad_norm,
                                     std::optional<double> dx,
                                     std::optional<double> df,
                                     const SolveConfig& config);

bool nonmonotone_accept(double f_candidate, double C_t, double eta,
                        double grad_norm_sq, const LineSearchParams& params);

/// Returns (C_{t+1}, Q_{t+1}).
std::pair<double, double> nonmonotone_update(double C_t, double Q_t,
                                             double f_next,
                                             const LineSearchParams& params);

/// Objective on (a subset of) R^{n x p}: value, Euclidean gradient, and a
/// feasible initial point.
struct Problem {
  Index n = 0;
  Index p = 0;
  std::function<double(const Matrix&)> value;
  std::function<Matrix(const Matrix&)> euclidean_gradient;
  Matrix initial_point;
};

struct SolveResult {
  Matrix x;
  IterationTrace trace;
};

/// Iteration driver: runs the configured method from problem.initial_point,
/// evaluating the stopping criteria each iteration and recording a trace.
/// Deterministic given config.seed. Step errors (OutOfChart,
/// SingularMatrix, ...) propagate with iteration context prepended.
SolveResult run_solver(const Problem& problem, const SolveConfig& config);

}  // namespace rmdopt
