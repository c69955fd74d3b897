#include "rmdopt/solver.hpp"

#include <chrono>
#include <cmath>

namespace rmdopt {

std::string method_name(Method m) {
  switch (m) {
    case Method::Cgd:
      return "cgd";
    case Method::CgdSmw:
      return "cgd-smw";
    case Method::Scgd:
      return "scgd";
    case Method::RmdExp:
      return "rmd-exp";
    case Method::RmdEuclid:
      return "rmd-euclid";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "cgd") return Method::Cgd;
  if (name == "cgd-smw") return Method::CgdSmw;
  if (name == "scgd") return Method::Scgd;
  if (name == "rmd-exp") return Method::RmdExp;
  if (name == "rmd-euclid") return Method::RmdEuclid;
  throw ConfigError("unknown method: " + name);
}

std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::GradTol:
      return "GradTol";
    case StopReason::XTol:
      return "XTol";
    case StopReason::FTol:
      return "FTol";
    case StopReason::MaxIters:
      return "MaxIters";
    case StopReason::LineSearchFail:
      return "LineSearchFail";
  }
  return "unknown";
}

StepPolicy StepPolicy::constant(double eta) {
  StepPolicy p;
  p.kind = StepPolicyKind::Constant;
  p.value = eta;
  return p;
}

StepPolicy StepPolicy::inverse_sqrt_t(double c) {
  StepPolicy p;
  p.kind = StepPolicyKind::InverseSqrtT;
  p.value = c;
  return p;
}

StepPolicy StepPolicy::inverse_pow23(double c) {
  StepPolicy p;
  p.kind = StepPolicyKind::InversePow23;
  p.value = c;
  return p;
}

StepPolicy StepPolicy::nonmonotone(LineSearchParams params) {
  StepPolicy p;
  p.kind = StepPolicyKind::NonmonotoneLineSearch;
  p.value = 0.0;
  p.line_search = params;
  return p;
}

double step_schedule(const StepPolicy& policy, int t, int T) {
  (void)t;  // schedules are constant over a run, scaled by the budget
  switch (policy.kind) {
    case StepPolicyKind::Constant:
      return policy.value;
    case StepPolicyKind::InverseSqrtT:
      if (T < 1) throw ConfigError("step_schedule: budget T must be >= 1");
      return policy.value / std::sqrt(static_cast<double>(T));
    case StepPolicyKind::InversePow23:
      if (T < 1) throw ConfigError("step_schedule: budget T must be >= 1");
      return policy.value / std::pow(static_cast<double>(T), 2.0 / 3.0);
    case StepPolicyKind::NonmonotoneLineSearch:
      // The driver runs the search; this is the first trial step.
      return policy.value > 0.0 ? policy.value : policy.line_search.eta_init;
  }
  throw ConfigError("step_schedule: unknown policy");
}

double theoretical_step_bound(const TheoryConstants& tc, bool stochastic) {
  if (tc.L_phi < 0.0 || tc.L_f < 0.0 || tc.r < 0.0 || !(tc.G > 0.0)) {
    throw ConfigError(
        "theoretical_step_bound: constants must be nonnegative with G > 0");
  }
  const double inf = std::numeric_limits<double>::infinity();
  const double den =
      stochastic
          ? tc.L_phi * tc.G + 2.0 * tc.L_f + 2.0 * tc.L_f * tc.L_phi * tc.L_phi
          : tc.L_phi * tc.G / 2.0 + tc.L_f + tc.L_f * tc.L_phi * tc.L_phi;
  const double term1 = den > 0.0 ? 1.0 / den : inf;
  const double term2 = 2.0 / tc.G;
  const double term3 = tc.r / tc.G;
  return std::min({term1, term2, term3});
}

std::optional<StopReason> check_stop(double grad_norm,
                                     std::optional<double> dx,
                                     std::optional<double> df,
                                     const SolveConfig& config) {
  if (grad_norm <= config.tol_grad) return StopReason::GradTol;
  if (dx && *dx <= config.tol_x) return StopReason::XTol;
  if (df && *df <= config.tol_f) return StopReason::FTol;
  return std::nullopt;
}

bool nonmonotone_accept(double f_candidate, double C_t, double eta,
                        double grad_norm_sq, const LineSearchParams& params) {
  return f_candidate <= C_t - params.delta * eta * grad_norm_sq;
}

std::pair<double, double> nonmonotone_update(double C_t, double Q_t,
                                             double f_next,
                                             const LineSearchParams& params) {
  const double Q_next = params.gamma * Q_t + 1.0;
  const double C_next = (params.gamma * Q_t * C_t + f_next) / Q_next;
  return {C_next, Q_next};
}

namespace {

Vector flatten(const Matrix& M) {
  return Eigen::Map<const Vector>(M.data(), M.size());
}

Matrix unflatten(const Vector& v, Index n, Index p) {
  return Eigen::Map<const Matrix>(v.data(), n, p);
}

double feasibility_residual(const Matrix& X) {
  const Index p = X.cols();
  return (X.transpose() * X - Matrix::Identity(p, p)).norm();
}

// Riemannian gradient W X = G (X^T X) - X (G^T X) without forming the
// n x n skew factor.
Matrix stiefel_riem_grad(const Matrix& X, const Matrix& G) {
  return G * (X.transpose() * X) - X * (G.transpose() * X);
}

struct MethodState {
  // Cached per-iteration data, refreshed by prepare().
  std::optional<SkewMatrix> W;
  std::optional<BlockPartition> partition;
};

}  // namespace

SolveResult run_solver(const Problem& problem, const SolveConfig& config) {
  if (config.max_iters < 0) {
    throw ConfigError("run_solver: max_iters must be >= 0");
  }
  if (!problem.value || !problem.euclidean_gradient) {
    throw ConfigError("run_solver: problem must supply value and gradient");
  }
  const Index n = problem.n;
  const Index p = problem.p;
  if (problem.initial_point.rows() != n || problem.initial_point.cols() != p) {
    throw ConfigError("run_solver: initial point has wrong shape");
  }
  if (config.method == Method::RmdExp && p != 1) {
    throw ConfigError("run_solver: rmd-exp runs on the sphere (p = 1)");
  }

  SeededRng rng(config.seed);
  SeededRng partition_rng = rng.split(0x5c6d);

  MethodState state;

  auto prepare = [&](const Matrix& X, const Matrix& G) {
    switch (config.method) {
      case Method::Cgd:
        state.W = riemannian_gradient_stiefel(StiefelPoint(X), G).first;
        break;
      case Method::Scgd:
        state.partition = sample_partition(static_cast<int>(n), config.blocks,
                                           partition_rng);
        break;
      default:
        break;
    }
  };

  auto riem_grad_norm = [&](const Matrix& X, const Matrix& G) -> double {
    switch (config.method) {
      case Method::RmdEuclid:
        return G.norm();
      default:
        return stiefel_riem_grad(X, G).norm();
    }
  };

  auto take_step = [&](const Matrix& X, const Matrix& G,
                       double eta) -> Matrix {
    switch (config.method) {
      case Method::Cgd:
        return cgd_update(StiefelPoint(X), *state.W, eta).matrix();
      case Method::CgdSmw:
        return cgd_update_smw(StiefelPoint(X), G, eta).matrix();
      case Method::Scgd:
        return scgd_step(StiefelPoint(X), G, eta, *state.partition,
                         config.scale_unbiased, config.num_threads)
            .matrix();
      case Method::RmdExp: {
        const SpherePoint x(X.col(0));
        const Vector g = G.col(0) - x.vector() * x.vector().dot(G.col(0));
        const SphereExpMirror mirror = make_exp_mirror(x);
        Matrix next(n, 1);
        next.col(0) = rmd_step(x, g, eta, mirror).vector();
        return next;
      }
      case Method::RmdEuclid: {
        static const Potential sq = squared_norm_potential();
        const EuclideanMirror mirror = make_euclidean_mirror(sq, flatten(X));
        return unflatten(rmd_step(flatten(X), flatten(G), eta, mirror), n, p);
      }
    }
    throw ConfigError("run_solver: unknown method");
  };

  IterationTrace trace;
  Matrix X = problem.initial_point;
  if (config.method != Method::RmdEuclid) {
    StiefelPoint validate(X);  // rejects infeasible starts
    (void)validate;
  }

  double f = problem.value(X);
  Matrix G = problem.euclidean_gradient(X);
  double grad_norm = riem_grad_norm(X, G);

  trace.records.push_back(
      {0, f, grad_norm, feasibility_residual(X), 0.0, 0, 0.0});

  const bool line_search =
      config.step_policy.kind == StepPolicyKind::NonmonotoneLineSearch;
  const LineSearchParams& ls = config.step_policy.line_search;
  const double eta_start = config.step_policy.value > 0.0 && line_search
                               ? config.step_policy.value
                               : ls.eta_init;
  double C = f;
  double Q = 1.0;
  double prev_eta = eta_start * ls.backtrack;

  trace.stop_reason = StopReason::MaxIters;
  for (int t = 0; t < config.max_iters; ++t) {
    const auto tic = std::chrono::steady_clock::now();
    Matrix X_next;
    double f_next = 0.0;
    double eta_used = 0.0;
    int backtracks = 0;
    try {
      prepare(X, G);
      if (line_search) {
        double eta = std::min(eta_start, prev_eta / ls.backtrack);
        const double g2 = grad_norm * grad_norm;
        bool accepted = false;
        for (int k = 0; k <= ls.max_backtracks; ++k) {
          bool in_chart = true;
          try {
            X_next = take_step(X, G, eta);
          } catch (const OutOfChart&) {
            // A trial step past the chart radius is an ordinary rejection;
            // only an exhausted search is an error.
            in_chart = false;
          }
          if (in_chart) {
            f_next = problem.value(X_next);
            if (nonmonotone_accept(f_next, C, eta, g2, ls)) {
              accepted = true;
              backtracks = k;
              break;
            }
          }
          eta *= ls.backtrack;
        }
        if (!accepted) {
          trace.stop_reason = StopReason::LineSearchFail;
          break;
        }
        eta_used = eta;
        prev_eta = eta;
      } else {
        eta_used = step_schedule(config.step_policy, t, config.max_iters);
        X_next = take_step(X, G, eta_used);
        f_next = problem.value(X_next);
      }
    } catch (Error& e) {
      e.prepend_context("run_solver: iteration " + std::to_string(t));
      throw;
    }

    const double dx = (X_next - X).norm();
    const double df = std::abs(f_next - f);

    X = std::move(X_next);
    f = f_next;
    G = problem.euclidean_gradient(X);
    grad_norm = riem_grad_norm(X, G);
    std::tie(C, Q) = nonmonotone_update(C, Q, f, ls);

    const double wall_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - tic)
            .count();
    trace.records.push_back({t + 1, f, grad_norm, feasibility_residual(X),
                             eta_used, backtracks, wall_ms});

    if (!config.fixed_budget) {
      if (auto reason = check_stop(grad_norm, dx, df, config)) {
        trace.stop_reason = *reason;
        break;
      }
    }
  }

  return {std::move(X), std::move(trace)};
}

}  // namespace rmdopt
