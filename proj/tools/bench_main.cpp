#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmdopt/bench.hpp"

namespace {

using namespace rmdopt;

int env_threads() {
  const char* raw = std::getenv("RMD_NUM_THREADS");
  if (!raw) return 1;
  const int v = std::atoi(raw);
  return v > 0 ? v : 1;
}

// eta == 0 means "not set": each policy falls back to its default scale.
StepPolicy make_policy(const std::string& name, double eta) {
  if (name == "const") return StepPolicy::constant(eta > 0.0 ? eta : 1e-3);
  if (name == "invsqrt") {
    return StepPolicy::inverse_sqrt_t(eta > 0.0 ? eta : 1.0);
  }
  if (name == "invpow23") {
    return StepPolicy::inverse_pow23(eta > 0.0 ? eta : 1.0);
  }
  if (name == "linesearch") {
    LineSearchParams params;
    if (eta > 0.0) params.eta_init = eta;
    return StepPolicy::nonmonotone(params);
  }
  throw ConfigError("unknown step policy: " + name);
}

std::vector<int> parse_budgets(const std::string& csv) {
  std::vector<int> budgets;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) budgets.push_back(std::stoi(tok));
  }
  return budgets;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open output file: " + path);
  return os;
}

void dump_traces(const ExperimentSpec& spec, const BenchmarkResult& result) {
  if (spec.trace_path.empty()) return;
  for (size_t r = 0; r < result.traces.size(); ++r) {
    std::string path = spec.trace_path;
    if (result.traces.size() > 1) {
      const auto dot = path.rfind('.');
      const std::string tag = ".run" + std::to_string(r);
      path = dot == std::string::npos
                 ? path + tag
                 : path.substr(0, dot) + tag + path.substr(dot);
    }
    auto os = open_out(path);
    if (spec.format == "json") {
      write_trace_json(os, result.traces[r]);
    } else {
      write_trace_csv(os, result.traces[r]);
    }
  }
}

int run_main_benchmark(const ExperimentSpec& spec) {
  const BenchmarkResult result = run_benchmark(spec);
  if (!spec.out_path.empty()) {
    auto os = open_out(spec.out_path);
    if (spec.format == "json") {
      write_summary_json(os, result.rows);
    } else {
      write_summary_csv(os, result.rows);
    }
  } else {
    if (spec.format == "json") {
      write_summary_json(std::cout, result.rows);
    } else {
      write_summary_csv(std::cout, result.rows);
    }
  }
  dump_traces(spec, result);
  std::cerr << "mean_error=" << result.mean_error
            << " mean_wall_ms=" << result.mean_wall_ms << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian mirror descent benchmark harness"};
  app.require_subcommand(0, 1);

  std::string problem = "eig";
  int n = 100, p = 10;
  std::string method = "cgd";
  int blocks = -1;  // -1: default heuristic max(1, n/300) for scgd
  double eta = 0.0;  // 0: policy default
  std::string step_policy = "const";
  int max_iters = 1000;
  std::uint64_t seed = 0;
  int repeats = 5;
  double tol_grad = 1e-5, tol_x = 1e-5, tol_f = 1e-8;
  bool scale_unbiased = false, fixed_budget = false;
  std::string out_path, trace_path, format = "csv";

  auto add_problem_flags = [&](CLI::App* cmd) {
    cmd->add_option("--problem", problem, "eig | procrustes")
        ->check(CLI::IsMember({"eig", "procrustes"}));
    cmd->add_option("--n", n, "ambient rows");
    cmd->add_option("--p", p, "frame columns");
    cmd->add_option("--seed", seed, "base seed");
  };
  auto add_method_flags = [&](CLI::App* cmd) {
    cmd->add_option("--method", method,
                    "cgd | cgd-smw | scgd | rmd-exp | rmd-euclid")
        ->check(
            CLI::IsMember({"cgd", "cgd-smw", "scgd", "rmd-exp", "rmd-euclid"}));
    cmd->add_option("--blocks", blocks, "SCGD block count K");
    cmd->add_option("--eta", eta,
                    "step size (or schedule constant; default per policy)");
    cmd->add_option("--step-policy", step_policy,
                    "const | invsqrt | invpow23 | linesearch")
        ->check(CLI::IsMember({"const", "invsqrt", "invpow23", "linesearch"}));
    cmd->add_option("--max-iters", max_iters, "iteration budget");
    cmd->add_flag("--scale-unbiased", scale_unbiased,
                  "scale SCGD blocks to the unbiased estimator");
    cmd->add_flag("--fixed-budget", fixed_budget,
                  "disable the stopping criteria");
  };
  auto add_output_flags = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output file");
    cmd->add_option("--format", format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  add_problem_flags(&app);
  add_method_flags(&app);
  add_output_flags(&app);
  app.add_option("--repeats", repeats, "number of seeded runs");
  TheoryConstants theory;
  app.add_option("--L-phi", theory.L_phi, "chart regularity constant");
  app.add_option("--G-bound", theory.G, "gradient-norm bound");
  app.add_option("--L-f", theory.L_f, "smoothness constant");
  app.add_option("--radius", theory.r, "chart validity radius");
  app.add_option("--sigma2", theory.sigma2, "stochastic variance bound");
  app.add_option("--tol-grad", tol_grad, "gradient-norm stop threshold");
  app.add_option("--tol-x", tol_x, "iterate-movement stop threshold");
  app.add_option("--tol-f", tol_f, "objective-movement stop threshold");
  app.add_option("--trace-out", trace_path, "per-iteration trace file");

  auto* diag = app.add_subcommand("diag", "diagnostics suite");
  diag->require_subcommand(1);

  auto* fdcheck = diag->add_subcommand(
      "fdcheck", "finite-difference check of the problem gradients");
  double fd_h = 1e-6, fd_tol = 1e-6;
  int fd_dirs = 20;
  add_problem_flags(fdcheck);
  fdcheck->add_option("--fd-step", fd_h, "central-difference step");
  fdcheck->add_option("--directions", fd_dirs, "tangent directions");
  fdcheck->add_option("--tol", fd_tol, "pass threshold");

  auto* unbiased = diag->add_subcommand(
      "unbiased", "Monte-Carlo / exhaustive block-estimator unbiasedness");
  long trials = 100000;
  add_problem_flags(unbiased);
  unbiased->add_option("--blocks", blocks, "block count K");
  unbiased->add_option("--trials", trials,
                       "partition samples (0: exhaustive enumeration)");

  auto* ratefit = diag->add_subcommand(
      "ratefit", "log-log convergence-rate fit over fixed budgets");
  std::string budgets_csv = "50,100,200,400,800";
  std::string metric = "auto";
  int fit_repeats = 1;
  add_problem_flags(ratefit);
  add_method_flags(ratefit);
  add_output_flags(ratefit);
  ratefit->add_option("--budgets", budgets_csv, "comma-separated budgets");
  ratefit->add_option("--metric", metric, "gap | grad | auto")
      ->check(CLI::IsMember({"gap", "grad", "auto"}));
  ratefit->add_option("--repeats", fit_repeats, "seeds averaged per budget");

  auto* retraction = diag->add_subcommand(
      "retraction", "sphere retraction-vs-exponential regularity probe");
  int probe_dim = 8, probe_samples = 50;
  double min_exponent = 1.9;
  retraction->add_option("--dim", probe_dim, "sphere ambient dimension");
  retraction->add_option("--samples", probe_samples, "random (x,u) samples");
  retraction->add_option("--min-exponent", min_exponent, "pass threshold");
  retraction->add_option("--seed", seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    SolveConfig config;
    config.max_iters = max_iters;
    config.tol_grad = tol_grad;
    config.tol_x = tol_x;
    config.tol_f = tol_f;
    config.seed = seed;
    config.method = parse_method(method);
    config.scale_unbiased = scale_unbiased;
    config.fixed_budget = fixed_budget;
    config.num_threads = env_threads();
    config.step_policy = make_policy(step_policy, eta);
    if (config.method == Method::Scgd) {
      config.blocks = blocks > 0 ? blocks : std::max(1, n / 300);
    } else {
      config.blocks = std::max(1, blocks);
    }

    if (fdcheck->parsed()) {
      SeededRng rng(seed);
      SeededRng data_rng = rng.split(1);
      const ProblemKind kind = parse_problem(problem);
      Problem gp;
      if (kind == ProblemKind::Eig) {
        const EigProblem pr = eig_generate(n, p, data_rng);
        gp = make_solver_problem(pr, random_stiefel(n, p, data_rng));
      } else {
        const ProcrustesProblem pr = procrustes_generate(n, p, data_rng);
        gp = make_solver_problem(pr, random_stiefel(n, p, data_rng));
      }
      SeededRng dir_rng = rng.split(2);
      const double err =
          fd_gradient_check(gp, StiefelPoint(gp.initial_point), fd_h, fd_dirs,
                            dir_rng);
      const bool pass = err <= fd_tol;
      std::cout << "fdcheck problem=" << problem << " n=" << n << " p=" << p
                << " max_rel_err=" << err << " tol=" << fd_tol << " "
                << (pass ? "PASS" : "FAIL") << "\n";
      return pass ? 0 : 1;
    }

    if (unbiased->parsed()) {
      SeededRng rng(seed);
      const int K = blocks > 0 ? blocks : std::max(1, n / 300);
      const auto report = unbiasedness_mc(n, p, K, trials, rng);
      std::cout << "unbiased n=" << n << " p=" << p << " K=" << K
                << (report.exhaustive
                        ? std::string(" mode=exhaustive")
                        : " trials=" + std::to_string(report.trials))
                << " max_dev=" << report.max_deviation
                << " band=" << report.band << " "
                << (report.pass ? "PASS" : "FAIL") << "\n";
      return report.pass ? 0 : 1;
    }

    if (ratefit->parsed()) {
      const bool stochastic = metric == "auto"
                                  ? config.method == Method::Scgd
                                  : metric == "grad";
      const auto report =
          rate_fit(parse_problem(problem), n, p, parse_budgets(budgets_csv),
                   config, stochastic, fit_repeats);
      std::cout << "ratefit slope=" << report.slope
                << " intercept=" << report.intercept
                << " r2=" << report.r_squared << "\n";
      for (size_t i = 0; i < report.budgets.size(); ++i) {
        std::cout << "  T=" << report.budgets[i]
                  << " metric=" << report.metrics[i] << "\n";
      }
      if (!out_path.empty()) {
        auto os = open_out(out_path);
        if (format == "json") {
          os << "{\"slope\": " << report.slope
             << ", \"intercept\": " << report.intercept
             << ", \"r_squared\": " << report.r_squared << "}\n";
        } else {
          os << "budget,metric\n";
          for (size_t i = 0; i < report.budgets.size(); ++i) {
            os << report.budgets[i] << ',' << report.metrics[i] << '\n';
          }
        }
      }
      return 0;
    }

    if (retraction->parsed()) {
      SeededRng rng(seed);
      const auto report =
          retraction_regularity_probe(probe_dim, probe_samples, rng);
      const bool pass = report.fitted_exponent >= min_exponent;
      std::cout << "retraction dim=" << probe_dim
                << " max_ratio=" << report.max_ratio
                << " fitted_exponent=" << report.fitted_exponent << " "
                << (pass ? "PASS" : "FAIL") << "\n";
      return pass ? 0 : 1;
    }

    ExperimentSpec spec;
    spec.problem = parse_problem(problem);
    spec.n = n;
    spec.p = p;
    spec.solve = config;
    spec.repeats = repeats;
    spec.format = format;
    spec.out_path = out_path;
    spec.trace_path = trace_path;

    if (theory.G > 0.0) {
      // Diagnostic only: the bound is printed and compared, never enforced.
      const bool stochastic = config.method == Method::Scgd;
      const double bound = theoretical_step_bound(theory, stochastic);
      const double eta_used =
          step_schedule(config.step_policy, 0, std::max(1, config.max_iters));
      std::cerr << "theoretical step bound ("
                << (stochastic ? "stochastic" : "deterministic")
                << ") = " << bound << ", configured eta = " << eta_used
                << (eta_used < bound ? " (within bound)" : " (exceeds bound)")
                << "\n";
    }
    return run_main_benchmark(spec);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidK& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
