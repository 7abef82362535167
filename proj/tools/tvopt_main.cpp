#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "tvopt/dp_subproblem.hpp"
#include "tvopt/harness.hpp"
#include "tvopt/io.hpp"
#include "tvopt/optimality.hpp"
#include "tvopt/trust_region.hpp"

namespace {

using namespace tvopt;

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  nlohmann::json j;
  in >> j;
  return j;
}

const char* status_text(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::RadiusExhausted: return "stationary at grid resolution";
    case SolveStatus::IterationLimit: return "iteration limit reached";
  }
  return "unknown";
}

struct SolveOptions {
  std::string model = "lvm";
  int cells = 512;
  std::string p;
  std::optional<double> beta;
  std::uint64_t seed = 0;
  std::optional<int> sigma_max;
  std::string out_dir;
  std::string config;
  std::string start_file;
  TrustRegionConfig tr;
};

int run_solve(const SolveOptions& opt) {
  const auto model = make_model(opt.model, opt.cells, load_config(opt.config));
  const PNorm p = opt.p.empty() ? default_pnorm(opt.model) : PNorm::parse(opt.p);
  const double beta = opt.beta.value_or(default_beta(opt.model));

  ControlGrid start = opt.start_file.empty()
                          ? random_start(*model, opt.seed)
                          : read_control_file(opt.start_file, model->alphabet(),
                                              model->grid().horizon);
  const MinimizeResult result = minimize(*model, start, opt.tr, p, beta, opt.sigma_max);
  const FirstOrderReport stationarity = first_order(*model, result.control);

  std::cout << std::setprecision(10);
  std::cout << "status            " << status_text(result.status) << "\n"
            << "objective         " << result.objective << "\n"
            << "tracking term     " << result.tracking << "\n"
            << "tv term           " << result.tv << " (beta " << beta << ", p " << p.str()
            << ")\n"
            << "outer iterations  " << result.outer_iterations << "\n"
            << "residual norm     " << stationarity.residual_norm << "\n"
            << "wall time [s]     " << result.seconds_total << "\n";

  if (!opt.out_dir.empty()) {
    emit_solution(*model, result.control, opt.out_dir);
    std::ofstream trace(opt.out_dir + "/trace.csv");
    write_trace_csv(trace, result.trace);
    std::cout << "outputs written to " << opt.out_dir << "\n";
  }
  return 0;
}

int run_bench(const std::string& spec_path) {
  const BenchmarkSpec spec = load_benchmark_spec(spec_path);
  const BenchmarkResult result = run_benchmark(spec);
  print_benchmark_summary(std::cout, result);
  if (!spec.out_dir.empty()) {
    write_benchmark_files(result, spec.out_dir);
    std::cout << "per-sample rows written to " << spec.out_dir << "/samples.csv\n";
  }
  return 0;
}

struct CheckOptions {
  std::string model = "lvm";
  std::string control_file;
  std::string config;
  std::string csv_path;
  double fd_step = 1e-4;
};

int run_check(const CheckOptions& opt) {
  // cell count comes from the control file
  const SamplesFile probe = read_samples_file(opt.control_file);
  const auto model = make_model(opt.model, probe.values.rows(), load_config(opt.config));
  const ControlGrid u =
      read_control_file(opt.control_file, model->alphabet(), model->grid().horizon);

  const RowMatrix g = model->gradient(u);
  const FirstOrderReport fo = first_order(u, g);
  const SecondOrderReport so = second_order(*model, u, opt.fd_step);

  double gmax = 0.0;
  for (int j = 0; j < g.rows(); ++j) {
    for (int c = 0; c < g.cols(); ++c) gmax = std::max(gmax, std::abs(g(j, c)));
  }
  const double tol = 1e-3 * std::max(gmax, 1e-30);

  std::cout << std::setprecision(6);
  std::cout << std::left << std::setw(8) << "switch" << std::setw(14) << "time" << std::setw(20)
            << "jump" << std::setw(16) << "residual" << std::setw(16) << "rate" << std::setw(10)
            << "in J" << '\n';
  for (size_t j = 0; j < fo.switch_times.size(); ++j) {
    std::string jump = "(";
    for (size_t k = 0; k < fo.jumps[j].size(); ++k) {
      jump += std::to_string(fo.jumps[j][k]);
      jump += k + 1 < fo.jumps[j].size() ? "," : ")";
    }
    const bool in_lambda =
        std::find(so.lambda_active.begin(), so.lambda_active.end(), static_cast<int>(j)) !=
        so.lambda_active.end();
    std::cout << std::left << std::setw(8) << j + 1 << std::setw(14) << fo.switch_times[j]
              << std::setw(20) << jump << std::setw(16) << fo.residuals[j] << std::setw(16)
              << so.gradient_rate[j] << std::setw(10) << (in_lambda ? "yes" : "no") << '\n';
  }
  std::cout << "residual norm      " << fo.residual_norm << '\n'
            << "first-order pass   " << (fo.residual_norm <= tol ? "yes" : "no") << " (tol "
            << tol << ")\n"
            << "min eigenvalue     " << so.min_eigenvalue << '\n'
            << "SONC rate/form     " << (so.sonc_rate ? "yes" : "no") << " / "
            << (so.sonc_form ? "yes" : "no") << '\n'
            << "SOEC rate/form     " << (so.soec_rate ? "yes" : "no") << " / "
            << (so.soec_form ? "yes" : "no") << '\n';

  if (!opt.csv_path.empty()) {
    std::ofstream out(opt.csv_path);
    if (!out) throw std::runtime_error("cannot write '" + opt.csv_path + "'");
    out << "switch,time,residual,rate,in_lambda_set\n" << std::setprecision(17);
    for (size_t j = 0; j < fo.switch_times.size(); ++j) {
      const bool in_lambda =
          std::find(so.lambda_active.begin(), so.lambda_active.end(), static_cast<int>(j)) !=
          so.lambda_active.end();
      out << j + 1 << ',' << fo.switch_times[j] << ',' << fo.residuals[j] << ','
          << so.gradient_rate[j] << ',' << (in_lambda ? 1 : 0) << '\n';
    }
    std::cout << "csv written to " << opt.csv_path << '\n';
  }
  return 0;
}

struct SubproblemOptions {
  std::string v_file;
  std::string g_file;
  std::string alphabet_file;
  int budget = 0;
  double beta = 0.0;
  std::string p = "2";
  std::optional<int> sigma_max;
  std::string out_file;
};

int run_subproblem(const SubproblemOptions& opt) {
  const AlphabetPtr alphabet = read_alphabet_file(opt.alphabet_file);
  const ControlGrid v = read_control_file(opt.v_file, alphabet);
  const SamplesFile g = read_samples_file(opt.g_file);
  if (g.values.rows() != v.cells() || g.values.cols() != alphabet->dim()) {
    throw std::runtime_error("gradient file does not match the control file");
  }

  const SolveResult result = solve(SubproblemInstance{
      v, g.values, PNorm::parse(opt.p), opt.beta, opt.budget, opt.sigma_max});
  std::cout << std::setprecision(17) << "value " << result.best.value << '\n';
  if (!opt.out_file.empty()) {
    write_control_file(opt.out_file, result.best.control);
  } else {
    const ControlGrid& u = result.best.control;
    std::cout << "t";
    for (int m = 0; m < alphabet->dim(); ++m) std::cout << " u" << (m + 1);
    std::cout << '\n';
    for (int j = 0; j < u.cells(); ++j) {
      std::cout << j * u.dt();
      for (int value : alphabet->value(u.index(j))) std::cout << ' ' << value;
      std::cout << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trust-region solver for integer optimal control with switching costs"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve_cmd = app.add_subcommand("solve", "run the trust-region method from a random start");
  solve_cmd->add_option("--model", solve_opt.model, "lvm or heat")->required();
  solve_cmd->add_option("--n", solve_opt.cells, "number of time cells")->required();
  solve_cmd->add_option("--p", solve_opt.p, "TV norm exponent (number or 'inf')");
  double beta_value = 0.0;
  auto* beta_flag = solve_cmd->add_option("--beta", beta_value, "switching cost weight");
  solve_cmd->add_option("--seed", solve_opt.seed, "random start seed");
  int sigma_value = 0;
  auto* sigma_flag = solve_cmd->add_option("--sigma-max", sigma_value, "switch count bound");
  solve_cmd->add_option("--out", solve_opt.out_dir, "output directory for data files");
  solve_cmd->add_option("--config", solve_opt.config, "model parameter JSON file");
  solve_cmd->add_option("--start", solve_opt.start_file, "start control file (overrides --seed)");
  solve_cmd->add_option("--delta0", solve_opt.tr.initial_radius, "initial trust radius");
  solve_cmd->add_option("--acceptance-ratio", solve_opt.tr.acceptance_ratio,
                        "step acceptance ratio");
  solve_cmd->add_option("--max-outer", solve_opt.tr.max_outer, "outer iteration cap");
  solve_cmd->add_option("--pred-tol", solve_opt.tr.pred_tol, "termination tolerance on pred");

  std::string spec_path;
  auto* bench_cmd = app.add_subcommand("bench", "run a seeded benchmark batch");
  bench_cmd->add_option("--spec", spec_path, "benchmark spec JSON")->required();

  CheckOptions check_opt;
  auto* check_cmd =
      app.add_subcommand("check-stationarity", "evaluate switching-point conditions");
  check_cmd->add_option("--model", check_opt.model, "lvm or heat")->required();
  check_cmd->add_option("--control", check_opt.control_file, "control file")->required();
  check_cmd->add_option("--config", check_opt.config, "model parameter JSON file");
  check_cmd->add_option("--csv", check_opt.csv_path, "write the residual table as CSV");
  check_cmd->add_option("--fd-step", check_opt.fd_step, "pulse mass for curvature probes");

  SubproblemOptions sub_opt;
  auto* sub_cmd = app.add_subcommand("subproblem", "solve one trust-region subproblem");
  sub_cmd->add_option("--v", sub_opt.v_file, "current control file")->required();
  sub_cmd->add_option("--g", sub_opt.g_file, "gradient samples file")->required();
  sub_cmd->add_option("--alphabet", sub_opt.alphabet_file, "alphabet file, one value per row")
      ->required();
  sub_cmd->add_option("--budget", sub_opt.budget, "L1 deviation budget")->required();
  sub_cmd->add_option("--beta", sub_opt.beta, "switching cost weight");
  sub_cmd->add_option("--p", sub_opt.p, "TV norm exponent (number or 'inf')");
  int sub_sigma = 0;
  auto* sub_sigma_flag = sub_cmd->add_option("--sigma-max", sub_sigma, "switch count bound");
  sub_cmd->add_option("--out", sub_opt.out_file, "write the minimizer to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      if (*beta_flag) solve_opt.beta = beta_value;
      if (*sigma_flag) solve_opt.sigma_max = sigma_value;
      return run_solve(solve_opt);
    }
    if (*bench_cmd) return run_bench(spec_path);
    if (*check_cmd) return run_check(check_opt);
    if (*sub_cmd) {
      if (*sub_sigma_flag) sub_opt.sigma_max = sub_sigma;
      return run_subproblem(sub_opt);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
