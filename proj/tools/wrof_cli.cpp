// Command-line front end: transport solves, WROF, the two iterative schemes,
// and the self-verification suites.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wrof/flows.hpp"
#include "wrof/io.hpp"
#include "wrof/oracle.hpp"
#include "wrof/verify.hpp"
#include "wrof/wrof.hpp"

namespace {

int env_threads() {
  if (const char* env = std::getenv("WROF_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

wrof::CostKind parse_cost(const std::string& name, double lambda) {
  if (name == "quadratic") return wrof::CostKind::quadratic();
  if (name == "euclidean") return wrof::CostKind::euclidean();
  if (name == "huber") return wrof::CostKind::huber(lambda);
  throw wrof::Error(wrof::Errc::ParseError, "unknown cost: " + name);
}

int run(int argc, char** argv) {
  CLI::App app{"Exact discrete optimal transport with Huber-cost regularization"};
  app.require_subcommand(1);

  std::string source_path, target_path, out_path, out_dir = ".";
  std::string cost_name = "quadratic";
  double lambda = 0.0, lambda0 = 0.0;
  int stages = 8;
  bool emit_plots = false, snapshots = false;

  CLI::App* ot = app.add_subcommand("ot", "Solve one optimal transport problem");
  ot->add_option("source", source_path, "source measure file")->required();
  ot->add_option("target", target_path, "target measure file")->required();
  ot->add_option("--cost", cost_name, "quadratic|euclidean|huber");
  ot->add_option("--lambda", lambda, "Huber scale");
  ot->add_option("--out", out_path, "plan JSON output path");

  CLI::App* wrofc = app.add_subcommand("wrof", "Solve the W2/W1 restoration problem");
  wrofc->add_option("mu", source_path, "noisy measure file")->required();
  wrofc->add_option("nu", target_path, "reference measure file")->required();
  wrofc->add_option("--lambda", lambda, "scale")->required();
  wrofc->add_option("--out", out_path, "solution JSON output path");
  wrofc->add_flag("--emit-plots", emit_plots, "write displacement histogram CSV");

  CLI::App* iter = app.add_subcommand("iterate", "Iterative regularization of mu toward nu");
  iter->add_option("mu", source_path)->required();
  iter->add_option("nu", target_path)->required();
  iter->add_option("--lambda", lambda, "constant step size");
  iter->add_option("--halving", lambda0, "initial step size, halved per stage");
  iter->add_option("--stages", stages, "stage count");
  iter->add_option("--out-dir", out_dir, "output directory");
  iter->add_flag("--snapshots", snapshots, "write per-stage measure files");

  CLI::App* multi = app.add_subcommand("multiscale", "Multiscale transport toward mu");
  multi->add_option("mu", source_path)->required();
  multi->add_option("nu", target_path)->required();
  multi->add_option("--lambda0", lambda0, "initial scale")->required();
  multi->add_option("--stages", stages, "stage count");
  multi->add_option("--out-dir", out_dir, "output directory");
  multi->add_flag("--snapshots", snapshots, "write per-stage measure files");

  std::string suite = "all";
  int instances = 50;
  std::uint64_t seed = 0;
  std::string report_path;
  CLI::App* verify = app.add_subcommand("verify", "Run the property suites");
  verify->add_option("--suite", suite, "identities|oracle|flows|all");
  verify->add_option("--instances", instances, "instances per suite");
  verify->add_option("--seed", seed, "PRNG seed");
  verify->add_option("--report", report_path, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (ot->parsed()) {
    const wrof::DiscreteMeasure source = wrof::read_measure(source_path);
    const wrof::DiscreteMeasure target = wrof::read_measure(target_path);
    const wrof::TransportPlan plan =
        wrof::solve_transport(source, target, parse_cost(cost_name, lambda));
    const wrof::PlanCheck check = wrof::validate_plan(plan, source, target);
    if (!out_path.empty()) wrof::write_plan_json(out_path, plan);
    std::cout << "value=" << wrof::fmt17(plan.value)
              << " duality_gap=" << wrof::fmt17(check.duality_gap_rel)
              << " entries=" << plan.entries.size() << "\n";
    return 0;
  }

  if (wrofc->parsed()) {
    const wrof::DiscreteMeasure mu = wrof::read_measure(source_path);
    const wrof::DiscreteMeasure nu = wrof::read_measure(target_path);
    const wrof::WrofSolution sol = wrof::solve_wrof(mu, nu, lambda);
    const auto sandwich = wrof::sandwich_bounds(sol, mu, nu);
    const wrof::SplitMasses split = wrof::split_masses(sol.huber_plan, mu, nu, lambda);
    if (!out_path.empty()) wrof::write_wrof_json(out_path, sol, sandwich, split);
    if (emit_plots) {
      const std::string plot_path =
          out_path.empty() ? "displacements.csv" : out_path + ".displacements.csv";
      wrof::write_displacement_csv(plot_path, sol, mu, nu);
    }
    std::cout << "value=" << wrof::fmt17(sol.value)
              << " divergence=" << wrof::fmt17(sol.divergence)
              << " w1=" << wrof::fmt17(sol.w1_rho_nu)
              << " max_displacement=" << wrof::fmt17(sol.max_displacement) << "\n";
    return 0;
  }

  if (iter->parsed()) {
    const wrof::DiscreteMeasure mu = wrof::read_measure(source_path);
    const wrof::DiscreteMeasure nu = wrof::read_measure(target_path);
    const wrof::ScaleSchedule schedule = lambda0 > 0.0
                                             ? wrof::ScaleSchedule::halving(lambda0, stages)
                                             : wrof::ScaleSchedule::constant(lambda, stages);
    wrof::IterationOptions opts;
    const wrof::IterationResult result = wrof::iterate_regularization(mu, nu, schedule, opts);
    std::filesystem::create_directories(out_dir);
    wrof::write_trace_csv(out_dir + "/trace.csv", result.trace);
    wrof::write_trace_json(out_dir + "/trace.json", result.trace);
    wrof::write_measure_json(out_dir + "/final.json", result.final_measure);
    if (snapshots) wrof::write_measure_csv(out_dir + "/final.csv", result.final_measure);
    std::cout << "stages=" << result.trace.stages.size()
              << " final_w1=" << wrof::fmt17(result.trace.final_w1) << "\n";
    return 0;
  }

  if (multi->parsed()) {
    const wrof::DiscreteMeasure mu = wrof::read_measure(source_path);
    const wrof::DiscreteMeasure nu = wrof::read_measure(target_path);
    const wrof::MultiscaleResult result = wrof::multiscale(mu, nu, lambda0, stages);
    std::filesystem::create_directories(out_dir);
    wrof::write_ledger_csv(out_dir + "/ledger.csv", result.ledger);
    wrof::write_ledger_json(out_dir + "/ledger.json", result.ledger);
    if (snapshots)
      for (size_t n = 0; n < result.iterates.size(); ++n)
        wrof::write_measure_json(out_dir + "/stage_" + std::to_string(n) + ".json",
                                 result.iterates[n]);
    std::cout << "stages=" << result.ledger.stages.size()
              << " residual=" << wrof::fmt17(result.ledger.residual) << "\n";
    return 0;
  }

  // verify
  const wrof::VerifyReport report = wrof::run_verify(suite, instances, seed, env_threads());
  if (!report_path.empty()) wrof::write_verify_json(report_path, report);
  int failed = 0, skipped = 0;
  for (const wrof::InstanceOutcome& inst : report.instances) {
    if (inst.skipped) ++skipped;
    if (!inst.pass()) ++failed;
  }
  std::cout << "suite=" << report.suite << " instances=" << report.instances.size()
            << " failed=" << failed << " skipped=" << skipped
            << " pass=" << (report.pass ? "true" : "false") << "\n";
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const wrof::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
