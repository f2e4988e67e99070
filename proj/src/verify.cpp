#include "wrof/verify.hpp"

#include <cmath>
#include <functional>
#include <thread>

#include "wrof/flows.hpp"
#include "wrof/oracle.hpp"
#include "wrof/wrof.hpp"

namespace wrof {

namespace {

void add_check(InstanceOutcome& out, const std::string& name, double measured, double bound) {
  out.checks.push_back({name, measured <= bound, measured, bound});
}

}  // namespace

InstanceOutcome verify_identities_instance(std::uint64_t seed, std::uint64_t index,
                                           const InstanceParams& params) {
  InstanceOutcome out;
  out.index = index;
  RandomInstance inst = make_instance(seed, index, params);
  WrofSolution sol = solve_wrof(inst.mu, inst.nu, inst.lambda);

  // Value identity: WROF objective at ρ equals the Huber transport cost.
  add_check(out, "value_identity",
            std::abs(sol.value - sol.huber_plan.value) / (1.0 + std::abs(sol.huber_plan.value)),
            1e-8);
  add_check(out, "displacement_bound", sol.max_displacement, inst.lambda + 1e-9);

  const SplitMasses split = split_masses(sol.huber_plan, inst.mu, inst.nu, inst.lambda);
  add_check(out, "split_mass_sum", std::abs(split.mass_small + split.mass_large - 1.0), 1e-12);

  // Dichotomy: all-near plans reproduce ν exactly; otherwise D_λ > 0.
  if (split.mass_large == 0.0) {
    out.checks.push_back({"dichotomy_rho_equals_nu", sol.rho == inst.nu, 0.0, 0.0});
  } else {
    out.checks.push_back({"dichotomy_positive_divergence", sol.divergence > 0.0,
                          sol.divergence, 0.0});
  }
  add_check(out, "divergence_nonnegative", -sol.divergence, 1e-9);

  const auto [upper, lower] = sandwich_bounds(sol, inst.mu, inst.nu);
  add_check(out, "sandwich_upper", sol.divergence - upper, 1e-8);
  add_check(out, "sandwich_lower", lower - sol.divergence, 1e-8);

  const PlanCheck check = validate_plan(sol.huber_plan, inst.mu, inst.nu);
  add_check(out, "marginal_feasibility", check.marginal_err, 1e-9);
  add_check(out, "duality_gap", check.duality_gap_rel, 1e-8);
  add_check(out, "complementary_slackness",
            std::max(check.slack_violation, check.support_slack_err), 1e-8);

  out.checks.push_back({"ball_membership_of_rho", in_ball(inst.mu, sol.rho, inst.lambda),
                        0.0, 0.0});
  return out;
}

InstanceOutcome verify_oracle_instance(std::uint64_t seed, std::uint64_t index,
                                       const InstanceParams& params) {
  InstanceOutcome out;
  out.index = index;
  RandomInstance inst = make_instance(seed, index, params);
  if (inst.mu.size() * inst.nu.size() > 10000) {
    out.skipped = true;
    out.skip_reason = "oracle budget exceeded";
    return out;
  }
  WrofSolution sol = solve_wrof(inst.mu, inst.nu, inst.lambda);
  const OracleReport report =
      certify_wrof("seed" + std::to_string(seed) + "/" + std::to_string(index), inst.mu,
                   inst.nu, inst.lambda, sol.value);
  add_check(out, "oracle_gap", report.gap, 1e-7);

  const double augmented =
      brute_force_wrof_augmented(inst.mu, inst.nu, inst.lambda, 10, seed ^ index);
  add_check(out, "candidate_augmentation", report.oracle_value - augmented, 1e-9);

  if (inst.mu.size() * inst.nu.size() <= 12) {
    for (CostKind kind : {CostKind::quadratic(), CostKind::euclidean(),
                          CostKind::huber(inst.lambda)}) {
      const double exhaustive = enumerate_transport(inst.mu, inst.nu, kind);
      const double solver = solve_transport(inst.mu, inst.nu, kind).value;
      add_check(out, "enumeration_agreement", std::abs(exhaustive - solver), 1e-9);
    }
  }
  return out;
}

InstanceOutcome verify_flows_instance(std::uint64_t seed, std::uint64_t index,
                                      const InstanceParams& params) {
  InstanceOutcome out;
  out.index = index;
  RandomInstance inst = make_instance(seed, index, params);

  const int stages = 6;
  const double lambda0 = inst.lambda;
  MultiscaleResult ms = multiscale(inst.mu, inst.nu, lambda0, stages);
  const double half_w2 = ms.ledger.total_left;
  add_check(out, "energy_residual", check_energy_identity(ms.ledger),
            1e-7 * (1.0 + half_w2));
  double worst_stage = 0.0;
  for (const LedgerStage& st : ms.ledger.stages)
    worst_stage = std::max(worst_stage,
                           std::abs(0.5 * st.w2sq_before - st.divergence - st.w1_term -
                                    0.5 * st.w2sq_after) /
                               (1.0 + 0.5 * st.w2sq_before));
  add_check(out, "stage_telescoping", worst_stage, 1e-8);
  double worst_rate = 0.0;
  for (int n = 1; n <= stages; ++n) {
    const double w2sq = ms.ledger.stages[static_cast<size_t>(n - 1)].w2sq_after;
    worst_rate = std::max(worst_rate, w2sq - std::pow(2.0, -2 * n + 2) * lambda0 * lambda0);
  }
  add_check(out, "rate_bound", worst_rate, 0.0);

  IterationOptions opts;
  opts.w1_stop_tol = 1e-9;
  IterationResult it = iterate_regularization(inst.mu, inst.nu,
                                              ScaleSchedule::constant(inst.lambda, 25), opts);
  const double diam = diameter(bounding_box(inst.mu, inst.nu));
  double worst_increase = 0.0, worst_diam = 0.0;
  for (size_t n = 0; n < it.trace.stages.size(); ++n) {
    const double next = n + 1 < it.trace.stages.size() ? it.trace.stages[n + 1].w1_to_nu
                                                       : it.trace.final_w1;
    worst_increase = std::max(worst_increase, next - it.trace.stages[n].w1_to_nu);
    worst_diam = std::max(worst_diam, next - it.trace.stages[n].mass_large * diam);
  }
  add_check(out, "w1_nonincreasing", worst_increase, 1e-9);
  add_check(out, "diameter_bound", worst_diam, 1e-9);
  return out;
}

VerifyReport run_verify(const std::string& suite, int instances, std::uint64_t seed,
                        int threads) {
  if (instances <= 0) throw Error(Errc::EmptySuite, "instance count must be positive");
  using Worker = std::function<InstanceOutcome(std::uint64_t, std::uint64_t)>;
  std::vector<std::pair<std::string, Worker>> jobs;
  const InstanceParams identities_params{30, 3, 0.05, 1.0};
  const InstanceParams oracle_params{6, 3, 0.05, 1.0};
  const InstanceParams flows_params{8, 3, 0.05, 1.0};
  if (suite == "identities" || suite == "all")
    jobs.emplace_back("identities", [=](std::uint64_t s, std::uint64_t i) {
      return verify_identities_instance(s, i, identities_params);
    });
  if (suite == "oracle" || suite == "all")
    jobs.emplace_back("oracle", [=](std::uint64_t s, std::uint64_t i) {
      return verify_oracle_instance(s, i, oracle_params);
    });
  if (suite == "flows" || suite == "all")
    jobs.emplace_back("flows", [=](std::uint64_t s, std::uint64_t i) {
      return verify_flows_instance(s, i, flows_params);
    });
  if (jobs.empty()) throw Error(Errc::ParseError, "unknown suite: " + suite);

  VerifyReport report;
  report.suite = suite;
  report.seed = seed;
  report.requested = instances;
  report.instances.resize(static_cast<size_t>(instances) * jobs.size());

  const int workers = std::max(1, std::min<int>(threads, instances));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (size_t task = static_cast<size_t>(w); task < report.instances.size();
           task += static_cast<size_t>(workers)) {
        const size_t job = task / static_cast<size_t>(instances);
        const std::uint64_t idx = task % static_cast<size_t>(instances);
        report.instances[task] = jobs[job].second(seed, idx);
        report.instances[task].index = idx;
      }
    });
  for (std::thread& t : pool) t.join();

  report.pass = true;
  for (const InstanceOutcome& inst : report.instances)
    if (!inst.pass()) report.pass = false;
  return report;
}

}  // namespace wrof
