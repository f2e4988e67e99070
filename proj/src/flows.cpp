#include "wrof/flows.hpp"

#include <cmath>

namespace wrof {

ScaleSchedule ScaleSchedule::halving(double lambda0, int stages) {
  if (!(lambda0 > 0.0)) throw Error(Errc::NonPositiveLambda, "lambda0 must be positive");
  ScaleSchedule s;
  s.rule = Rule::Halving;
  double l = lambda0;
  for (int n = 0; n < stages; ++n, l *= 0.5) s.values.push_back(l);
  return s;
}

ScaleSchedule ScaleSchedule::constant(double lambda, int stages) {
  if (!(lambda > 0.0)) throw Error(Errc::NonPositiveLambda, "lambda must be positive");
  ScaleSchedule s;
  s.rule = Rule::Constant;
  s.values.assign(static_cast<size_t>(stages), lambda);
  return s;
}

ScaleSchedule ScaleSchedule::custom(std::vector<double> values) {
  for (double v : values)
    if (!(v > 0.0)) throw Error(Errc::NonPositiveLambda, "all step sizes must be positive");
  ScaleSchedule s;
  s.rule = Rule::Custom;
  s.values = std::move(values);
  return s;
}

IterationResult iterate_regularization(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                       const ScaleSchedule& schedule,
                                       const IterationOptions& options) {
  if (schedule.values.empty())
    throw Error(Errc::EmptySuite, "schedule must contain at least one stage");
  DiscreteMeasure current = mu;
  IterationTrace trace;
  double w1_now = w1(current, nu);
  for (size_t n = 0; n < schedule.values.size(); ++n) {
    if (options.w1_stop_tol && w1_now <= *options.w1_stop_tol) break;
    const double lambda = schedule.values[n];
    WrofSolution sol = solve_wrof(current, nu, lambda);
    const SplitMasses split = split_masses(sol.huber_plan, current, nu, lambda);
    trace.stages.push_back({static_cast<int>(n), lambda, w1_now, split.mass_large});
    current = sol.rho;
    if (current.size() > options.atom_cap)
      throw Error(Errc::AtomBudgetExceeded, "atom count exceeded the configured cap");
    w1_now = sol.w1_rho_nu;  // W₁(μₙ₊₁, ν): ρ is the next iterate
  }
  trace.final_w1 = w1_now;
  return IterationResult{std::move(trace), std::move(current)};
}

MultiscaleResult multiscale(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            double lambda0, int stages, Eigen::Index atom_cap) {
  if (!(lambda0 > 0.0)) throw Error(Errc::NonPositiveLambda, "lambda0 must be positive");
  if (stages < 1) throw Error(Errc::EmptySuite, "stage count must be >= 1");
  MultiscaleResult result;
  result.iterates.push_back(nu);
  result.ledger.total_left = 0.5 * w2_squared(mu, nu);

  double lambda = lambda0;
  double w2sq_before = 2.0 * result.ledger.total_left;
  double spent = 0.0;
  for (int n = 0; n < stages; ++n, lambda *= 0.5) {
    const DiscreteMeasure& nu_n = result.iterates.back();
    WrofSolution sol = solve_wrof(mu, nu_n, lambda);
    const double w1_term = lambda * sol.w1_rho_nu;
    result.ledger.stages.push_back(
        {n, lambda, w2sq_before, sol.divergence, w1_term, sol.w2sq_mu_rho});
    spent += sol.divergence + w1_term;
    w2sq_before = sol.w2sq_mu_rho;
    if (sol.rho.size() > atom_cap)
      throw Error(Errc::AtomBudgetExceeded, "atom count exceeded the configured cap");
    result.iterates.push_back(std::move(sol.rho));
  }
  result.ledger.residual = result.ledger.total_left - spent - 0.5 * w2sq_before;
  return result;
}

double check_energy_identity(const EnergyLedger& ledger) {
  double spent = 0.0;
  for (const LedgerStage& stage : ledger.stages) spent += stage.divergence + stage.w1_term;
  const double tail = ledger.stages.empty() ? 2.0 * ledger.total_left
                                            : ledger.stages.back().w2sq_after;
  return std::abs(ledger.total_left - spent - 0.5 * tail);
}

}  // namespace wrof
