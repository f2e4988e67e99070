#pragma once

#include <optional>
#include <vector>

#include "wrof/wrof.hpp"

namespace wrof {

/** \brief Sequence of step sizes λₙ. */
struct ScaleSchedule {
  enum class Rule { Halving, Constant, Custom };
  Rule rule = Rule::Custom;
  std::vector<double> values;

  static ScaleSchedule halving(double lambda0, int stages);
  static ScaleSchedule constant(double lambda, int stages);
  static ScaleSchedule custom(std::vector<double> values);
};

struct IterationStage {
  int n = 0;
  double lambda = 0.0;
  double w1_to_nu = 0.0;    // W₁(μₙ, ν) before the stage update
  double mass_large = 0.0;  // μᵇ(Ω) of the stage's Huber plan
};

struct IterationTrace {
  std::vector<IterationStage> stages;
  double final_w1 = 0.0;  // W₁ from the final measure to ν
};

struct IterationOptions {
  std::optional<double> w1_stop_tol;  // early stop once W₁(μₙ,ν) drops below
  Eigen::Index atom_cap = 100000;
  std::optional<BoxDomain> domain;    // default: bounding box of μ and ν
};

struct IterationResult {
  IterationTrace trace;
  DiscreteMeasure final_measure;
};

/// μₙ₊₁ = argmin ½W₂²(ρ,μₙ) + λₙW₁(ρ,ν); W₁(μₙ,ν) decreases to 0.
IterationResult iterate_regularization(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                       const ScaleSchedule& schedule,
                                       const IterationOptions& options = {});

struct LedgerStage {
  int n = 0;
  double lambda = 0.0;
  double w2sq_before = 0.0;  // W₂²(μ, νₙ)
  double divergence = 0.0;   // D_{λₙ}(νₙ, νₙ₊₁)
  double w1_term = 0.0;      // λₙ W₁(νₙ, νₙ₊₁)
  double w2sq_after = 0.0;   // W₂²(μ, νₙ₊₁)
};

/**
 * \brief Scale-indexed decomposition of ½W₂²(μ,ν).
 *
 * Each stage satisfies ½w2sq_before = divergence + w1_term + ½w2sq_after;
 * the rows telescope to total_left up to the unresolved tail.
 */
struct EnergyLedger {
  std::vector<LedgerStage> stages;
  double total_left = 0.0;  // ½W₂²(μ, ν)
  double residual = 0.0;    // total_left − Σ(Dₙ + w1_term) − ½W₂²(μ, ν_N)
};

struct MultiscaleResult {
  std::vector<DiscreteMeasure> iterates;  // ν₀ = ν, …, ν_N
  EnergyLedger ledger;
};

/// νₙ₊₁ = argmin ½W₂²(ρ,μ) + λₙW₁(ρ,νₙ) with λₙ = λ₀/2ⁿ.
MultiscaleResult multiscale(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           double lambda0, int stages, Eigen::Index atom_cap = 100000);

/// |½W₂²(μ,ν) − Σₙ(Dₙ + λₙW₁ₙ) − ½W₂²(μ,ν_N)|.
double check_energy_identity(const EnergyLedger& ledger);

}  // namespace wrof
