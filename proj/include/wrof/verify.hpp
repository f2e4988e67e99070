#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wrof/instances.hpp"

namespace wrof {

struct CheckOutcome {
  std::string name;
  bool pass = false;
  double measured = 0.0;  // worst observed quantity
  double bound = 0.0;     // threshold it was held against
};

struct InstanceOutcome {
  std::uint64_t index = 0;
  bool skipped = false;
  std::string skip_reason;
  std::vector<CheckOutcome> checks;

  bool pass() const {
    if (skipped) return true;
    for (const CheckOutcome& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct VerifyReport {
  std::string suite;
  std::uint64_t seed = 0;
  int requested = 0;
  std::vector<InstanceOutcome> instances;
  bool pass = false;
};

/**
 * \brief Run a property suite over seeded random instances.
 *
 * Suites: identities, oracle, flows, all. Instances exceeding the oracle
 * budget are skipped and reported, not failed. Results are ordered by
 * instance index regardless of worker scheduling.
 */
VerifyReport run_verify(const std::string& suite, int instances, std::uint64_t seed,
                        int threads = 1);

/// Per-instance workers used by run_verify; exposed for the acceptance suite.
InstanceOutcome verify_identities_instance(std::uint64_t seed, std::uint64_t index,
                                           const InstanceParams& params);
InstanceOutcome verify_oracle_instance(std::uint64_t seed, std::uint64_t index,
                                       const InstanceParams& params);
InstanceOutcome verify_flows_instance(std::uint64_t seed, std::uint64_t index,
                                      const InstanceParams& params);

}  // namespace wrof
