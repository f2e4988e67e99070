#pragma once

#include <string>

#include "wrof/flows.hpp"
#include "wrof/verify.hpp"
#include "wrof/wrof.hpp"

namespace wrof {

/// Shortest text keeping the exact double value: %.17g.
std::string fmt17(double v);

// Measure files. JSON: {"dim": d, "points": [[..],..], "weights": [..]}.
// CSV: one row per atom, columns x1..xd,w. PGM: P2/P5 grayscale, atoms on
// the unit square.
DiscreteMeasure read_measure_json(const std::string& path);
DiscreteMeasure read_measure_csv(const std::string& path);
DiscreteMeasure read_measure_pgm(const std::string& path);
/// Dispatch on extension: .json, .csv, .pgm.
DiscreteMeasure read_measure(const std::string& path);

void write_measure_json(const std::string& path, const DiscreteMeasure& m);
void write_measure_csv(const std::string& path, const DiscreteMeasure& m);

void write_plan_json(const std::string& path, const TransportPlan& plan);

void write_wrof_json(const std::string& path, const WrofSolution& solution,
                     const std::pair<double, double>& sandwich, const SplitMasses& split);

/// (displacement, mass) rows over the Huber plan, for plotting.
void write_displacement_csv(const std::string& path, const WrofSolution& solution,
                            const DiscreteMeasure& mu, const DiscreteMeasure& nu);

void write_trace_csv(const std::string& path, const IterationTrace& trace);
void write_trace_json(const std::string& path, const IterationTrace& trace);
void write_ledger_csv(const std::string& path, const EnergyLedger& ledger);
void write_ledger_json(const std::string& path, const EnergyLedger& ledger);

void write_verify_json(const std::string& path, const VerifyReport& report);

}  // namespace wrof
