#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "ccqoe/harness.hpp"
#include "ccqoe/model.hpp"
#include "ccqoe/solver.hpp"

namespace ccqoe::io {

// Shortest round-trip decimal form (to_chars); "inf"/"nan" spelled out.
std::string format_double(double value);

// Instance document: JSON object with keys K, t, T_lim and exactly one of
//   capacities    — array of K nonnegative rates, or
//   channels      — array of K [re, im] pairs, plus P_T, N_0 and an
//                   optional log_base (default 2).
// Unknown keys are rejected. Throws ParseError.
Instance load_instance(const std::filesystem::path& path);
Instance parse_instance(const std::string& text);

// Experiment config document: JSON object with keys K_list, t_list, T_lim,
// trials, seed, solvers, and optional capacity_mode ("channels"/"direct"),
// P_T, N_0, log_base. Unknown keys are rejected. Throws ParseError.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

// CSV writers. Lines starting with '#' carry run metadata; the final '#'
// line of the solve CSV is the summary footer. All numeric cells use
// format_double, so data rows are byte-stable across runs (measured wall
// times are the one exception, noted per column in the README).
void write_solve_csv(std::ostream& out, const SolverReport& report,
                     const std::vector<MulticastGroup>& groups);

void write_sweep_csv(std::ostream& out, Algorithm algorithm, int num_users,
                     const std::vector<SweepPoint>& points);

void write_compare_csv(std::ostream& out, const ExperimentConfig& config,
                       const std::vector<AggregateRow>& rows);

}  // namespace ccqoe::io
