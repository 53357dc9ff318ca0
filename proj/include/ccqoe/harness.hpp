#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "ccqoe/model.hpp"
#include "ccqoe/solver.hpp"

namespace ccqoe {

// mt19937_64 with hand-rolled uniform and Gaussian draws, so streams are
// bit-identical across standard library implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in (0, 1].
  double next_unit() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Circularly symmetric complex Gaussian, unit variance per component.
  std::complex<double> next_complex_gaussian();

 private:
  std::mt19937_64 engine_;
};

// Stream seed for one trial of one (K, t) cell, derived from the master
// seed so grids are reproducible and trials independent.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, int num_users,
                                 int gain, int trial_index);

// Raw i.i.d. complex Gaussian coefficients, one per user.
std::vector<std::complex<double>> draw_channels(int num_users, SeededRng& rng);

// Scales so the largest amplitude is exactly 1. The peak coefficient is
// pinned to 1+0i; its phase never enters any downstream formula.
std::vector<std::complex<double>> normalize_peak(
    std::vector<std::complex<double>> coefficients);

std::vector<std::complex<double>> gen_channels(int num_users, SeededRng& rng);

enum class CapacityMode { Channels, Direct };

struct ExperimentConfig {
  std::vector<int> user_counts;  // K values
  std::vector<int> gains;        // t values; every (K, t) pair must be valid
  double time_budget = 4.0;
  int trials = 1;
  std::uint64_t seed = 1;
  std::vector<Algorithm> solvers;
  CapacityMode capacity_mode = CapacityMode::Channels;
  double transmit_power = 10.0;
  double noise_power = 1.0;
  double log_base = 2.0;
  int jobs = 1;
};

// The randomly drawn instance for one trial: normalized Gaussian channels
// through the capacity formula (Channels mode) or the normalized channel
// amplitudes used as rates directly (Direct mode).
Instance make_trial_instance(const ExperimentConfig& config, int num_users,
                             int gain, int trial_index);

struct SolverOutcome {
  int qoe_sum = 0;
  std::vector<int> qoe_per_user;
  double wall_time = 0;  // seconds, median of 3 repetitions
  std::uint64_t iterations = 0;
};

struct TrialResult {
  int num_users = 0;
  int gain = 0;
  int trial_index = 0;
  std::uint64_t stream_seed = 0;
  double time_budget = 0;
  std::vector<std::pair<Algorithm, SolverOutcome>> results;  // config solver order
};

struct SweepPoint {
  double time_budget = 0;
  int qoe_sum = 0;
  std::vector<int> qoe_per_user;
};

// One solve per budget point start, start+step, ..., up to stop (inclusive
// within a 1e-12 slack). stop < start yields an empty list.
std::vector<SweepPoint> sweep_tlim(const Instance& instance,
                                   Algorithm algorithm, double start,
                                   double stop, double step,
                                   const SolveOptions& options = {});

// Per-(K, t) aggregate over trials. Quantities that need a solver that did
// not run are NaN. Gaps and improvements are means of per-trial percentages;
// runtime comparisons are ratios of mean wall times.
struct AggregateRow {
  int num_users = 0;
  int gain = 0;
  int trials = 0;
  bool has_exact = false;
  double mean_qoe_opt = 0, mean_qoe_sdt = 0, mean_qoe_pdt = 0;
  double gap_sdt_pct = 0, gap_pdt_pct = 0;
  double impr_pdt_over_sdt_pct = 0;
  double mean_wall_opt = 0, mean_wall_sdt = 0, mean_wall_pdt = 0;
  double runtime_sdt_vs_opt_pct = 0, runtime_pdt_vs_opt_pct = 0;
  double runtime_pdt_over_sdt = 0;
};

struct CompareOutput {
  std::vector<TrialResult> trials;      // grid-major, trial-minor order
  std::vector<AggregateRow> aggregates; // one per (K, t)
};

CompareOutput compare_solvers(const ExperimentConfig& config,
                              const SolveOptions& options = {});

// Monotonic wall-clock seconds around fn.
double measure_runtime(const std::function<void()>& fn);

// Median of three repetitions, damping scheduler noise.
double measure_runtime_median3(const std::function<void()>& fn);

}  // namespace ccqoe
