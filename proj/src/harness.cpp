#include "ccqoe/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "ccqoe/errors.hpp"

namespace ccqoe {

std::complex<double> SeededRng::next_complex_gaussian() {
  // Box-Muller on hand-rolled uniforms, bit-stable across platforms.
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master_seed, int num_users,
                                 int gain, int trial_index) {
  std::uint64_t s = mix64(master_seed + 0x9e3779b97f4a7c15ull);
  s = mix64(s ^ (static_cast<std::uint64_t>(num_users) << 32 |
                 static_cast<std::uint64_t>(gain)));
  s = mix64(s ^ static_cast<std::uint64_t>(trial_index));
  return s;
}

std::vector<std::complex<double>> draw_channels(int num_users,
                                                SeededRng& rng) {
  if (num_users < 1)
    throw std::invalid_argument("draw_channels: need at least one user");
  std::vector<std::complex<double>> coefficients(num_users);
  for (auto& h : coefficients) h = rng.next_complex_gaussian();
  return coefficients;
}

std::vector<std::complex<double>> normalize_peak(
    std::vector<std::complex<double>> coefficients) {
  if (coefficients.empty()) return coefficients;
  std::size_t peak = 0;
  double peak_amplitude = -1;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const double amplitude = std::abs(coefficients[i]);
    if (amplitude > peak_amplitude) {
      peak_amplitude = amplitude;
      peak = i;
    }
  }
  if (!(peak_amplitude > 0))
    throw std::domain_error("normalize_peak: all-zero coefficient vector");
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    if (i != peak) coefficients[i] /= peak_amplitude;
  // Pinning makes max |h| equal 1 exactly; the phase is unused downstream.
  coefficients[peak] = {1.0, 0.0};
  return coefficients;
}

std::vector<std::complex<double>> gen_channels(int num_users, SeededRng& rng) {
  return normalize_peak(draw_channels(num_users, rng));
}

Instance make_trial_instance(const ExperimentConfig& config, int num_users,
                             int gain, int trial_index) {
  SeededRng rng(derive_stream_seed(config.seed, num_users, gain, trial_index));
  auto channels = gen_channels(num_users, rng);
  if (config.capacity_mode == CapacityMode::Channels) {
    ChannelSpec spec;
    spec.coefficients = std::move(channels);
    spec.transmit_power = config.transmit_power;
    spec.noise_power = config.noise_power;
    spec.log_base = config.log_base;
    return Instance::from_channels(num_users, gain, config.time_budget, spec);
  }
  std::vector<double> caps(channels.size());
  for (std::size_t i = 0; i < caps.size(); ++i) caps[i] = std::abs(channels[i]);
  return Instance::from_capacities(num_users, gain, config.time_budget,
                                   std::move(caps));
}

std::vector<SweepPoint> sweep_tlim(const Instance& instance,
                                   Algorithm algorithm, double start,
                                   double stop, double step,
                                   const SolveOptions& options) {
  if (!(step > 0))
    throw std::invalid_argument("sweep_tlim: step must be positive");
  const auto groups = build_groups(instance);
  std::vector<SweepPoint> points;
  for (int i = 0;; ++i) {
    const double budget = start + static_cast<double>(i) * step;
    if (budget > stop + 1e-12) break;
    const auto report = solve(algorithm, groups, instance.num_users,
                              instance.gain, budget, options);
    points.push_back(
        {budget, report.schedule.qoe_sum, report.schedule.qoe_per_user});
  }
  return points;
}

double measure_runtime(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

double measure_runtime_median3(const std::function<void()>& fn) {
  double a = measure_runtime(fn);
  double b = measure_runtime(fn);
  double c = measure_runtime(fn);
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return b;
}

namespace {

void validate_config(const ExperimentConfig& config) {
  if (config.trials < 1)
    throw std::invalid_argument("config: trials must be >= 1");
  if (config.solvers.empty())
    throw std::invalid_argument("config: at least one solver required");
  if (config.user_counts.empty() || config.gains.empty())
    throw std::invalid_argument("config: K_list and t_list must be nonempty");
  for (int num_users : config.user_counts) {
    for (int gain : config.gains) {
      if (gain < 1 || gain > num_users - 1)
        throw std::invalid_argument("config: invalid pair K=" +
                                    std::to_string(num_users) +
                                    ", t=" + std::to_string(gain));
    }
  }
  if (config.jobs < 1)
    throw std::invalid_argument("config: jobs must be >= 1");
}

TrialResult run_trial(const ExperimentConfig& config, int num_users, int gain,
                      int trial_index, const SolveOptions& options) {
  TrialResult trial;
  trial.num_users = num_users;
  trial.gain = gain;
  trial.trial_index = trial_index;
  trial.stream_seed = derive_stream_seed(config.seed, num_users, gain,
                                         trial_index);
  trial.time_budget = config.time_budget;

  const Instance instance =
      make_trial_instance(config, num_users, gain, trial_index);
  const auto groups = build_groups(instance);

  for (Algorithm algorithm : config.solvers) {
    // Three repetitions; the median in-solver time damps scheduler noise.
    SolverReport report;
    double times[3];
    for (double& t : times) {
      report = solve(algorithm, groups, num_users, gain, config.time_budget,
                     options);
      t = report.wall_time;
    }
    std::sort(std::begin(times), std::end(times));
    SolverOutcome outcome;
    outcome.qoe_sum = report.schedule.qoe_sum;
    outcome.qoe_per_user = report.schedule.qoe_per_user;
    outcome.iterations = report.iterations;
    outcome.wall_time = times[1];
    trial.results.emplace_back(algorithm, outcome);
  }
  return trial;
}

const SolverOutcome* find_outcome(const TrialResult& trial,
                                  Algorithm algorithm) {
  for (const auto& [algo, outcome] : trial.results)
    if (algo == algorithm) return &outcome;
  return nullptr;
}

}  // namespace

CompareOutput compare_solvers(const ExperimentConfig& config,
                              const SolveOptions& options) {
  validate_config(config);

  const bool has_dp =
      std::find(config.solvers.begin(), config.solvers.end(), Algorithm::Dp) !=
      config.solvers.end();
  const bool has_exhaustive =
      std::find(config.solvers.begin(), config.solvers.end(),
                Algorithm::Exhaustive) != config.solvers.end();
  const bool has_sdt =
      std::find(config.solvers.begin(), config.solvers.end(), Algorithm::Sdt) !=
      config.solvers.end();
  const bool has_pdt =
      std::find(config.solvers.begin(), config.solvers.end(), Algorithm::Pdt) !=
      config.solvers.end();
  const bool has_exact = has_dp || has_exhaustive;
  const Algorithm exact_algo =
      has_dp ? Algorithm::Dp : Algorithm::Exhaustive;

  CompareOutput output;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int num_users : config.user_counts) {
    for (int gain : config.gains) {
      std::vector<TrialResult> cell(config.trials);
      auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i)
          cell[i] = run_trial(config, num_users, gain, i, options);
      };
      if (config.jobs <= 1 || config.trials == 1) {
        worker(0, config.trials);
      } else {
        const int jobs = std::min(config.jobs, config.trials);
        std::vector<std::thread> pool;
        std::mutex failure_mutex;
        std::exception_ptr failure;
        const int chunk = (config.trials + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
          const int begin = j * chunk;
          const int end = std::min(config.trials, begin + chunk);
          if (begin >= end) continue;
          pool.emplace_back([&, begin, end] {
            try {
              worker(begin, end);
            } catch (...) {
              const std::lock_guard<std::mutex> lock(failure_mutex);
              if (!failure) failure = std::current_exception();
            }
          });
        }
        for (auto& thread : pool) thread.join();
        if (failure) std::rethrow_exception(failure);
      }

      AggregateRow row;
      row.num_users = num_users;
      row.gain = gain;
      row.trials = config.trials;
      row.has_exact = has_exact;
      double sum_opt = 0, sum_sdt = 0, sum_pdt = 0;
      double sum_gap_sdt = 0, sum_gap_pdt = 0, sum_impr = 0;
      double wall_opt = 0, wall_sdt = 0, wall_pdt = 0;

      for (const auto& trial : cell) {
        const SolverOutcome* opt =
            has_exact ? find_outcome(trial, exact_algo) : nullptr;
        const SolverOutcome* sdt = find_outcome(trial, Algorithm::Sdt);
        const SolverOutcome* pdt = find_outcome(trial, Algorithm::Pdt);
        if (opt) {
          sum_opt += opt->qoe_sum;
          wall_opt += opt->wall_time;
          if (sdt && sdt->qoe_sum > opt->qoe_sum)
            throw std::logic_error("compare: sdt exceeded the exact optimum");
          if (pdt && pdt->qoe_sum > opt->qoe_sum)
            throw std::logic_error("compare: pdt exceeded the exact optimum");
          if (sdt && opt->qoe_sum > 0)
            sum_gap_sdt += 100.0 * (sdt->qoe_sum - opt->qoe_sum) / opt->qoe_sum;
          if (pdt && opt->qoe_sum > 0)
            sum_gap_pdt += 100.0 * (pdt->qoe_sum - opt->qoe_sum) / opt->qoe_sum;
        }
        if (sdt) {
          sum_sdt += sdt->qoe_sum;
          wall_sdt += sdt->wall_time;
        }
        if (pdt) {
          sum_pdt += pdt->qoe_sum;
          wall_pdt += pdt->wall_time;
        }
        if (sdt && pdt && sdt->qoe_sum > 0)
          sum_impr += 100.0 * (pdt->qoe_sum - sdt->qoe_sum) / sdt->qoe_sum;
      }

      const double trials = config.trials;
      row.mean_qoe_opt = has_exact ? sum_opt / trials : nan;
      row.mean_qoe_sdt = has_sdt ? sum_sdt / trials : nan;
      row.mean_qoe_pdt = has_pdt ? sum_pdt / trials : nan;
      row.gap_sdt_pct = (has_exact && has_sdt) ? sum_gap_sdt / trials : nan;
      row.gap_pdt_pct = (has_exact && has_pdt) ? sum_gap_pdt / trials : nan;
      row.impr_pdt_over_sdt_pct =
          (has_sdt && has_pdt) ? sum_impr / trials : nan;
      row.mean_wall_opt = has_exact ? wall_opt / trials : nan;
      row.mean_wall_sdt = has_sdt ? wall_sdt / trials : nan;
      row.mean_wall_pdt = has_pdt ? wall_pdt / trials : nan;
      row.runtime_sdt_vs_opt_pct =
          (has_exact && has_sdt && row.mean_wall_opt > 0)
              ? 100.0 * (row.mean_wall_sdt - row.mean_wall_opt) /
                    row.mean_wall_opt
              : nan;
      row.runtime_pdt_vs_opt_pct =
          (has_exact && has_pdt && row.mean_wall_opt > 0)
              ? 100.0 * (row.mean_wall_pdt - row.mean_wall_opt) /
                    row.mean_wall_opt
              : nan;
      row.runtime_pdt_over_sdt =
          (has_sdt && has_pdt && row.mean_wall_sdt > 0)
              ? row.mean_wall_pdt / row.mean_wall_sdt
              : nan;

      output.aggregates.push_back(row);
      for (auto& trial : cell) output.trials.push_back(std::move(trial));
    }
  }
  return output;
}

}  // namespace ccqoe
