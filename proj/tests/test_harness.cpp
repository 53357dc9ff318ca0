#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "ccqoe/errors.hpp"
#include "ccqoe/harness.hpp"
#include "ccqoe/model.hpp"
#include "ccqoe/solver.hpp"
#include "test_support.hpp"

using namespace ccqoe;
using test_support::demo_instance;

TEST_CASE("channel generation normalizes the peak exactly") {
  for (std::uint64_t seed : {1ull, 99ull, 123456789ull}) {
    SeededRng rng(seed);
    const auto channels = gen_channels(8, rng);
    REQUIRE(channels.size() == 8);
    double peak = 0;
    for (const auto& h : channels) peak = std::max(peak, std::abs(h));
    CHECK(peak == 1.0);
  }
}

TEST_CASE("channel draws are deterministic per seed") {
  SeededRng a(31337);
  SeededRng b(31337);
  CHECK(gen_channels(6, a) == gen_channels(6, b));

  SeededRng c(31338);
  CHECK(gen_channels(6, a) != gen_channels(6, c));

  CHECK(derive_stream_seed(1, 5, 2, 0) != derive_stream_seed(1, 5, 2, 1));
  CHECK(derive_stream_seed(1, 5, 2, 0) != derive_stream_seed(1, 5, 1, 0));
  CHECK(derive_stream_seed(1, 5, 2, 0) != derive_stream_seed(2, 5, 2, 0));
}

TEST_CASE("raw draws look standard Gaussian") {
  const int count = 10000;
  SeededRng rng(404);
  const auto raw = draw_channels(count, rng);
  double mean_re = 0, mean_im = 0, power = 0;
  for (const auto& h : raw) {
    mean_re += h.real();
    mean_im += h.imag();
    power += std::norm(h);
  }
  mean_re /= count;
  mean_im /= count;
  power /= count;
  // Component std dev is 1, so the sample mean has sigma 1/sqrt(count).
  const double five_sigma = 5.0 / std::sqrt(static_cast<double>(count));
  CHECK(std::abs(mean_re) <= five_sigma);
  CHECK(std::abs(mean_im) <= five_sigma);
  CHECK(power == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("sweep reproduces the demo budget curve") {
  const auto instance = demo_instance();

  const auto points = sweep_tlim(instance, Algorithm::Dp, 0.0, 45.0, 1.0);
  REQUIRE(points.size() == 46);
  CHECK(points.front().qoe_sum == 0);
  CHECK(points[10].time_budget == doctest::Approx(10.0));
  CHECK(points[10].qoe_sum == 10);
  CHECK(points.back().qoe_sum == 30);

  int last = -1;
  for (const auto& point : points) {
    CHECK(point.qoe_sum >= last);
    last = point.qoe_sum;
  }

  // Derived single points: three unit-cost steps fit a 3-second budget.
  const auto groups = build_groups(instance);
  CHECK(solve_exhaustive(groups, 5, 2, 3.0).schedule.qoe_sum == 3);
  const auto single = sweep_tlim(instance, Algorithm::Dp, 3.0, 3.0, 1.0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].qoe_sum == 3);

  CHECK(sweep_tlim(instance, Algorithm::Dp, 10.0, 5.0, 1.0).empty());
  CHECK_THROWS_AS(sweep_tlim(instance, Algorithm::Dp, 0.0, 1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("compare runs a small grid with exact reference") {
  ExperimentConfig config;
  config.user_counts = {4, 5};
  config.gains = {1, 2};
  config.time_budget = 4.0;
  config.trials = 25;
  config.seed = 11;
  config.solvers = {Algorithm::Dp, Algorithm::Sdt, Algorithm::Pdt};

  const auto output = compare_solvers(config);
  REQUIRE(output.aggregates.size() == 4);
  CHECK(output.trials.size() == 4 * 25);

  for (const auto& row : output.aggregates) {
    CHECK(row.has_exact);
    CHECK(row.gap_sdt_pct <= 0.0);
    CHECK(row.gap_pdt_pct <= 0.0);
    CHECK(row.mean_qoe_sdt <= row.mean_qoe_opt);
    CHECK(row.mean_qoe_pdt <= row.mean_qoe_opt);
    CHECK(row.mean_wall_sdt > 0.0);
  }

  // Row-wise dominance in every trial.
  for (const auto& trial : output.trials) {
    int opt = -1, sdt = -1, pdt = -1;
    for (const auto& [algo, outcome] : trial.results) {
      if (algo == Algorithm::Dp) opt = outcome.qoe_sum;
      if (algo == Algorithm::Sdt) sdt = outcome.qoe_sum;
      if (algo == Algorithm::Pdt) pdt = outcome.qoe_sum;
    }
    CHECK(sdt <= opt);
    CHECK(pdt <= opt);
  }
}

TEST_CASE("compare without exact solvers leaves gaps absent") {
  ExperimentConfig config;
  config.user_counts = {5};
  config.gains = {2};
  config.time_budget = 4.0;
  config.trials = 5;
  config.seed = 3;
  config.solvers = {Algorithm::Sdt};

  const auto output = compare_solvers(config);
  REQUIRE(output.aggregates.size() == 1);
  const auto& row = output.aggregates[0];
  CHECK(!row.has_exact);
  CHECK(std::isnan(row.gap_sdt_pct));
  CHECK(std::isnan(row.mean_qoe_opt));
  CHECK(std::isnan(row.impr_pdt_over_sdt_pct));
  CHECK(row.mean_qoe_sdt >= 0.0);
}

TEST_CASE("compare results are reproducible and job-count independent") {
  ExperimentConfig config;
  config.user_counts = {5};
  config.gains = {2};
  config.time_budget = 4.0;
  config.trials = 12;
  config.seed = 2025;
  config.solvers = {Algorithm::Dp, Algorithm::Sdt, Algorithm::Pdt};

  const auto serial = compare_solvers(config);
  config.jobs = 4;
  const auto parallel = compare_solvers(config);

  REQUIRE(serial.trials.size() == parallel.trials.size());
  for (std::size_t i = 0; i < serial.trials.size(); ++i) {
    REQUIRE(serial.trials[i].results.size() ==
            parallel.trials[i].results.size());
    for (std::size_t s = 0; s < serial.trials[i].results.size(); ++s) {
      CHECK(serial.trials[i].results[s].second.qoe_sum ==
            parallel.trials[i].results[s].second.qoe_sum);
      CHECK(serial.trials[i].results[s].second.qoe_per_user ==
            parallel.trials[i].results[s].second.qoe_per_user);
    }
  }
}

TEST_CASE("config validation") {
  ExperimentConfig config;
  config.user_counts = {4};
  config.gains = {4};  // invalid: t must be < K
  config.solvers = {Algorithm::Sdt};
  CHECK_THROWS_AS(compare_solvers(config), std::invalid_argument);

  config.gains = {1};
  config.trials = 0;
  CHECK_THROWS_AS(compare_solvers(config), std::invalid_argument);

  config.trials = 1;
  config.solvers.clear();
  CHECK_THROWS_AS(compare_solvers(config), std::invalid_argument);
}

TEST_CASE("solver cap errors surface from parallel workers") {
  ExperimentConfig config;
  config.user_counts = {6};
  config.gains = {2};  // 4^20 assignments: over the exhaustive cap
  config.trials = 4;
  config.jobs = 2;
  config.seed = 9;
  config.solvers = {Algorithm::Exhaustive};
  CHECK_THROWS_AS(compare_solvers(config), TooLargeForExact);
}

TEST_CASE("direct capacity mode uses normalized amplitudes") {
  ExperimentConfig config;
  config.capacity_mode = CapacityMode::Direct;
  config.seed = 5;
  const auto instance = make_trial_instance(config, 6, 2, 0);
  double peak = 0;
  for (double c : instance.capacities) {
    CHECK(c > 0);
    CHECK(c <= 1.0);
    peak = std::max(peak, c);
  }
  CHECK(peak == 1.0);
}

TEST_CASE("runtime measurement sanity") {
  CHECK(measure_runtime([] {}) >= 0.0);
  CHECK(measure_runtime_median3([] {}) >= 0.0);

  // The exact search visits ~1.4M nodes on the saturated demo; the greedy
  // touches thirty steps. The margin is far beyond scheduler noise.
  const auto instance = demo_instance(45.0);
  const auto groups = build_groups(instance);
  const double exhaustive_time = measure_runtime_median3(
      [&] { solve_exhaustive(groups, 5, 2, 45.0); });
  const double sdt_time =
      measure_runtime_median3([&] { solve_sdt(groups, 5, 2, 45.0); });
  CHECK(exhaustive_time >= 10.0 * sdt_time);
}
