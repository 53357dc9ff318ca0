#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ccqoe/harness.hpp"
#include "ccqoe/model.hpp"
#include "test_support.hpp"

using namespace ccqoe;
using test_support::demo_instance;

TEST_CASE("binomial basics") {
  CHECK(binomial(5, 3) == 10);
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(4, 0) == 1);
  CHECK(binomial(3, 4) == 0);
  CHECK(binomial(16, 8) == 12870);
  CHECK_THROWS_AS(binomial(63, 31), std::invalid_argument);
}

TEST_CASE("capacity formula") {
  // P_T |h|^2 / N_0 = 1 at base 2 gives one data unit per second.
  CHECK(capacity({1.0, 0.0}, 1.0, 1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(capacity({0.0, 0.0}, 1.0, 1.0, 2.0) == 0.0);
  // |h|^2 = 3 with unit power and noise: log2(4) = 2.
  CHECK(capacity({std::sqrt(3.0), 0.0}, 1.0, 1.0, 2.0) ==
        doctest::Approx(2.0).epsilon(1e-15));

  CHECK_THROWS_AS(capacity({1.0, 0.0}, 0.0, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(capacity({1.0, 0.0}, 1.0, -1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(capacity({1.0, 0.0}, 1.0, 1.0, 1.0), std::invalid_argument);

  // Monotone in |h|.
  double previous = -1;
  for (double amplitude : {0.0, 0.1, 0.5, 1.0, 2.0}) {
    const double c = capacity({amplitude, 0.0}, 10.0, 1.0, 2.0);
    CHECK(c >= previous);
    previous = c;
  }
}

TEST_CASE("group enumeration is lexicographic and complete") {
  const auto groups = enumerate_groups(5, 2);
  REQUIRE(groups.size() == 10);
  CHECK(groups.front() == std::vector<int>{1, 2, 3});
  CHECK(groups.back() == std::vector<int>{3, 4, 5});
  CHECK(std::is_sorted(groups.begin(), groups.end()));

  CHECK(enumerate_groups(3, 2).size() == 1);
  CHECK(enumerate_groups(4, 1).size() == 6);
  CHECK_THROWS_AS(enumerate_groups(5, 0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_groups(5, 5), std::invalid_argument);
}

TEST_CASE("subset_rank inverts enumerate_subsets") {
  for (int num_users = 3; num_users <= 8; ++num_users) {
    for (int size = 1; size <= num_users; ++size) {
      const auto subsets = enumerate_subsets(num_users, size);
      for (std::size_t i = 0; i < subsets.size(); ++i)
        CHECK(subset_rank(subsets[i], num_users) == i);
    }
  }
}

TEST_CASE("build_group sorts by rate and fills the time ladder") {
  const auto instance = demo_instance();

  const auto g123 = build_group({1, 2, 3}, instance.capacities, 10);
  CHECK(g123.order == std::vector<int>{1, 2, 3});
  REQUIRE(g123.time_ladder.size() == 4);
  CHECK(g123.time_ladder[0] == 0.0);
  CHECK(g123.time_ladder[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g123.time_ladder[2] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g123.time_ladder[3] == doctest::Approx(3.0).epsilon(1e-12));

  // Serving only the strongest member of {1,4,5} takes one second.
  const auto g145 = build_group({1, 4, 5}, instance.capacities, 10);
  CHECK(g145.order.front() == 1);
  CHECK(g145.time_ladder[1] == doctest::Approx(1.0).epsilon(1e-12));

  // All-equal rates: ties fall back to ascending ids.
  const std::vector<double> flat(4, 0.5);
  const auto tie = build_group({4, 2, 3, 1}, flat, 6);
  CHECK(tie.order == std::vector<int>{1, 2, 3, 4});

  // A dead link makes its rung and everything after it unreachable.
  const std::vector<double> dead = {0.5, 0.0, 0.25};
  const auto with_dead = build_group({1, 2, 3}, dead, 3);
  CHECK(with_dead.order == std::vector<int>{1, 3, 2});
  CHECK(std::isinf(with_dead.time_ladder[3]));
  CHECK(std::isfinite(with_dead.time_ladder[2]));
}

TEST_CASE("time ladders are nondecreasing") {
  SeededRng rng(99);
  for (int round = 0; round < 50; ++round) {
    const int num_users = 3 + static_cast<int>(rng.next_u64() % 4);  // 3..6
    const int gain = 1 + static_cast<int>(rng.next_u64() % (num_users - 1));
    const auto caps = test_support::random_capacities(num_users, rng);
    const auto instance = Instance::from_capacities(num_users, gain, 1.0, caps);
    for (const auto& group : build_groups(instance)) {
      for (std::size_t j = 1; j < group.time_ladder.size(); ++j)
        CHECK(group.time_ladder[j] >= group.time_ladder[j - 1]);
      // Rank 1 carries the best rate of the members.
      double best = 0;
      for (int m : group.members) best = std::max(best, caps[m - 1]);
      CHECK(caps[group.order.front() - 1] == best);
    }
  }
}

TEST_CASE("baseline delivery times") {
  const auto instance = demo_instance();
  CHECK(uncoded_time(instance) == doctest::Approx(90.0).epsilon(1e-12));
  CHECK(full_cc_time(instance) == doctest::Approx(45.0).epsilon(1e-12));

  const auto unit = Instance::from_capacities(3, 1, 1.0, {1.0, 1.0, 1.0});
  CHECK(full_cc_time(unit) == doctest::Approx(1.0));
  CHECK(uncoded_time(unit) == doctest::Approx(2.0));

  // t = K-1: every user misses exactly one descriptor.
  const auto top = Instance::from_capacities(3, 2, 1.0, {1.0, 1.0, 1.0});
  CHECK(uncoded_time(top) == doctest::Approx(3.0 * (1.0 / 3.0)));

  const auto broken = Instance::from_capacities(3, 1, 1.0, {1.0, 0.0, 1.0});
  CHECK(std::isinf(full_cc_time(broken)));
  CHECK(std::isinf(uncoded_time(broken)));
}

TEST_CASE("evaluate_schedule on the demo assignment") {
  const auto instance = demo_instance();
  const auto groups = build_groups(instance);
  const std::vector<int> decisions = {3, 2, 2, 1, 1, 1, 0, 0, 0, 0};

  const auto schedule = evaluate_schedule(decisions, groups, 5, 2);
  CHECK(schedule.qoe_sum == 10);
  CHECK(schedule.total_time == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(schedule.qoe_per_user == std::vector<int>{6, 3, 1, 0, 0});

  const auto empty = evaluate_schedule(std::vector<int>(10, 0), groups, 5, 2);
  CHECK(empty.qoe_sum == 0);
  CHECK(empty.total_time == 0.0);
  CHECK(empty.qoe_per_user == std::vector<int>(5, 0));

  CHECK_THROWS_AS(evaluate_schedule({4, 0, 0, 0, 0, 0, 0, 0, 0, 0}, groups, 5, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(evaluate_schedule({1, 2}, groups, 5, 2),
                  std::invalid_argument);
}

TEST_CASE("schedule conservation and full-service identity") {
  SeededRng rng(7);
  for (int round = 0; round < 40; ++round) {
    const int num_users = 3 + static_cast<int>(rng.next_u64() % 4);
    const int gain = 1 + static_cast<int>(rng.next_u64() % (num_users - 1));
    const auto instance = Instance::from_capacities(
        num_users, gain, 1.0, test_support::random_capacities(num_users, rng));
    const auto groups = build_groups(instance);

    std::vector<int> decisions(groups.size());
    for (int& j : decisions)
      j = static_cast<int>(rng.next_u64() % (gain + 2));
    const auto schedule = evaluate_schedule(decisions, groups, num_users, gain);
    CHECK(std::accumulate(schedule.qoe_per_user.begin(),
                          schedule.qoe_per_user.end(), 0) == schedule.qoe_sum);
    const int per_user_bound = static_cast<int>(binomial(num_users - 1, gain));
    for (int q : schedule.qoe_per_user) {
      CHECK(q >= 0);
      CHECK(q <= per_user_bound);
    }

    const auto full = evaluate_schedule(
        std::vector<int>(groups.size(), gain + 1), groups, num_users, gain);
    CHECK(full.total_time == full_cc_time(instance));
    CHECK(full.qoe_sum ==
          static_cast<int>((gain + 1) * binomial(num_users, gain + 1)));
  }
}

TEST_CASE("relabeling users permutes per-user QoE and keeps baselines") {
  SeededRng rng(21);
  const int num_users = 5;
  const int gain = 2;
  const auto caps = test_support::random_capacities(num_users, rng);
  const auto instance = Instance::from_capacities(num_users, gain, 1.0, caps);
  const auto groups = build_groups(instance);

  // sigma maps old user id -> new user id.
  const std::vector<int> sigma = {3, 5, 1, 2, 4};
  std::vector<double> permuted_caps(num_users);
  for (int k = 1; k <= num_users; ++k)
    permuted_caps[sigma[k - 1] - 1] = caps[k - 1];
  const auto permuted =
      Instance::from_capacities(num_users, gain, 1.0, permuted_caps);
  const auto permuted_groups = build_groups(permuted);

  CHECK(full_cc_time(permuted) == doctest::Approx(full_cc_time(instance)).epsilon(1e-12));
  CHECK(uncoded_time(permuted) == doctest::Approx(uncoded_time(instance)).epsilon(1e-12));

  std::vector<int> decisions(groups.size());
  for (int& j : decisions) j = static_cast<int>(rng.next_u64() % (gain + 2));
  const auto schedule = evaluate_schedule(decisions, groups, num_users, gain);

  // Carry each group's decision across the relabeling.
  std::vector<int> permuted_decisions(groups.size(), 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<int> mapped;
    for (int m : groups[g].members) mapped.push_back(sigma[m - 1]);
    std::sort(mapped.begin(), mapped.end());
    permuted_decisions[subset_rank(mapped, num_users)] = decisions[g];
  }
  const auto permuted_schedule =
      evaluate_schedule(permuted_decisions, permuted_groups, num_users, gain);

  CHECK(permuted_schedule.qoe_sum == schedule.qoe_sum);
  CHECK(permuted_schedule.total_time ==
        doctest::Approx(schedule.total_time).epsilon(1e-12));
  for (int k = 1; k <= num_users; ++k)
    CHECK(permuted_schedule.qoe_per_user[sigma[k - 1] - 1] ==
          schedule.qoe_per_user[k - 1]);
}

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(Instance::from_capacities(5, 0, 1.0, std::vector<double>(5, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Instance::from_capacities(5, 5, 1.0, std::vector<double>(5, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Instance::from_capacities(5, 2, -1.0, std::vector<double>(5, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Instance::from_capacities(5, 2, 1.0, std::vector<double>(4, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Instance::from_capacities(5, 2, 1.0, {1.0, -0.5, 1.0, 1.0, 1.0}),
                  std::invalid_argument);

  ChannelSpec spec;
  spec.coefficients = {{1, 0}, {0.5, 0}};
  CHECK_THROWS_AS(Instance::from_channels(3, 1, 1.0, spec),
                  std::invalid_argument);
  spec.coefficients.push_back({0.25, 0});
  const auto ok = Instance::from_channels(3, 1, 1.0, spec);
  CHECK(ok.capacities.size() == 3);
  CHECK(ok.capacities[0] > ok.capacities[1]);

  auto demo = demo_instance();
  demo.set_library(2, 5);  // t = K*M/N = 5*2/5 = 2
  CHECK(demo.cache_size == 2);
  CHECK_THROWS_AS(demo.set_library(1, 4), std::invalid_argument);
  CHECK(demo.subpacketization() == 10);
}
