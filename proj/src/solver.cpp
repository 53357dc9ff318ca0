#include "ccqoe/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <stdexcept>

#include "ccqoe/errors.hpp"

namespace ccqoe {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_inputs(const std::vector<MulticastGroup>& groups, int num_users,
                  int gain, double time_budget) {
  if (groups.empty())
    throw std::invalid_argument("solve: group list is empty");
  if (num_users < 2 || gain < 1 || gain > num_users - 1)
    throw std::invalid_argument("solve: bad (K, t) pair");
  if (!(time_budget >= 0))
    throw std::invalid_argument("solve: time budget must be >= 0");
  for (const auto& group : groups) {
    if (group.time_ladder.size() != static_cast<std::size_t>(gain) + 2)
      throw std::invalid_argument("solve: group ladder size does not match t");
  }
}

// Plain depth-first recursion over the groups in canonical order. Budget
// spending is accumulated left to right, giving the same floating-point
// sums the dynamic program forms, so the two exact solvers agree on
// feasibility bit for bit.
struct ExhaustiveSearch {
  const std::vector<MulticastGroup>& groups;
  int levels;  // t+1
  double budget;
  double eps;
  std::vector<int> current;
  std::vector<int> best;
  int best_value = -1;
  std::uint64_t calls = 0;

  ExhaustiveSearch(const std::vector<MulticastGroup>& groups_, int gain,
                   double budget_, double eps_)
      : groups(groups_),
        levels(gain + 1),
        budget(budget_),
        eps(eps_),
        current(groups_.size(), 0),
        best(groups_.size(), 0) {}

  void recurse(std::size_t depth, double spent, int value) {
    ++calls;
    if (depth == groups.size()) {
      if (value > best_value) {
        best_value = value;
        best = current;
      }
      return;
    }
    const auto& ladder = groups[depth].time_ladder;
    for (int j = 0; j <= levels; ++j) {
      const double next = spent + ladder[j];
      // The isfinite test keeps +inf rungs unservable under an infinite budget.
      if (!(next <= budget + eps) || !std::isfinite(next)) continue;
      current[depth] = j;
      recurse(depth + 1, next, value + j);
    }
  }
};

}  // namespace

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Exhaustive: return "exhaustive";
    case Algorithm::Dp: return "dp";
    case Algorithm::Sdt: return "sdt";
    case Algorithm::Pdt: return "pdt";
  }
  return "unknown";
}

std::optional<Algorithm> algorithm_from_string(std::string_view name) {
  if (name == "exhaustive") return Algorithm::Exhaustive;
  if (name == "dp") return Algorithm::Dp;
  if (name == "sdt") return Algorithm::Sdt;
  if (name == "pdt") return Algorithm::Pdt;
  return std::nullopt;
}

SolverReport solve_exhaustive(const std::vector<MulticastGroup>& groups,
                              int num_users, int gain, double time_budget,
                              const SolveOptions& options) {
  check_inputs(groups, num_users, gain, time_budget);
  const double assignments =
      std::pow(static_cast<double>(gain + 2), static_cast<double>(groups.size()));
  if (!(assignments <= options.exhaustive_assignment_cap)) {
    char count[32];
    std::snprintf(count, sizeof(count), "%.3g", assignments);
    throw TooLargeForExact("exhaustive: " + std::string(count) +
                           " assignments exceed the cap");
  }

  const auto start = Clock::now();
  ExhaustiveSearch search(groups, gain, time_budget, options.budget_eps);
  search.recurse(0, 0.0, 0);

  SolverReport report;
  report.schedule = evaluate_schedule(search.best, groups, num_users, gain);
  report.algorithm = Algorithm::Exhaustive;
  report.iterations = search.calls;
  report.wall_time = seconds_since(start);
  return report;
}

SolverReport solve_dp(const std::vector<MulticastGroup>& groups, int num_users,
                      int gain, double time_budget,
                      const SolveOptions& options) {
  check_inputs(groups, num_users, gain, time_budget);
  const std::size_t group_count = groups.size();
  const int levels = gain + 1;
  const std::size_t value_bound = group_count * static_cast<std::size_t>(levels);
  const std::size_t backtrace_bytes = group_count * (value_bound + 1);
  if (backtrace_bytes > options.dp_backtrace_cap_bytes)
    throw TooLargeForExact("dp: back-trace of " +
                           std::to_string(backtrace_bytes) +
                           " bytes exceeds the cap");
  if (levels > 255)
    throw TooLargeForExact("dp: t+1 exceeds the level encoding");

  const auto start = Clock::now();
  const double inf = std::numeric_limits<double>::infinity();
  // min_time[v] = least total time of any prefix assignment summing to v
  // descriptors; sums accumulate group-ascending.
  std::vector<double> min_time(value_bound + 1, inf);
  std::vector<double> next(value_bound + 1, inf);
  min_time[0] = 0;
  std::vector<std::vector<std::uint8_t>> choice(
      group_count, std::vector<std::uint8_t>(value_bound + 1, 0));
  std::uint64_t relaxations = 0;

  for (std::size_t g = 0; g < group_count; ++g) {
    const auto& ladder = groups[g].time_ladder;
    const std::size_t reachable = (g + 1) * static_cast<std::size_t>(levels);
    const std::size_t upto = std::min(value_bound, reachable);
    std::fill(next.begin(), next.begin() + upto + 1, inf);
    for (std::size_t v = 0; v <= upto; ++v) {
      const int max_j = std::min<std::size_t>(levels, v);
      for (int j = 0; j <= max_j; ++j) {
        ++relaxations;
        const double candidate = min_time[v - j] + ladder[j];
        if (candidate < next[v]) {
          next[v] = candidate;
          choice[g][v] = static_cast<std::uint8_t>(j);
        }
      }
    }
    min_time.swap(next);
  }

  std::size_t best_value = 0;
  for (std::size_t v = value_bound; v > 0; --v) {
    if (min_time[v] <= time_budget + options.budget_eps &&
        std::isfinite(min_time[v])) {
      best_value = v;
      break;
    }
  }

  std::vector<int> decisions(group_count, 0);
  std::size_t v = best_value;
  for (std::size_t g = group_count; g-- > 0;) {
    decisions[g] = choice[g][v];
    v -= static_cast<std::size_t>(decisions[g]);
  }

  SolverReport report;
  report.schedule = evaluate_schedule(decisions, groups, num_users, gain);
  report.algorithm = Algorithm::Dp;
  report.iterations = relaxations;
  report.wall_time = seconds_since(start);
  return report;
}

namespace {

// Candidate heap entries are tagged with the level the group held when the
// entry was pushed; entries whose tag no longer matches are stale and get
// discarded at pop time. The remaining budget never grows, so a candidate
// seen unaffordable can be dropped for good.
struct StepEntry {
  double cost;
  std::size_t group;
  int level_when_pushed;
};

struct StepOrder {
  bool operator()(const StepEntry& a, const StepEntry& b) const {
    if (a.cost != b.cost) return a.cost > b.cost;
    return a.group > b.group;
  }
};

struct ActionEntry {
  double per_descriptor;  // cost divided by descriptors gained
  std::size_t group;
  int target;
  int level_when_pushed;
};

struct ActionOrder {
  bool operator()(const ActionEntry& a, const ActionEntry& b) const {
    if (a.per_descriptor != b.per_descriptor)
      return a.per_descriptor > b.per_descriptor;
    if (a.group != b.group) return a.group > b.group;
    return a.target > b.target;
  }
};

}  // namespace

SolverReport solve_sdt(const std::vector<MulticastGroup>& groups,
                       int num_users, int gain, double time_budget,
                       const SolveOptions& options) {
  check_inputs(groups, num_users, gain, time_budget);
  const auto start = Clock::now();
  const int levels = gain + 1;

  std::vector<int> level(groups.size(), 0);
  std::priority_queue<StepEntry, std::vector<StepEntry>, StepOrder> heap;
  auto push_step = [&](std::size_t g) {
    const int current = level[g];
    if (current >= levels) return;
    const auto& ladder = groups[g].time_ladder;
    const double cost = ladder[current + 1] - ladder[current];
    if (std::isfinite(cost)) heap.push({cost, g, current});
  };
  for (std::size_t g = 0; g < groups.size(); ++g) push_step(g);

  double remaining = time_budget;
  std::uint64_t selections = 0;
  while (!heap.empty()) {
    const StepEntry entry = heap.top();
    heap.pop();
    if (entry.level_when_pushed != level[entry.group]) continue;  // stale
    // The cheapest live step; if it does not fit, none does.
    if (!(entry.cost <= remaining + options.budget_eps)) break;
    remaining -= entry.cost;
    ++level[entry.group];
    ++selections;
    push_step(entry.group);
  }

  SolverReport report;
  report.schedule = evaluate_schedule(level, groups, num_users, gain);
  report.algorithm = Algorithm::Sdt;
  report.iterations = selections;
  report.wall_time = seconds_since(start);
  return report;
}

SolverReport solve_pdt(const std::vector<MulticastGroup>& groups,
                       int num_users, int gain, double time_budget,
                       const SolveOptions& options) {
  check_inputs(groups, num_users, gain, time_budget);
  const auto start = Clock::now();
  const int levels = gain + 1;

  std::vector<int> level(groups.size(), 0);
  std::priority_queue<ActionEntry, std::vector<ActionEntry>, ActionOrder> heap;
  auto push_actions = [&](std::size_t g) {
    const int current = level[g];
    const auto& ladder = groups[g].time_ladder;
    for (int target = current + 1; target <= levels; ++target) {
      if (!std::isfinite(ladder[target])) break;  // ladder stays +inf beyond
      const double cost = ladder[target] - ladder[current];
      heap.push({cost / (target - current), g, target, current});
    }
  };
  for (std::size_t g = 0; g < groups.size(); ++g) push_actions(g);

  double remaining = time_budget;
  std::uint64_t actions = 0;
  while (!heap.empty()) {
    const ActionEntry entry = heap.top();
    heap.pop();
    if (entry.level_when_pushed != level[entry.group]) continue;  // stale
    const auto& ladder = groups[entry.group].time_ladder;
    const double cost = ladder[entry.target] - ladder[entry.level_when_pushed];
    if (!(cost <= remaining + options.budget_eps)) continue;  // never fits again
    remaining -= cost;
    level[entry.group] = entry.target;
    ++actions;
    push_actions(entry.group);
  }

  SolverReport report;
  report.schedule = evaluate_schedule(level, groups, num_users, gain);
  report.algorithm = Algorithm::Pdt;
  report.iterations = actions;
  report.wall_time = seconds_since(start);
  return report;
}

SolverReport solve(Algorithm algorithm,
                   const std::vector<MulticastGroup>& groups, int num_users,
                   int gain, double time_budget, const SolveOptions& options) {
  switch (algorithm) {
    case Algorithm::Exhaustive:
      return solve_exhaustive(groups, num_users, gain, time_budget, options);
    case Algorithm::Dp:
      return solve_dp(groups, num_users, gain, time_budget, options);
    case Algorithm::Sdt:
      return solve_sdt(groups, num_users, gain, time_budget, options);
    case Algorithm::Pdt:
      return solve_pdt(groups, num_users, gain, time_budget, options);
  }
  throw std::invalid_argument("solve: unknown algorithm");
}

SolverReport solve(Algorithm algorithm, const Instance& instance,
                   const SolveOptions& options) {
  return solve(algorithm, build_groups(instance), instance.num_users,
               instance.gain, instance.time_budget, options);
}

}  // namespace ccqoe
