#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccqoe/model.hpp"

namespace ccqoe {

enum class Algorithm { Exhaustive, Dp, Sdt, Pdt };

std::string to_string(Algorithm algorithm);
std::optional<Algorithm> algorithm_from_string(std::string_view name);

struct SolveOptions {
  double budget_eps = kBudgetEps;
  // Exhaustive search refuses instances with more than this many candidate
  // assignments ((t+2)^group_count).
  double exhaustive_assignment_cap = 1e8;
  // Dynamic program refuses instances whose back-trace table exceeds this.
  std::size_t dp_backtrace_cap_bytes = std::size_t{256} << 20;
};

struct SolverReport {
  Schedule schedule;
  Algorithm algorithm = Algorithm::Dp;
  double wall_time = 0;  // seconds, single run
  // exhaustive: recursion calls; dp: relaxation steps; sdt/pdt: selections.
  std::uint64_t iterations = 0;
};

// Exact search by plain recursion over groups, first optimum in traversal
// order wins. Throws TooLargeForExact past the assignment cap.
SolverReport solve_exhaustive(const std::vector<MulticastGroup>& groups,
                              int num_users, int gain, double time_budget,
                              const SolveOptions& options = {});

// Exact multiple-choice knapsack dynamic program over the value dimension:
// minimum total time per achievable descriptor count, then the largest
// count within budget. Throws TooLargeForExact past the memory cap.
SolverReport solve_dp(const std::vector<MulticastGroup>& groups,
                      int num_users, int gain, double time_budget,
                      const SolveOptions& options = {});

// Greedy on step delivery time: repeatedly take the cheapest single-step
// increment until none fits the remaining budget. Ties go to the
// lexicographically first group.
SolverReport solve_sdt(const std::vector<MulticastGroup>& groups,
                       int num_users, int gain, double time_budget,
                       const SolveOptions& options = {});

// Greedy on perceived delivery time: repeatedly take the feasible prefix
// extension with the smallest time per new descriptor. Ties go to the
// lexicographically first group, then the smallest target level.
SolverReport solve_pdt(const std::vector<MulticastGroup>& groups,
                       int num_users, int gain, double time_budget,
                       const SolveOptions& options = {});

SolverReport solve(Algorithm algorithm,
                   const std::vector<MulticastGroup>& groups, int num_users,
                   int gain, double time_budget,
                   const SolveOptions& options = {});

// Convenience: builds the groups, then solves at instance.time_budget.
SolverReport solve(Algorithm algorithm, const Instance& instance,
                   const SolveOptions& options = {});

}  // namespace ccqoe
