#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace ccqoe {

// Absolute slack, in seconds, used by every budget-feasibility comparison.
// Keeps exactly-tight schedules (total time == budget) feasible under
// floating-point summation.
inline constexpr double kBudgetEps = 1e-9;

// Exact n-choose-k. Throws std::invalid_argument for n > 62 (would overflow).
std::uint64_t binomial(int n, int k);

// Achievable per-user rate for channel coefficient h, in data units per
// second: log_base(1 + transmit_power * |h|^2 / noise_power).
double capacity(std::complex<double> h, double transmit_power,
                double noise_power, double log_base = 2.0);

struct ChannelSpec {
  std::vector<std::complex<double>> coefficients;  // one per user
  double transmit_power = 10.0;
  double noise_power = 1.0;
  double log_base = 2.0;
};

// One delivery-phase problem: K users, caching gain t, a time budget and a
// per-user capacity vector (given directly or derived from channels).
struct Instance {
  int num_users = 0;        // K
  int gain = 0;             // t, in [1, K-1]
  double time_budget = 0;   // seconds
  std::vector<double> capacities;  // data units/second, index k-1; 0 = unusable link
  std::optional<int> cache_size;    // M, files
  std::optional<int> library_size;  // N, files

  static Instance from_capacities(int num_users, int gain, double time_budget,
                                  std::vector<double> caps);
  static Instance from_channels(int num_users, int gain, double time_budget,
                                const ChannelSpec& spec);

  // Attaches cache/library sizes; requires gain * N == K * M.
  void set_library(int cache_files, int library_files);

  // P = C(K, t): descriptors per file.
  std::uint64_t subpacketization() const;
};

// A (t+1)-user multicast target with its rate-sorted member order and the
// ladder of delivery times for serving the first j members, j in [0, t+1].
struct MulticastGroup {
  std::vector<int> members;        // ascending user ids, size t+1
  std::vector<int> order;          // order[i] = user of rank i+1 (capacity descending, ties by id)
  std::vector<double> time_ladder; // seconds; size t+2; [0] = 0; +inf past a dead link
};

// All subsets of {1..K} of the given size, lexicographic by sorted members.
std::vector<std::vector<int>> enumerate_subsets(int num_users, int subset_size);

// The multicast groups: all (gain+1)-subsets, lexicographic. Throws for
// gain outside [1, K-1].
std::vector<std::vector<int>> enumerate_groups(int num_users, int gain);

// Position of a sorted subset within enumerate_subsets(num_users, size).
std::uint64_t subset_rank(const std::vector<int>& members, int num_users);

MulticastGroup build_group(std::vector<int> members,
                           const std::vector<double>& capacities,
                           std::uint64_t subpacketization);

std::vector<MulticastGroup> build_groups(const Instance& instance);

// Total time for serving every group in full (all t+1 members each).
double full_cc_time(const Instance& instance);

// Unicast baseline: each user fetches its C(K-1, t) missing descriptors at
// its own rate.
double uncoded_time(const Instance& instance);

// A decision vector with its derived totals. qoe_per_user[k-1] counts the
// groups in which user k's rank falls within the served prefix.
struct Schedule {
  std::vector<int> decisions;  // j per group, canonical group order
  double total_time = 0;       // seconds
  int qoe_sum = 0;             // descriptors delivered
  std::vector<int> qoe_per_user;
};

// Fills totals for a decision vector. Does not check any budget; callers
// assert feasibility. Throws std::invalid_argument for a j outside [0, t+1].
Schedule evaluate_schedule(const std::vector<int>& decisions,
                           const std::vector<MulticastGroup>& groups,
                           int num_users, int gain);

}  // namespace ccqoe
