#include "ccqoe/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ccqoe/errors.hpp"

namespace ccqoe {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (n > 62) throw std::invalid_argument("binomial: n > 62 would overflow");
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // Exact at every step: result * (n-k+i) is divisible by i.
    result = result * static_cast<std::uint64_t>(n - k + i) /
             static_cast<std::uint64_t>(i);
  }
  return result;
}

double capacity(std::complex<double> h, double transmit_power,
                double noise_power, double log_base) {
  if (!(transmit_power > 0))
    throw std::invalid_argument("capacity: transmit power must be positive");
  if (!(noise_power > 0))
    throw std::invalid_argument("capacity: noise power must be positive");
  if (!(log_base > 0) || log_base == 1.0)
    throw std::invalid_argument("capacity: log base must be positive and != 1");
  const double snr = transmit_power * std::norm(h) / noise_power;
  return std::log1p(snr) / std::log(log_base);
}

Instance Instance::from_capacities(int num_users, int gain, double time_budget,
                                   std::vector<double> caps) {
  if (num_users < 2)
    throw std::invalid_argument("instance: need at least two users");
  if (gain < 1 || gain > num_users - 1)
    throw std::invalid_argument("instance: gain must be in [1, K-1]");
  if (!(time_budget >= 0))
    throw std::invalid_argument("instance: time budget must be >= 0");
  if (static_cast<int>(caps.size()) != num_users)
    throw std::invalid_argument("instance: capacity vector length must be K");
  for (double c : caps) {
    if (!std::isfinite(c) || c < 0)
      throw std::invalid_argument("instance: capacities must be finite and >= 0");
  }
  Instance out;
  out.num_users = num_users;
  out.gain = gain;
  out.time_budget = time_budget;
  out.capacities = std::move(caps);
  return out;
}

Instance Instance::from_channels(int num_users, int gain, double time_budget,
                                 const ChannelSpec& spec) {
  if (static_cast<int>(spec.coefficients.size()) != num_users)
    throw std::invalid_argument("instance: channel coefficient list length must be K");
  std::vector<double> caps(spec.coefficients.size());
  for (std::size_t i = 0; i < caps.size(); ++i) {
    caps[i] = capacity(spec.coefficients[i], spec.transmit_power,
                       spec.noise_power, spec.log_base);
  }
  return from_capacities(num_users, gain, time_budget, std::move(caps));
}

void Instance::set_library(int cache_files, int library_files) {
  if (cache_files < 1 || library_files < 1)
    throw std::invalid_argument("instance: M and N must be positive");
  if (static_cast<long long>(gain) * library_files !=
      static_cast<long long>(num_users) * cache_files)
    throw std::invalid_argument("instance: gain must equal K*M/N exactly");
  cache_size = cache_files;
  library_size = library_files;
}

std::uint64_t Instance::subpacketization() const {
  return binomial(num_users, gain);
}

std::vector<std::vector<int>> enumerate_subsets(int num_users,
                                                int subset_size) {
  if (num_users < 1 || subset_size < 1 || subset_size > num_users)
    throw std::invalid_argument("enumerate_subsets: size out of range");
  std::vector<std::vector<int>> out;
  std::vector<int> current(subset_size);
  std::iota(current.begin(), current.end(), 1);
  while (true) {
    out.push_back(current);
    int i = subset_size - 1;
    while (i >= 0 && current[i] == num_users - (subset_size - 1 - i)) --i;
    if (i < 0) break;
    ++current[i];
    for (int p = i + 1; p < subset_size; ++p) current[p] = current[p - 1] + 1;
  }
  return out;
}

std::vector<std::vector<int>> enumerate_groups(int num_users, int gain) {
  if (gain < 1 || gain > num_users - 1)
    throw std::invalid_argument("enumerate_groups: gain must be in [1, K-1]");
  return enumerate_subsets(num_users, gain + 1);
}

std::uint64_t subset_rank(const std::vector<int>& members, int num_users) {
  const int size = static_cast<int>(members.size());
  if (size < 1 || size > num_users)
    throw std::invalid_argument("subset_rank: bad subset size");
  std::uint64_t rank = 0;
  int prev = 0;
  for (int i = 0; i < size; ++i) {
    if (members[i] <= prev || members[i] > num_users)
      throw std::invalid_argument("subset_rank: members must be sorted, distinct, in [1..K]");
    for (int v = prev + 1; v < members[i]; ++v)
      rank += binomial(num_users - v, size - 1 - i);
    prev = members[i];
  }
  return rank;
}

MulticastGroup build_group(std::vector<int> members,
                           const std::vector<double>& capacities,
                           std::uint64_t subpacketization) {
  const int num_users = static_cast<int>(capacities.size());
  if (subpacketization == 0)
    throw std::invalid_argument("build_group: subpacketization must be positive");
  std::sort(members.begin(), members.end());
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] < 1 || members[i] > num_users)
      throw std::invalid_argument("build_group: member id out of range");
    if (i > 0 && members[i] == members[i - 1])
      throw std::invalid_argument("build_group: duplicate member");
  }

  MulticastGroup group;
  group.members = members;
  group.order = std::move(members);
  std::sort(group.order.begin(), group.order.end(), [&](int a, int b) {
    const double ca = capacities[a - 1];
    const double cb = capacities[b - 1];
    if (ca != cb) return ca > cb;
    return a < b;
  });

  const double chunk = 1.0 / static_cast<double>(subpacketization);
  group.time_ladder.resize(group.order.size() + 1);
  group.time_ladder[0] = 0;
  for (std::size_t j = 1; j < group.time_ladder.size(); ++j) {
    const double rate = capacities[group.order[j - 1] - 1];
    group.time_ladder[j] = rate > 0 ? chunk / rate : kInf;
  }
  return group;
}

std::vector<MulticastGroup> build_groups(const Instance& instance) {
  const std::uint64_t chunks = instance.subpacketization();
  auto member_sets = enumerate_groups(instance.num_users, instance.gain);
  std::vector<MulticastGroup> groups;
  groups.reserve(member_sets.size());
  for (auto& members : member_sets)
    groups.push_back(build_group(std::move(members), instance.capacities, chunks));
  return groups;
}

double full_cc_time(const Instance& instance) {
  double total = 0;
  for (const auto& group : build_groups(instance))
    total += group.time_ladder.back();
  return total;
}

double uncoded_time(const Instance& instance) {
  const double missing =
      static_cast<double>(binomial(instance.num_users - 1, instance.gain));
  const double chunk = 1.0 / static_cast<double>(instance.subpacketization());
  double total = 0;
  for (double rate : instance.capacities)
    total += rate > 0 ? missing * chunk / rate : kInf;
  return total;
}

Schedule evaluate_schedule(const std::vector<int>& decisions,
                           const std::vector<MulticastGroup>& groups,
                           int num_users, int gain) {
  if (decisions.size() != groups.size())
    throw std::invalid_argument("evaluate_schedule: one decision per group required");
  Schedule schedule;
  schedule.decisions = decisions;
  schedule.qoe_per_user.assign(num_users, 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const int j = decisions[g];
    if (j < 0 || j > gain + 1)
      throw std::invalid_argument("evaluate_schedule: decision out of [0, t+1]");
    schedule.total_time += groups[g].time_ladder[j];
    schedule.qoe_sum += j;
    for (int r = 0; r < j; ++r)
      ++schedule.qoe_per_user[groups[g].order[r] - 1];
  }
  return schedule;
}

}  // namespace ccqoe
