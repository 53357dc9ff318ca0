#include "ccqoe/codec.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

#include "ccqoe/errors.hpp"

namespace ccqoe {

void xor_into(std::vector<std::uint8_t>& dst,
              const std::vector<std::uint8_t>& src) {
  if (dst.size() != src.size())
    throw std::invalid_argument("xor_into: length mismatch");
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

DescriptorLibrary::DescriptorLibrary(int num_users, int gain, int num_files,
                                     std::size_t payload_len,
                                     std::uint64_t seed)
    : num_users_(num_users),
      gain_(gain),
      num_files_(num_files),
      payload_len_(payload_len) {
  if (num_files < 1)
    throw std::invalid_argument("library: need at least one file");
  if (payload_len < 1)
    throw std::invalid_argument("library: payload length must be positive");
  if (gain < 1 || gain > num_users)
    throw std::invalid_argument("library: gain must be in [1, K]");
  subsets_ = enumerate_subsets(num_users, gain);

  std::mt19937_64 rng(seed);
  for (int file = 1; file <= num_files; ++file) {
    for (int sid = 0; sid < static_cast<int>(subsets_.size()); ++sid) {
      std::vector<std::uint8_t> bytes(payload_len);
      std::uint64_t word = 0;
      for (std::size_t i = 0; i < payload_len; ++i) {
        if (i % 8 == 0) word = rng();
        bytes[i] = static_cast<std::uint8_t>(word >> ((i % 8) * 8));
      }
      store_.emplace(std::make_pair(file, sid), std::move(bytes));
    }
  }
}

int DescriptorLibrary::subset_index(const std::vector<int>& members) const {
  if (static_cast<int>(members.size()) != gain_)
    throw std::invalid_argument("subset_index: wrong subset size");
  return static_cast<int>(subset_rank(members, num_users_));
}

const std::vector<std::uint8_t>& DescriptorLibrary::payload(
    int file_id, int subset_id) const {
  auto it = store_.find({file_id, subset_id});
  if (it == store_.end())
    throw MissingDescriptor("missing descriptor: file " +
                            std::to_string(file_id) + ", subset " +
                            std::to_string(subset_id));
  return it->second;
}

void DescriptorLibrary::erase_descriptor(int file_id, int subset_id) {
  store_.erase({file_id, subset_id});
}

std::vector<CacheContents> place_caches(const DescriptorLibrary& library) {
  std::vector<CacheContents> caches(library.num_users());
  for (int user = 1; user <= library.num_users(); ++user)
    caches[user - 1].user_id = user;

  const auto& subsets = library.subsets();
  for (int file = 1; file <= library.num_files(); ++file) {
    for (int sid = 0; sid < static_cast<int>(subsets.size()); ++sid) {
      const auto& bytes = library.payload(file, sid);
      for (int user : subsets[sid])
        caches[user - 1].stored.emplace(std::make_pair(file, sid), bytes);
    }
  }
  return caches;
}

namespace {

// The t-subset indexing the term demanded by `user` within `group`.
std::vector<int> term_subset(const std::vector<int>& members, int user) {
  std::vector<int> subset;
  subset.reserve(members.size() - 1);
  for (int m : members)
    if (m != user) subset.push_back(m);
  return subset;
}

}  // namespace

Codeword build_codeword(const MulticastGroup& group, int served,
                        const std::map<int, int>& demands,
                        const DescriptorLibrary& library) {
  const int max_served = static_cast<int>(group.order.size());
  if (served < 1 || served > max_served)
    throw std::invalid_argument("build_codeword: served count out of [1, t+1]");
  for (int member : group.members) {
    if (!demands.count(member))
      throw std::invalid_argument("build_codeword: no demand for user " +
                                  std::to_string(member));
  }

  Codeword codeword;
  codeword.group = group;
  codeword.num_users = library.num_users();
  codeword.served = served;
  codeword.payload.assign(library.payload_len(), 0);
  for (int i = 0; i < served; ++i) {
    const int user = group.order[i];
    const int sid = library.subset_index(term_subset(group.members, user));
    xor_into(codeword.payload, library.payload(demands.at(user), sid));
  }
  const double ladder_time = group.time_ladder[served];
  const double chunk = 1.0 / static_cast<double>(library.subpacketization());
  codeword.rate = std::isfinite(ladder_time) ? chunk / ladder_time : 0;
  return codeword;
}

Descriptor decode(int user_id, const Codeword& codeword,
                  const CacheContents& cache,
                  const std::map<int, int>& demands) {
  const auto& order = codeword.group.order;
  int rank = 0;  // 1-based position of user_id in the group order
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == user_id) {
      rank = static_cast<int>(i) + 1;
      break;
    }
  }
  if (rank == 0 || rank > codeword.served)
    throw NotARecipient("user " + std::to_string(user_id) +
                        " is not served by this codeword");

  Descriptor result;
  result.file_id = demands.at(user_id);
  result.payload = codeword.payload;
  for (int i = 0; i < codeword.served; ++i) {
    const int other = order[i];
    if (other == user_id) continue;
    // Every cancelled term's t-subset contains this user, so placement
    // guarantees the cache holds it.
    const auto subset = term_subset(codeword.group.members, other);
    const int sid =
        static_cast<int>(subset_rank(subset, codeword.num_users));
    auto it = cache.stored.find({demands.at(other), sid});
    if (it == cache.stored.end())
      throw PlacementViolation("cache of user " + std::to_string(user_id) +
                               " is missing a cancellation term");
    xor_into(result.payload, it->second);
  }
  result.subset_id = static_cast<int>(
      subset_rank(term_subset(codeword.group.members, user_id),
                  codeword.num_users));
  return result;
}

std::map<int, int> distinct_demands(int num_users, int num_files) {
  std::map<int, int> demands;
  for (int user = 1; user <= num_users; ++user)
    demands[user] = (user - 1) % num_files + 1;
  return demands;
}

}  // namespace ccqoe
