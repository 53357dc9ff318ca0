#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ccqoe/model.hpp"

namespace ccqoe {

// One multiple-description piece of a file, addressed by (file, t-subset).
struct Descriptor {
  int file_id = 0;    // 1..N
  int subset_id = 0;  // index into the canonical t-subset enumeration
  std::vector<std::uint8_t> payload;
};

// Every descriptor of every file, with payloads drawn from a seeded RNG.
// Payload content is opaque; correctness only depends on byte identity.
class DescriptorLibrary {
 public:
  DescriptorLibrary(int num_users, int gain, int num_files,
                    std::size_t payload_len, std::uint64_t seed);

  int num_users() const { return num_users_; }
  int gain() const { return gain_; }
  int num_files() const { return num_files_; }
  std::size_t payload_len() const { return payload_len_; }
  std::uint64_t subpacketization() const { return subsets_.size(); }
  std::size_t size() const { return store_.size(); }

  const std::vector<std::vector<int>>& subsets() const { return subsets_; }
  int subset_index(const std::vector<int>& members) const;

  // Throws MissingDescriptor if the (file, subset) pair is absent.
  const std::vector<std::uint8_t>& payload(int file_id, int subset_id) const;

  // Drops one descriptor; used to exercise incomplete-library error paths.
  void erase_descriptor(int file_id, int subset_id);

 private:
  int num_users_;
  int gain_;
  int num_files_;
  std::size_t payload_len_;
  std::vector<std::vector<int>> subsets_;
  std::map<std::pair<int, int>, std::vector<std::uint8_t>> store_;
};

// What one user holds after placement: every descriptor whose t-subset
// contains the user, for every file. N * C(K-1, t-1) entries.
struct CacheContents {
  int user_id = 0;
  std::map<std::pair<int, int>, std::vector<std::uint8_t>> stored;  // (file, subset) -> payload
};

std::vector<CacheContents> place_caches(const DescriptorLibrary& library);

// A transmitted codeword: XOR of the descriptors demanded by the first
// `served` ranked members of the group.
struct Codeword {
  MulticastGroup group;
  int num_users = 0;  // K, needed to rank t-subsets at decode time
  int served = 0;     // j in [1, t+1]
  std::vector<std::uint8_t> payload;
  double rate = 0;    // transmission rate c(S, j), data units/second
};

// demands maps user id -> requested file id; must cover all group members.
Codeword build_codeword(const MulticastGroup& group, int served,
                        const std::map<int, int>& demands,
                        const DescriptorLibrary& library);

// Cancels every other served user's term out of the payload using the
// cache, and returns the caller's demanded descriptor. Throws NotARecipient
// if the user's rank exceeds the served prefix, PlacementViolation if a
// required cancellation term is missing from the cache.
Descriptor decode(int user_id, const Codeword& codeword,
                  const CacheContents& cache,
                  const std::map<int, int>& demands);

// Demand map where user k requests file ((k-1) mod N) + 1.
std::map<int, int> distinct_demands(int num_users, int num_files);

void xor_into(std::vector<std::uint8_t>& dst,
              const std::vector<std::uint8_t>& src);

}  // namespace ccqoe
