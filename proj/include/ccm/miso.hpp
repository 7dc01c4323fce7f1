#pragma once

#include "ccm/types.hpp"

namespace ccm {

inline constexpr long long kDefaultNodeBudget = 10'000'000;

/// Undelivered demand tracked by the exact scheduler: how many subpackets of
/// its demanded file's packet p each user still owes, for every owner packet
/// p it does not cache.
struct DemandState {
  int K = 0;
  int serve_size = 0;  // users per transmission (t + eta)
  int per_pair = 0;    // subpackets owed per (user, packet) pair
  std::vector<int> demands;
  std::vector<int> remaining;    // row-major (user-1)*K + (packet-1)
  std::vector<long long> per_user;  // outstanding terms per user
  long long total = 0;

  int& at(int user, int packet) { return remaining[(user - 1) * K + (packet - 1)]; }
  int at(int user, int packet) const { return remaining[(user - 1) * K + (packet - 1)]; }

  /// Every user owes t+eta subpackets of each of the K-1 packets it does not
  /// cache (t = 1 cyclic placement).
  static DemandState for_cyclic_t1(const NetworkConfig& config, const std::vector<int>& demands);
};

struct ScheduleResult {
  std::vector<TransmissionVector> transmissions;
  long long nodes = 0;  // candidate transmissions applied during the search
};

/// Deterministic backtracking search over (serve set, owner assignment)
/// choices.  Every produced transmission is full: t+eta terms with distinct
/// recipients, each term's packet owned by another served user, zf set =
/// served \ {recipient, owner}.  First candidates follow the hub rotation
/// pattern (pivot user paired against a cyclic window), so on the happy path
/// the schedule matches the reference cyclic construction.
/// Throws Error(kScheduleNotFound) once the node budget is exhausted.
ScheduleResult schedule_search(DemandState& state, const NetworkConfig& config,
                               long long node_budget = kDefaultNodeBudget);

/// Bit-level multiserver baseline: one transmission per (t+eta)-subset S, one
/// XOR codeword per (t+1)-subset T of S, zero-forced at S \ T.
DeliveryScheme multiserver_bitlevel(const NetworkConfig& config, const std::vector<int>& demands);

/// Splits every XOR codeword into one plain beamformed term per constituent,
/// keeping the codeword's zero-forcing set.
DeliveryScheme decouple(const DeliveryScheme& scheme);

/// Low-subpacketization cyclic baseline for t = 1, built by exact search.
DeliveryScheme cyclic_t1_scheduler(const NetworkConfig& config, const std::vector<int>& demands,
                                   long long node_budget = kDefaultNodeBudget);

/// Largest number of same-recipient terms in any transmission; > 1 means the
/// scheme needs MAC-mode (joint) decoding.
int max_terms_per_recipient(const DeliveryScheme& scheme);

}  // namespace ccm
