#include "ccm/placement.hpp"

#include <algorithm>

#include "ccm/model.hpp"

namespace ccm {

CachePlacement cyclic_placement(const NetworkConfig& config) {
  CachePlacement placement;
  placement.kind = PlacementKind::kCyclic;
  placement.packet_count = config.K;
  placement.caches.resize(config.K);
  for (int user = 1; user <= config.K; ++user) {
    auto& cache = placement.caches[user - 1];
    for (int offset = 0; offset < config.t; ++offset) {
      cache.push_back(PacketLabel::cyclic((user - 1 + offset) % config.K + 1));
    }
    std::sort(cache.begin(), cache.end());
  }
  return placement;
}

CachePlacement subset_placement(const NetworkConfig& config) {
  CachePlacement placement;
  placement.kind = PlacementKind::kSubset;
  placement.packet_count = static_cast<int>(binomial(config.K, config.t));
  placement.caches.resize(config.K);

  std::vector<int> subset(config.t);
  // enumerate t-subsets of [K] in lexicographic order
  for (int i = 0; i < config.t; ++i) subset[i] = i + 1;
  while (true) {
    const PacketLabel label = PacketLabel::of_subset(subset);
    for (int user : subset) placement.caches[user - 1].push_back(label);
    int pos = config.t - 1;
    while (pos >= 0 && subset[pos] == config.K - (config.t - 1 - pos)) --pos;
    if (pos < 0) break;
    ++subset[pos];
    for (int i = pos + 1; i < config.t; ++i) subset[i] = subset[i - 1] + 1;
  }
  return placement;
}

bool is_cached(const CachePlacement& placement, int user, const PacketLabel& label) {
  const auto& cache = placement.cache_of(user);
  return std::binary_search(cache.begin(), cache.end(), label);
}

bool is_cached(const CachePlacement& placement, int user, const SubpacketId& subpacket) {
  return is_cached(placement, user, subpacket.packet);
}

}  // namespace ccm
