#pragma once

#include "ccm/types.hpp"

namespace ccm {

/// Splits each file into K packets; user k caches the cyclic window
/// {k, k+1, ..., k+t-1} (mod K).
CachePlacement cyclic_placement(const NetworkConfig& config);

/// Splits each file into (K choose t) packets labeled by t-subsets; user k
/// caches every packet whose label contains k.
CachePlacement subset_placement(const NetworkConfig& config);

/// Membership query used by the verifier and the simulator.  Only the packet
/// label matters; q and g never affect membership.
bool is_cached(const CachePlacement& placement, int user, const PacketLabel& label);
bool is_cached(const CachePlacement& placement, int user, const SubpacketId& subpacket);

}  // namespace ccm
