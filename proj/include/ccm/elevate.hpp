#pragma once

#include "ccm/types.hpp"

namespace ccm {

/// The virtual MISO network behind a MIMO config: same K, t, N, M, but
/// transmitter gain eta = L/G and single-stream receivers.
NetworkConfig virtual_config(const NetworkConfig& config);

/// Stretches one signal-level MISO term into G per-stream MIMO terms.  Part g
/// goes to stream (k, g); its zero-forcing set covers all G streams of every
/// virtual zf user plus the recipient's other G-1 streams (L-1 streams total).
std::vector<Term> stretch_term(const Term& term, int G);

/// Elevates a virtual-network scheme to the real MIMO network: placement and
/// transmission count carry over, every term is stretched, subpacketization
/// is multiplied by G.
DeliveryScheme elevate_scheme(const DeliveryScheme& miso_scheme, int G);

}  // namespace ccm
