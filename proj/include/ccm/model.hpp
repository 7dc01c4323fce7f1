#pragma once

#include "ccm/types.hpp"

namespace ccm {

/// Validates raw network parameters and computes t = KM/N and eta = L/G.
/// F = 0 means "fill in later from the scheme's subpacketization".
NetworkConfig validate_config(long long K, long long L, long long G, long long N,
                              const Rational& M, long long F = 0);

/// Maps a length-K list of file indices to the per-user demand vector.
/// Duplicate requests are allowed.
std::vector<int> demands_from_list(const std::vector<int>& files, const NetworkConfig& config);

/// Sorts terms (and their zf sets / constituents) into canonical order so that
/// scheme equality is structural equality.
void canonicalize_terms(TransmissionVector& tv);
void canonicalize_scheme(DeliveryScheme& scheme);

/// Structural well-formedness: index ranges, sortedness, flavor consistency,
/// placement budget.  Throws Error(kBadInput) on violation.  Decode calls
/// this; decodability rules are the verifier's job, not here.
void validate_scheme(const DeliveryScheme& scheme);

/// Relabels subpacket indices q to first-appearance order within each
/// (file, packet) group.  q is a nuisance label; two schemes are considered
/// equivalent iff equal after this normalization.
DeliveryScheme canonical_q_relabel(const DeliveryScheme& scheme);

/// Binomial coefficient (exact, throws on overflow-scale inputs).
long long binomial(int n, int k);

}  // namespace ccm
