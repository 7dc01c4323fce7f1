#pragma once

#include <boost/rational.hpp>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccm {

/// Exact rational arithmetic for cache budgets, durations and DoF values.
using Rational = boost::rational<long long>;

enum class ErrorCode {
  // config validation
  kNonPositive,
  kNonIntegerT,
  kNonIntegerEta,
  kServeGroupTooLarge,
  kGExceedsL,
  // demand / input handling
  kWrongLength,
  kBadFileIndex,
  kDemandMissing,
  kBadInput,
  // scheme transforms
  kWrongFlavor,
  kConfigMismatch,
  // scheduling
  kUnsupportedT,
  kScheduleNotFound,
  kApplicability,
  // physical layer
  kRankDeficient,
  kDegenerateZfSet,
  kNotStrictMode,
  kChannelMismatch,
  kNotVerified,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

/// One spatial data stream: stream g at user k.  MISO flavors use stream = 0.
struct StreamId {
  int user = 0;
  int stream = 0;
  friend auto operator<=>(const StreamId&, const StreamId&) = default;
};

/// Packet naming: cyclic placements index packets 1..K, subset placements
/// label them with sorted t-subsets of [K].  Exactly one variant is populated.
struct PacketLabel {
  int index = 0;             // cyclic variant, 0 when unused
  std::vector<int> subset;   // subset variant, empty when unused

  bool is_subset() const { return !subset.empty(); }
  bool contains_user(int user) const;

  static PacketLabel cyclic(int p);
  static PacketLabel of_subset(std::vector<int> members);

  friend auto operator<=>(const PacketLabel&, const PacketLabel&) = default;
};

/// Names one transmitted data unit: subpacket q (and stream split g, when the
/// scheme is MIMO-elevated) of packet `packet` of file `file`.  g = 0 in MISO
/// schemes.
struct SubpacketId {
  int file = 0;
  PacketLabel packet;
  int q = 0;
  int g = 0;
  friend auto operator<=>(const SubpacketId&, const SubpacketId&) = default;
};

/// One XOR constituent of a bit-level codeword, tagged with the user it is
/// meant for.
struct Constituent {
  int user = 0;
  SubpacketId subpacket;
  friend auto operator<=>(const Constituent&, const Constituent&) = default;
};

/// One beamformed term of a transmission vector.
///
/// Plain (signal-level) terms carry a single subpacket for `recipient` and an
/// empty `xor_parts`.  Bit-level codewords list every constituent in
/// `xor_parts` (sorted by user); `recipient`/`subpacket` mirror the first
/// constituent so both kinds share one canonical sort order.
struct Term {
  StreamId recipient;
  SubpacketId subpacket;
  std::vector<Constituent> xor_parts;
  std::vector<StreamId> zf;  // sorted zero-forcing set

  bool is_xor() const { return !xor_parts.empty(); }
  friend auto operator<=>(const Term&, const Term&) = default;
};

bool term_canonical_less(const Term& a, const Term& b);

/// Transmission vector for one TDMA interval.
struct TransmissionVector {
  int index = 0;        // 1-based slot number
  Rational duration;    // file-units per stream spent on this slot
  std::vector<Term> terms;

  std::vector<StreamId> served_streams() const;  // sorted distinct recipients
  friend bool operator==(const TransmissionVector&, const TransmissionVector&) = default;
};

enum class Flavor { kMisoBit, kMisoSignal, kMimoSignal };

const char* flavor_name(Flavor flavor);
Flavor flavor_from_name(const std::string& name);

enum class PlacementKind { kCyclic, kSubset };

/// Per-user cached packet labels; identical across files.
struct CachePlacement {
  PlacementKind kind = PlacementKind::kCyclic;
  int packet_count = 0;
  std::vector<std::vector<PacketLabel>> caches;  // caches[k-1], sorted

  const std::vector<PacketLabel>& cache_of(int user) const { return caches.at(user - 1); }
  friend bool operator==(const CachePlacement&, const CachePlacement&) = default;
};

/// Validated network parameters with the derived coded caching gain t = KM/N
/// and per-stream transmit gain eta = L/G.
struct NetworkConfig {
  int K = 0;        // users
  int L = 0;        // transmitter spatial multiplexing gain
  int G = 0;        // receiver spatial multiplexing gain
  int N = 0;        // library size in files
  Rational M;       // per-user cache size in files
  long long F = 0;  // nominal file size in data units (bookkeeping)
  int t = 0;        // coded caching gain KM/N
  int eta = 0;      // L/G
  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// A complete delivery scheme: the contract object every module exchanges.
struct DeliveryScheme {
  NetworkConfig config;
  Flavor flavor = Flavor::kMisoSignal;
  bool mac_mode = false;  // multiple co-desired terms per receive dimension
  CachePlacement placement;
  std::vector<int> demands;  // demands[k-1] = requested file of user k
  long long subpackets_per_file = 0;
  std::vector<TransmissionVector> transmissions;

  int g_range() const { return flavor == Flavor::kMimoSignal ? config.G : 1; }
  long long q_range() const;
  int demand_of(int user) const { return demands.at(user - 1); }

  friend bool operator==(const DeliveryScheme&, const DeliveryScheme&) = default;
};

}  // namespace ccm
