#pragma once

#include <string>

#include "ccm/types.hpp"

namespace ccm {

enum class VerifyMode { kStrict, kMac };

const char* verify_mode_name(VerifyMode mode);

/// One broken rule: which transmission, which receive stream, which rule.
struct Violation {
  int transmission = 0;  // 1-based; 0 for global completeness gaps
  StreamId where;
  std::string rule;
  std::string detail;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct VerificationReport {
  bool pass = false;
  VerifyMode mode = VerifyMode::kStrict;
  std::vector<Violation> violations;
  std::vector<int> per_transmission_dof;
  Rational achieved_dof;
  long long subpacketization = 0;
  int transmissions = 0;

  std::string to_json_string() const;
  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

struct VerifyOptions {
  VerifyMode mode = VerifyMode::kStrict;
  bool parallel = true;
};

/// Rule ids used in Violation::rule.
namespace rules {
inline constexpr const char* kInterference = "interference";   // neither cached, zero-forced, nor co-desired
inline constexpr const char* kBitDecode = "bit-decode";        // cannot strip cached parts from a desired codeword
inline constexpr const char* kStrictCount = "strict-count";    // != 1 desired term on a served stream
inline constexpr const char* kSelfZf = "self-zf";              // beamformer nulls its own recipient
inline constexpr const char* kZfCapacity = "zf-capacity";      // zero-forcing set larger than L-1
inline constexpr const char* kMissing = "missing";             // owed subpacket never delivered
inline constexpr const char* kDuplicate = "duplicate";         // subpacket delivered twice to one user
inline constexpr const char* kUnwanted = "unwanted";           // delivered subpacket the user never owed
}  // namespace rules

/// Strict mode when every receive dimension carries exactly one desired term,
/// MAC mode for bit-level schemes and flagged elevations.
VerifyMode default_mode(const DeliveryScheme& scheme);

/// Combinatorial decodability + completeness check; failures are report
/// entries, never exceptions.  Transmissions are scanned in parallel when
/// options.parallel is set; the report is identical either way.
VerificationReport check_scheme(const DeliveryScheme& scheme, const VerifyOptions& options);
VerificationReport check_scheme(const DeliveryScheme& scheme);

/// Non-cached demand (K - t files) over total schedule duration.  Throws
/// Error(kNotVerified) if the scheme does not pass check_scheme.
Rational achieved_dof(const DeliveryScheme& scheme);

long long subpacketization_of(const DeliveryScheme& scheme);

enum class BaselineKind { kCyclic, kMultiserver };

BaselineKind baseline_kind_from_name(const std::string& name);

/// Closed-form subpacketization of the elevated scheme: G*K(t+eta) for the
/// cyclic baseline (requires eta >= t), G*C(K,t)*C(K-t-1,eta-1) for the
/// multiserver baseline.
long long predicted_subpacketization(const NetworkConfig& config, BaselineKind kind);

/// True iff the scheme contains, in order, transmissions structurally equal
/// to every fragment up to canonical q-relabeling (q values are nuisance
/// labels; their relative order per (file, packet) group must agree).
/// On mismatch *diff (when non-null) describes the first discrepancy.
bool contains_fragments_up_to_q(const DeliveryScheme& scheme,
                                const std::vector<TransmissionVector>& fragments,
                                std::string* diff = nullptr);

}  // namespace ccm
