#include "ccm/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace ccm {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonPositive: return "NonPositive";
    case ErrorCode::kNonIntegerT: return "NonIntegerT";
    case ErrorCode::kNonIntegerEta: return "NonIntegerEta";
    case ErrorCode::kServeGroupTooLarge: return "ServeGroupTooLarge";
    case ErrorCode::kGExceedsL: return "GExceedsL";
    case ErrorCode::kWrongLength: return "WrongLength";
    case ErrorCode::kBadFileIndex: return "BadFileIndex";
    case ErrorCode::kDemandMissing: return "DemandMissing";
    case ErrorCode::kBadInput: return "BadInput";
    case ErrorCode::kWrongFlavor: return "WrongFlavor";
    case ErrorCode::kConfigMismatch: return "ConfigMismatch";
    case ErrorCode::kUnsupportedT: return "UnsupportedT";
    case ErrorCode::kScheduleNotFound: return "ScheduleNotFound";
    case ErrorCode::kApplicability: return "ApplicabilityError";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kDegenerateZfSet: return "DegenerateZfSet";
    case ErrorCode::kNotStrictMode: return "NotStrictMode";
    case ErrorCode::kChannelMismatch: return "ChannelMismatch";
    case ErrorCode::kNotVerified: return "NotVerified";
  }
  return "Unknown";
}

bool PacketLabel::contains_user(int user) const {
  if (is_subset()) return std::binary_search(subset.begin(), subset.end(), user);
  return index == user;
}

PacketLabel PacketLabel::cyclic(int p) {
  PacketLabel label;
  label.index = p;
  return label;
}

PacketLabel PacketLabel::of_subset(std::vector<int> members) {
  PacketLabel label;
  std::sort(members.begin(), members.end());
  label.subset = std::move(members);
  return label;
}

bool term_canonical_less(const Term& a, const Term& b) {
  if (a.is_xor() || b.is_xor()) return a.xor_parts < b.xor_parts;
  if (a.recipient != b.recipient) return a.recipient < b.recipient;
  if (a.subpacket != b.subpacket) return a.subpacket < b.subpacket;
  return a.zf < b.zf;
}

std::vector<StreamId> TransmissionVector::served_streams() const {
  std::set<StreamId> served;
  for (const Term& term : terms) {
    if (term.is_xor()) {
      for (const Constituent& part : term.xor_parts) served.insert({part.user, 0});
    } else {
      served.insert(term.recipient);
    }
  }
  return {served.begin(), served.end()};
}

const char* flavor_name(Flavor flavor) {
  switch (flavor) {
    case Flavor::kMisoBit: return "miso-bit";
    case Flavor::kMisoSignal: return "miso-signal";
    case Flavor::kMimoSignal: return "mimo-signal";
  }
  return "?";
}

Flavor flavor_from_name(const std::string& name) {
  if (name == "miso-bit") return Flavor::kMisoBit;
  if (name == "miso-signal") return Flavor::kMisoSignal;
  if (name == "mimo-signal") return Flavor::kMimoSignal;
  fail(ErrorCode::kBadInput, "unknown flavor '" + name + "'");
}

long long DeliveryScheme::q_range() const {
  long long denom = static_cast<long long>(placement.packet_count) * g_range();
  if (denom <= 0 || subpackets_per_file % denom != 0) {
    fail(ErrorCode::kBadInput, "subpackets_per_file not divisible by packet_count * g_range");
  }
  return subpackets_per_file / denom;
}

NetworkConfig validate_config(long long K, long long L, long long G, long long N,
                              const Rational& M, long long F) {
  if (K <= 0 || L <= 0 || G <= 0 || N <= 0 || F < 0 || M < 0) {
    fail(ErrorCode::kNonPositive, "K, L, G, N must be positive; M, F non-negative");
  }
  const Rational t_exact = Rational(K) * M / Rational(N);
  if (t_exact.denominator() != 1 || t_exact.numerator() <= 0) {
    std::ostringstream os;
    os << "t = KM/N = " << t_exact << " is not a positive integer";
    fail(ErrorCode::kNonIntegerT, os.str());
  }
  if (G > L) fail(ErrorCode::kGExceedsL, "G = " + std::to_string(G) + " exceeds L = " + std::to_string(L));
  if (L % G != 0) {
    fail(ErrorCode::kNonIntegerEta, "eta = L/G = " + std::to_string(L) + "/" + std::to_string(G) +
                                        " is not an integer");
  }
  NetworkConfig config;
  config.K = static_cast<int>(K);
  config.L = static_cast<int>(L);
  config.G = static_cast<int>(G);
  config.N = static_cast<int>(N);
  config.M = M;
  config.F = F;
  config.t = static_cast<int>(t_exact.numerator());
  config.eta = static_cast<int>(L / G);
  if (config.t + config.eta > config.K) {
    fail(ErrorCode::kServeGroupTooLarge, "t + eta = " + std::to_string(config.t + config.eta) +
                                             " exceeds K = " + std::to_string(config.K));
  }
  return config;
}

std::vector<int> demands_from_list(const std::vector<int>& files, const NetworkConfig& config) {
  if (static_cast<int>(files.size()) != config.K) {
    fail(ErrorCode::kWrongLength, "expected " + std::to_string(config.K) + " demands, got " +
                                      std::to_string(files.size()));
  }
  for (int file : files) {
    if (file < 1 || file > config.N) {
      fail(ErrorCode::kBadFileIndex, "file index " + std::to_string(file) + " outside [1.." +
                                         std::to_string(config.N) + "]");
    }
  }
  return files;
}

void canonicalize_terms(TransmissionVector& tv) {
  for (Term& term : tv.terms) {
    std::sort(term.zf.begin(), term.zf.end());
    std::sort(term.xor_parts.begin(), term.xor_parts.end());
    if (term.is_xor()) {
      term.recipient = {term.xor_parts.front().user, 0};
      term.subpacket = term.xor_parts.front().subpacket;
    }
  }
  std::sort(tv.terms.begin(), tv.terms.end(), term_canonical_less);
}

void canonicalize_scheme(DeliveryScheme& scheme) {
  for (auto& cache : scheme.placement.caches) std::sort(cache.begin(), cache.end());
  for (TransmissionVector& tv : scheme.transmissions) canonicalize_terms(tv);
}

namespace {

void check_packet_label(const DeliveryScheme& scheme, const PacketLabel& label) {
  const bool subset_kind = scheme.placement.kind == PlacementKind::kSubset;
  if (label.is_subset() != subset_kind) fail(ErrorCode::kBadInput, "packet label kind mismatch");
  if (subset_kind) {
    if (!std::is_sorted(label.subset.begin(), label.subset.end()) ||
        std::adjacent_find(label.subset.begin(), label.subset.end()) != label.subset.end()) {
      fail(ErrorCode::kBadInput, "subset packet label not sorted/unique");
    }
    for (int user : label.subset) {
      if (user < 1 || user > scheme.config.K) fail(ErrorCode::kBadInput, "subset member outside [K]");
    }
  } else if (label.index < 1 || label.index > scheme.placement.packet_count) {
    fail(ErrorCode::kBadInput, "cyclic packet index outside range");
  }
}

void check_subpacket(const DeliveryScheme& scheme, const SubpacketId& sp, long long q_range) {
  if (sp.file < 1 || sp.file > scheme.config.N) fail(ErrorCode::kBadInput, "file index out of range");
  check_packet_label(scheme, sp.packet);
  if (sp.q < 1 || sp.q > q_range) fail(ErrorCode::kBadInput, "subpacket q out of range");
  const bool mimo = scheme.flavor == Flavor::kMimoSignal;
  if (mimo && (sp.g < 1 || sp.g > scheme.config.G)) fail(ErrorCode::kBadInput, "stream split g out of range");
  if (!mimo && sp.g != 0) fail(ErrorCode::kBadInput, "MISO subpacket carries a g index");
}

void check_stream(const DeliveryScheme& scheme, const StreamId& s) {
  if (s.user < 1 || s.user > scheme.config.K) fail(ErrorCode::kBadInput, "stream user out of range");
  const bool mimo = scheme.flavor == Flavor::kMimoSignal;
  if (mimo && (s.stream < 1 || s.stream > scheme.config.G)) fail(ErrorCode::kBadInput, "stream index out of range");
  if (!mimo && s.stream != 0) fail(ErrorCode::kBadInput, "MISO stream id carries a stream index");
}

}  // namespace

void validate_scheme(const DeliveryScheme& scheme) {
  const NetworkConfig& config = scheme.config;
  if (static_cast<int>(scheme.demands.size()) != config.K) fail(ErrorCode::kBadInput, "demand vector length != K");
  for (int file : scheme.demands) {
    if (file < 1 || file > config.N) fail(ErrorCode::kBadInput, "demand outside library");
  }
  if (static_cast<int>(scheme.placement.caches.size()) != config.K) {
    fail(ErrorCode::kBadInput, "placement must list one cache per user");
  }
  if (scheme.placement.packet_count <= 0) fail(ErrorCode::kBadInput, "packet_count must be positive");
  const long long q_range = scheme.q_range();  // also checks divisibility

  // Placement budget: |cache(k)| / packet_count = t / K exactly.
  for (int user = 1; user <= config.K; ++user) {
    const auto& cache = scheme.placement.cache_of(user);
    if (!std::is_sorted(cache.begin(), cache.end())) fail(ErrorCode::kBadInput, "cache labels not sorted");
    for (const PacketLabel& label : cache) check_packet_label(scheme, label);
    if (static_cast<long long>(cache.size()) * config.K !=
        static_cast<long long>(config.t) * scheme.placement.packet_count) {
      fail(ErrorCode::kBadInput, "cache budget violates |cache|/packets = t/K for user " + std::to_string(user));
    }
  }

  const bool bit_level = scheme.flavor == Flavor::kMisoBit;
  int expected_index = 1;
  for (const TransmissionVector& tv : scheme.transmissions) {
    if (tv.index != expected_index++) fail(ErrorCode::kBadInput, "transmission indices must be 1..n in order");
    if (tv.terms.empty()) fail(ErrorCode::kBadInput, "empty transmission");
    if (tv.duration <= 0) fail(ErrorCode::kBadInput, "non-positive duration");
    if (!std::is_sorted(tv.terms.begin(), tv.terms.end(), term_canonical_less)) {
      fail(ErrorCode::kBadInput, "terms not in canonical order");
    }
    for (const Term& term : tv.terms) {
      if (term.is_xor() != bit_level) fail(ErrorCode::kBadInput, "term kind does not match scheme flavor");
      check_stream(scheme, term.recipient);
      check_subpacket(scheme, term.subpacket, q_range);
      for (const StreamId& s : term.zf) check_stream(scheme, s);
      if (!std::is_sorted(term.zf.begin(), term.zf.end()) ||
          std::adjacent_find(term.zf.begin(), term.zf.end()) != term.zf.end()) {
        fail(ErrorCode::kBadInput, "zf set not sorted/unique");
      }
      if (term.is_xor()) {
        if (term.xor_parts.front().user != term.recipient.user ||
            term.xor_parts.front().subpacket != term.subpacket) {
          fail(ErrorCode::kBadInput, "codeword head does not mirror first constituent");
        }
        for (const Constituent& part : term.xor_parts) {
          if (part.user < 1 || part.user > config.K) fail(ErrorCode::kBadInput, "constituent user out of range");
          check_subpacket(scheme, part.subpacket, q_range);
        }
        for (size_t i = 1; i < term.xor_parts.size(); ++i) {
          if (term.xor_parts[i - 1].user >= term.xor_parts[i].user) {
            fail(ErrorCode::kBadInput, "constituents must be sorted by distinct user");
          }
        }
      }
    }
  }
}

DeliveryScheme canonical_q_relabel(const DeliveryScheme& scheme) {
  DeliveryScheme out = scheme;
  // (file, packet, old q) -> new q in first-appearance order.
  std::map<std::pair<std::pair<int, PacketLabel>, int>, int> relabel;
  std::map<std::pair<int, PacketLabel>, int> next_q;
  auto map_q = [&](const SubpacketId& sp) {
    const std::pair<int, PacketLabel> group{sp.file, sp.packet};
    auto [it, fresh] = relabel.try_emplace({group, sp.q}, 0);
    if (fresh) it->second = ++next_q[group];
    return it->second;
  };
  for (TransmissionVector& tv : out.transmissions) {
    for (Term& term : tv.terms) {
      term.subpacket.q = map_q(term.subpacket);
      for (Constituent& part : term.xor_parts) part.subpacket.q = map_q(part.subpacket);
    }
    canonicalize_terms(tv);
  }
  return out;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

}  // namespace ccm
