#include "ccm/verify.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "ccm/json_io.hpp"
#include "ccm/miso.hpp"
#include "ccm/model.hpp"
#include "ccm/placement.hpp"

namespace ccm {

const char* verify_mode_name(VerifyMode mode) {
  return mode == VerifyMode::kStrict ? "strict" : "mac";
}

VerifyMode default_mode(const DeliveryScheme& scheme) {
  return scheme.mac_mode || scheme.flavor == Flavor::kMisoBit ? VerifyMode::kMac : VerifyMode::kStrict;
}

namespace {

std::string stream_name(const StreamId& s) {
  if (s.stream == 0) return std::to_string(s.user);
  return std::to_string(s.user) + ":" + std::to_string(s.stream);
}

std::string subpacket_name(const SubpacketId& sp) {
  std::ostringstream os;
  os << "file " << sp.file << " packet ";
  if (sp.packet.is_subset()) {
    os << "{";
    for (size_t i = 0; i < sp.packet.subset.size(); ++i) os << (i ? "," : "") << sp.packet.subset[i];
    os << "}";
  } else {
    os << sp.packet.index;
  }
  os << " q" << sp.q;
  if (sp.g > 0) os << " g" << sp.g;
  return os.str();
}

bool desired_structurally(const Term& term, const StreamId& stream) {
  if (term.is_xor()) {
    return std::any_of(term.xor_parts.begin(), term.xor_parts.end(),
                       [&](const Constituent& part) { return part.user == stream.user; });
  }
  return term.recipient == stream;
}

bool all_parts_cached(const CachePlacement& placement, int user, const Term& term, int except_user) {
  for (const Constituent& part : term.xor_parts) {
    if (part.user == except_user) continue;
    if (!is_cached(placement, user, part.subpacket)) return false;
  }
  return true;
}

/// Scans one transmission against the decodability rules; appends violations.
void scan_transmission(const DeliveryScheme& scheme, const TransmissionVector& tv, VerifyMode mode,
                       std::vector<Violation>& out, int& dof) {
  const int zf_capacity = scheme.config.L - 1;
  const std::vector<StreamId> served = tv.served_streams();
  dof = static_cast<int>(served.size());

  for (const Term& term : tv.terms) {
    if (static_cast<int>(term.zf.size()) > zf_capacity) {
      out.push_back({tv.index, term.recipient, rules::kZfCapacity,
                     "zf set of " + subpacket_name(term.subpacket) + " has " +
                         std::to_string(term.zf.size()) + " streams, beamformer can null " +
                         std::to_string(zf_capacity)});
    }
    if (term.is_xor()) {
      for (const Constituent& part : term.xor_parts) {
        if (std::binary_search(term.zf.begin(), term.zf.end(), StreamId{part.user, 0})) {
          out.push_back({tv.index, {part.user, 0}, rules::kSelfZf,
                         "codeword for user " + std::to_string(part.user) + " is zero-forced at them"});
        }
      }
    } else if (std::binary_search(term.zf.begin(), term.zf.end(), term.recipient)) {
      out.push_back({tv.index, term.recipient, rules::kSelfZf,
                     subpacket_name(term.subpacket) + " is zero-forced at its own recipient"});
    }
  }

  for (const StreamId& stream : served) {
    int desired_count = 0;
    for (const Term& term : tv.terms) {
      if (desired_structurally(term, stream)) {
        ++desired_count;
        if (term.is_xor() && !all_parts_cached(scheme.placement, stream.user, term, stream.user)) {
          out.push_back({tv.index, stream, rules::kBitDecode,
                         "user " + std::to_string(stream.user) +
                             " lacks cached constituents to resolve its codeword"});
        }
        continue;
      }
      // Interference term: must be cached, zero-forced, or (mac) co-desired.
      const bool cached = term.is_xor()
                              ? all_parts_cached(scheme.placement, stream.user, term, 0)
                              : is_cached(scheme.placement, stream.user, term.subpacket);
      if (cached) continue;
      if (std::binary_search(term.zf.begin(), term.zf.end(), stream)) continue;
      if (mode == VerifyMode::kMac && !term.is_xor() &&
          term.subpacket.file == scheme.demand_of(stream.user)) {
        continue;  // co-desired data, joint decoding allowed
      }
      out.push_back({tv.index, stream, rules::kInterference,
                     subpacket_name(term.subpacket) + " for " + stream_name(term.recipient) +
                         " is neither cached, zero-forced, nor co-desired at " + stream_name(stream)});
    }
    if (mode == VerifyMode::kStrict && desired_count != 1) {
      out.push_back({tv.index, stream, rules::kStrictCount,
                     stream_name(stream) + " carries " + std::to_string(desired_count) +
                         " desired terms (strict mode expects 1)"});
    }
  }
}

void check_completeness(const DeliveryScheme& scheme, std::vector<Violation>& out) {
  const long long q_range = scheme.q_range();
  const bool mimo = scheme.flavor == Flavor::kMimoSignal;
  const int g_lo = mimo ? 1 : 0;
  const int g_hi = mimo ? scheme.config.G : 0;

  for (int user = 1; user <= scheme.config.K; ++user) {
    std::map<SubpacketId, std::vector<int>> delivered;  // -> transmission indices
    for (const TransmissionVector& tv : scheme.transmissions) {
      for (const Term& term : tv.terms) {
        if (term.is_xor()) {
          for (const Constituent& part : term.xor_parts) {
            if (part.user == user) delivered[part.subpacket].push_back(tv.index);
          }
        } else if (term.recipient.user == user) {
          delivered[term.subpacket].push_back(tv.index);
        }
      }
    }

    std::set<SubpacketId> owed;
    const int file = scheme.demand_of(user);
    auto add_owed = [&](const PacketLabel& packet) {
      if (is_cached(scheme.placement, user, packet)) return;
      for (long long q = 1; q <= q_range; ++q) {
        for (int g = g_lo; g <= g_hi; ++g) owed.insert({file, packet, static_cast<int>(q), g});
      }
    };
    if (scheme.placement.kind == PlacementKind::kCyclic) {
      for (int p = 1; p <= scheme.placement.packet_count; ++p) add_owed(PacketLabel::cyclic(p));
    } else {
      std::set<PacketLabel> labels;
      for (const auto& cache : scheme.placement.caches) labels.insert(cache.begin(), cache.end());
      for (const PacketLabel& label : labels) add_owed(label);
    }

    for (const auto& [sp, where] : delivered) {
      if (!owed.count(sp)) {
        out.push_back({where.front(), {user, 0}, rules::kUnwanted,
                       "user " + std::to_string(user) + " received " + subpacket_name(sp) +
                           " it never owed"});
      } else if (where.size() > 1) {
        out.push_back({where[1], {user, 0}, rules::kDuplicate,
                       "user " + std::to_string(user) + " received " + subpacket_name(sp) + " " +
                           std::to_string(where.size()) + " times"});
      }
    }
    for (const SubpacketId& sp : owed) {
      if (!delivered.count(sp)) {
        out.push_back({0, {user, 0}, rules::kMissing,
                       "user " + std::to_string(user) + " never received " + subpacket_name(sp)});
      }
    }
  }
}

}  // namespace

VerificationReport check_scheme(const DeliveryScheme& scheme, const VerifyOptions& options) {
  VerificationReport report;
  report.mode = options.mode;
  report.transmissions = static_cast<int>(scheme.transmissions.size());
  report.subpacketization = scheme.subpackets_per_file;

  const int n = report.transmissions;
  std::vector<std::vector<Violation>> per_tv(n);
  report.per_transmission_dof.assign(n, 0);

  if (options.parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      scan_transmission(scheme, scheme.transmissions[i], options.mode, per_tv[i],
                        report.per_transmission_dof[i]);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      scan_transmission(scheme, scheme.transmissions[i], options.mode, per_tv[i],
                        report.per_transmission_dof[i]);
    }
  }
  for (auto& violations : per_tv) {
    report.violations.insert(report.violations.end(), violations.begin(), violations.end());
  }
  check_completeness(scheme, report.violations);

  Rational total_duration;
  for (const TransmissionVector& tv : scheme.transmissions) total_duration += tv.duration;
  if (total_duration > 0) {
    report.achieved_dof = Rational(scheme.config.K - scheme.config.t) / total_duration;
  }
  report.pass = report.violations.empty();
  return report;
}

VerificationReport check_scheme(const DeliveryScheme& scheme) {
  VerifyOptions options;
  options.mode = default_mode(scheme);
  return check_scheme(scheme, options);
}

Rational achieved_dof(const DeliveryScheme& scheme) {
  const VerificationReport report = check_scheme(scheme);
  if (!report.pass) {
    fail(ErrorCode::kNotVerified, "scheme fails " + std::string(verify_mode_name(report.mode)) +
                                      " verification (" + std::to_string(report.violations.size()) +
                                      " violations)");
  }
  return report.achieved_dof;
}

long long subpacketization_of(const DeliveryScheme& scheme) { return scheme.subpackets_per_file; }

BaselineKind baseline_kind_from_name(const std::string& name) {
  if (name == "cyclic") return BaselineKind::kCyclic;
  if (name == "multiserver" || name == "multiserver-bit" || name == "multiserver-signal") {
    return BaselineKind::kMultiserver;
  }
  fail(ErrorCode::kBadInput, "unknown baseline '" + name + "'");
}

long long predicted_subpacketization(const NetworkConfig& config, BaselineKind kind) {
  if (kind == BaselineKind::kCyclic) {
    if (config.eta < config.t) {
      fail(ErrorCode::kApplicability, "cyclic baseline applies only when eta >= t (L >= Gt)");
    }
    return static_cast<long long>(config.G) * config.K * (config.t + config.eta);
  }
  return config.G * binomial(config.K, config.t) * binomial(config.K - config.t - 1, config.eta - 1);
}

std::string VerificationReport::to_json_string() const {
  nlohmann::ordered_json j;
  j["pass"] = pass;
  j["mode"] = verify_mode_name(mode);
  j["achieved_dof"] = rational_to_json(achieved_dof);
  j["subpacketization"] = subpacketization;
  j["transmissions"] = transmissions;
  j["per_transmission_dof"] = per_transmission_dof;
  nlohmann::ordered_json violations_json = nlohmann::ordered_json::array();
  for (const Violation& v : violations) {
    nlohmann::ordered_json vj;
    vj["transmission"] = v.transmission;
    vj["where"] = stream_name(v.where);
    vj["rule"] = v.rule;
    vj["detail"] = v.detail;
    violations_json.push_back(std::move(vj));
  }
  j["violations"] = std::move(violations_json);
  return j.dump(1) + "\n";
}

namespace {

SubpacketId with_q_zeroed(SubpacketId sp) {
  sp.q = 0;
  return sp;
}

Term term_ignoring_q(const Term& term) {
  Term out = term;
  out.subpacket = with_q_zeroed(out.subpacket);
  for (Constituent& part : out.xor_parts) part.subpacket = with_q_zeroed(part.subpacket);
  return out;
}

bool terms_equal_ignoring_q(const TransmissionVector& a, const TransmissionVector& b) {
  if (a.terms.size() != b.terms.size()) return false;
  for (size_t i = 0; i < a.terms.size(); ++i) {
    if (term_ignoring_q(a.terms[i]) != term_ignoring_q(b.terms[i])) return false;
  }
  return true;
}

}  // namespace

bool contains_fragments_up_to_q(const DeliveryScheme& scheme,
                                const std::vector<TransmissionVector>& fragments, std::string* diff) {
  // fragment q <-> scheme q pairs per (file, packet); orders must agree.
  std::map<std::pair<int, PacketLabel>, std::vector<std::pair<int, int>>> q_uses;
  size_t cursor = 0;
  for (size_t fi = 0; fi < fragments.size(); ++fi) {
    size_t match = scheme.transmissions.size();
    for (size_t i = cursor; i < scheme.transmissions.size(); ++i) {
      if (terms_equal_ignoring_q(scheme.transmissions[i], fragments[fi])) {
        match = i;
        break;
      }
    }
    if (match == scheme.transmissions.size()) {
      if (diff) *diff = "fragment " + std::to_string(fi + 1) + " has no structural match";
      return false;
    }
    const TransmissionVector& scheme_tv = scheme.transmissions[match];
    const TransmissionVector& frag_tv = fragments[fi];
    for (size_t ti = 0; ti < frag_tv.terms.size(); ++ti) {
      auto record = [&](const SubpacketId& frag_sp, const SubpacketId& scheme_sp) {
        q_uses[{frag_sp.file, frag_sp.packet}].push_back({frag_sp.q, scheme_sp.q});
      };
      record(frag_tv.terms[ti].subpacket, scheme_tv.terms[ti].subpacket);
      for (size_t pi = 0; pi < frag_tv.terms[ti].xor_parts.size(); ++pi) {
        record(frag_tv.terms[ti].xor_parts[pi].subpacket, scheme_tv.terms[ti].xor_parts[pi].subpacket);
      }
    }
    cursor = match + 1;
  }
  for (const auto& [group, uses] : q_uses) {
    for (size_t i = 0; i < uses.size(); ++i) {
      for (size_t j = i + 1; j < uses.size(); ++j) {
        const bool frag_less = uses[i].first < uses[j].first;
        const bool scheme_less = uses[i].second < uses[j].second;
        const bool frag_eq = uses[i].first == uses[j].first;
        const bool scheme_eq = uses[i].second == uses[j].second;
        if (frag_less != scheme_less || frag_eq != scheme_eq) {
          if (diff) {
            *diff = "q order mismatch on file " + std::to_string(group.first) +
                    ": fragment uses q" + std::to_string(uses[i].first) + "/q" +
                    std::to_string(uses[j].first) + ", scheme q" + std::to_string(uses[i].second) +
                    "/q" + std::to_string(uses[j].second);
          }
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace ccm
