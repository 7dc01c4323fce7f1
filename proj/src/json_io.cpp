#include "ccm/json_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ccm/model.hpp"

namespace ccm {

using nlohmann::json;
using nlohmann::ordered_json;

nlohmann::ordered_json rational_to_json(const Rational& value) {
  if (value.denominator() == 1) return ordered_json(value.numerator());
  return ordered_json(std::to_string(value.numerator()) + "/" + std::to_string(value.denominator()));
}

Rational rational_from_json(const json& node) {
  if (node.is_number_integer()) return Rational(node.get<long long>());
  if (node.is_string()) {
    const std::string text = node.get<std::string>();
    const auto slash = text.find('/');
    try {
      if (slash == std::string::npos) return Rational(std::stoll(text));
      return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::exception&) {
      fail(ErrorCode::kBadInput, "bad rational '" + text + "'");
    }
  }
  fail(ErrorCode::kBadInput, "rational must be an integer or a 'p/q' string");
}

namespace {

ordered_json stream_to_json(const StreamId& s, Flavor flavor) {
  if (flavor == Flavor::kMimoSignal) {
    return ordered_json(std::to_string(s.user) + ":" + std::to_string(s.stream));
  }
  return ordered_json(s.user);
}

StreamId stream_from_json(const json& node, Flavor flavor) {
  if (flavor == Flavor::kMimoSignal) {
    if (!node.is_string()) fail(ErrorCode::kBadInput, "MIMO stream id must be a 'k:g' string");
    const std::string text = node.get<std::string>();
    const auto colon = text.find(':');
    if (colon == std::string::npos) fail(ErrorCode::kBadInput, "bad stream id '" + text + "'");
    try {
      return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
    } catch (const std::exception&) {
      fail(ErrorCode::kBadInput, "bad stream id '" + text + "'");
    }
  }
  if (!node.is_number_integer()) fail(ErrorCode::kBadInput, "MISO stream id must be a user index");
  return {node.get<int>(), 0};
}

ordered_json packet_to_json(const PacketLabel& label) {
  if (label.is_subset()) return ordered_json(label.subset);
  return ordered_json(label.index);
}

PacketLabel packet_from_json(const json& node) {
  if (node.is_number_integer()) return PacketLabel::cyclic(node.get<int>());
  if (node.is_array()) return PacketLabel::of_subset(node.get<std::vector<int>>());
  fail(ErrorCode::kBadInput, "packet label must be an integer or an integer array");
}

ordered_json subpacket_to_json(const SubpacketId& sp, Flavor flavor) {
  ordered_json j;
  j["file"] = sp.file;
  j["packet"] = packet_to_json(sp.packet);
  j["q"] = sp.q;
  if (flavor == Flavor::kMimoSignal) j["g"] = sp.g;
  return j;
}

SubpacketId subpacket_from_json(const json& node, Flavor flavor) {
  SubpacketId sp;
  sp.file = node.at("file").get<int>();
  sp.packet = packet_from_json(node.at("packet"));
  sp.q = node.at("q").get<int>();
  sp.g = flavor == Flavor::kMimoSignal ? node.at("g").get<int>() : 0;
  return sp;
}

ordered_json term_to_json(const Term& term, Flavor flavor) {
  ordered_json j;
  if (term.is_xor()) {
    ordered_json parts = ordered_json::array();
    for (const Constituent& part : term.xor_parts) {
      ordered_json p;
      p["user"] = part.user;
      p["subpacket"] = subpacket_to_json(part.subpacket, flavor);
      parts.push_back(std::move(p));
    }
    j["xor"] = std::move(parts);
  } else {
    j["recipient"] = stream_to_json(term.recipient, flavor);
    j["subpacket"] = subpacket_to_json(term.subpacket, flavor);
  }
  ordered_json zf = ordered_json::array();
  for (const StreamId& s : term.zf) zf.push_back(stream_to_json(s, flavor));
  j["zf"] = std::move(zf);
  return j;
}

Term term_from_json(const json& node, Flavor flavor) {
  Term term;
  if (node.contains("xor")) {
    for (const json& p : node.at("xor")) {
      term.xor_parts.push_back({p.at("user").get<int>(), subpacket_from_json(p.at("subpacket"), flavor)});
    }
    if (term.xor_parts.empty()) fail(ErrorCode::kBadInput, "empty xor term");
    term.recipient = {term.xor_parts.front().user, 0};
    term.subpacket = term.xor_parts.front().subpacket;
  } else {
    term.recipient = stream_from_json(node.at("recipient"), flavor);
    term.subpacket = subpacket_from_json(node.at("subpacket"), flavor);
  }
  for (const json& s : node.at("zf")) term.zf.push_back(stream_from_json(s, flavor));
  return term;
}

ordered_json transmission_to_json(const TransmissionVector& tv, Flavor flavor) {
  ordered_json j;
  j["index"] = tv.index;
  j["duration"] = rational_to_json(tv.duration);
  ordered_json terms = ordered_json::array();
  for (const Term& term : tv.terms) terms.push_back(term_to_json(term, flavor));
  j["terms"] = std::move(terms);
  return j;
}

TransmissionVector transmission_from_json(const json& node, Flavor flavor) {
  TransmissionVector tv;
  tv.index = node.at("index").get<int>();
  tv.duration = rational_from_json(node.at("duration"));
  for (const json& t : node.at("terms")) tv.terms.push_back(term_from_json(t, flavor));
  return tv;
}

}  // namespace

std::string encode_scheme(const DeliveryScheme& scheme) {
  ordered_json j;
  ordered_json config;
  config["K"] = scheme.config.K;
  config["L"] = scheme.config.L;
  config["G"] = scheme.config.G;
  config["N"] = scheme.config.N;
  config["M"] = rational_to_json(scheme.config.M);
  config["F"] = scheme.config.F;
  j["config"] = std::move(config);
  j["flavor"] = flavor_name(scheme.flavor);
  j["mac_mode"] = scheme.mac_mode;
  ordered_json placement;
  placement["kind"] = scheme.placement.kind == PlacementKind::kCyclic ? "cyclic" : "subset";
  placement["packet_count"] = scheme.placement.packet_count;
  ordered_json caches = ordered_json::array();
  for (const auto& cache : scheme.placement.caches) {
    ordered_json labels = ordered_json::array();
    for (const PacketLabel& label : cache) labels.push_back(packet_to_json(label));
    caches.push_back(std::move(labels));
  }
  placement["caches"] = std::move(caches);
  j["placement"] = std::move(placement);
  j["demands"] = scheme.demands;
  j["subpackets_per_file"] = scheme.subpackets_per_file;
  ordered_json transmissions = ordered_json::array();
  for (const TransmissionVector& tv : scheme.transmissions) {
    transmissions.push_back(transmission_to_json(tv, scheme.flavor));
  }
  j["transmissions"] = std::move(transmissions);
  return j.dump(1) + "\n";
}

DeliveryScheme decode_scheme(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kBadInput, std::string("scheme file is not valid JSON: ") + e.what());
  }
  DeliveryScheme scheme;
  try {
    const json& config = j.at("config");
    scheme.config = validate_config(config.at("K").get<long long>(), config.at("L").get<long long>(),
                                    config.at("G").get<long long>(), config.at("N").get<long long>(),
                                    rational_from_json(config.at("M")), config.at("F").get<long long>());
    scheme.flavor = flavor_from_name(j.at("flavor").get<std::string>());
    scheme.mac_mode = j.at("mac_mode").get<bool>();
    const json& placement = j.at("placement");
    const std::string kind = placement.at("kind").get<std::string>();
    if (kind == "cyclic") {
      scheme.placement.kind = PlacementKind::kCyclic;
    } else if (kind == "subset") {
      scheme.placement.kind = PlacementKind::kSubset;
    } else {
      fail(ErrorCode::kBadInput, "unknown placement kind '" + kind + "'");
    }
    scheme.placement.packet_count = placement.at("packet_count").get<int>();
    for (const json& cache : placement.at("caches")) {
      std::vector<PacketLabel> labels;
      for (const json& label : cache) labels.push_back(packet_from_json(label));
      scheme.placement.caches.push_back(std::move(labels));
    }
    scheme.demands = j.at("demands").get<std::vector<int>>();
    scheme.subpackets_per_file = j.at("subpackets_per_file").get<long long>();
    for (const json& tv : j.at("transmissions")) {
      scheme.transmissions.push_back(transmission_from_json(tv, scheme.flavor));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kBadInput, std::string("scheme file missing/odd field: ") + e.what());
  }
  validate_scheme(scheme);
  return scheme;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kBadInput, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kBadInput, "cannot write '" + path + "'");
  out << text;
}

DeliveryScheme load_scheme(const std::string& path) { return decode_scheme(read_text_file(path)); }

void save_scheme(const DeliveryScheme& scheme, const std::string& path) {
  write_text_file(path, encode_scheme(scheme));
}

std::vector<TransmissionVector> decode_transmissions(const std::string& text, Flavor flavor) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kBadInput, std::string("fragment file is not valid JSON: ") + e.what());
  }
  std::vector<TransmissionVector> out;
  try {
    for (const json& tv : j.at("transmissions")) out.push_back(transmission_from_json(tv, flavor));
  } catch (const json::exception& e) {
    fail(ErrorCode::kBadInput, std::string("fragment file missing/odd field: ") + e.what());
  }
  return out;
}

}  // namespace ccm
