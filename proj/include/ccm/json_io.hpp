#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "ccm/types.hpp"

namespace ccm {

/// Canonical scheme file encoding.  The emitted byte string is the canonical
/// form: fixed key order, sorted sets, rationals as `p/q` strings (integers
/// when the denominator is 1).  encode(decode(s)) == s byte-for-byte.
std::string encode_scheme(const DeliveryScheme& scheme);

/// Parses and structurally validates a scheme file.  Throws Error(kBadInput)
/// on malformed content.
DeliveryScheme decode_scheme(const std::string& text);

DeliveryScheme load_scheme(const std::string& path);
void save_scheme(const DeliveryScheme& scheme, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Rational <-> JSON helpers shared by the report writers.
nlohmann::ordered_json rational_to_json(const Rational& value);
Rational rational_from_json(const nlohmann::json& node);

/// Parses a list of transmission vectors in the scheme-file term format
/// (used for the golden fragments transcribed from the worked examples).
std::vector<TransmissionVector> decode_transmissions(const std::string& text, Flavor flavor);

}  // namespace ccm
