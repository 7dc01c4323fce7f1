#include "ccm/elevate.hpp"

#include <algorithm>

#include "ccm/miso.hpp"
#include "ccm/model.hpp"

namespace ccm {

NetworkConfig virtual_config(const NetworkConfig& config) {
  return validate_config(config.K, config.eta, 1, config.N, config.M, config.F);
}

std::vector<Term> stretch_term(const Term& term, int G) {
  if (term.is_xor()) fail(ErrorCode::kWrongFlavor, "stretching requires signal-level terms");
  const int user = term.recipient.user;
  std::vector<Term> parts;
  parts.reserve(G);
  for (int g = 1; g <= G; ++g) {
    Term part;
    part.recipient = {user, g};
    part.subpacket = term.subpacket;
    part.subpacket.g = g;
    for (const StreamId& zf_user : term.zf) {
      for (int gg = 1; gg <= G; ++gg) part.zf.push_back({zf_user.user, gg});
    }
    for (int gg = 1; gg <= G; ++gg) {
      if (gg != g) part.zf.push_back({user, gg});
    }
    std::sort(part.zf.begin(), part.zf.end());
    parts.push_back(std::move(part));
  }
  return parts;
}

DeliveryScheme elevate_scheme(const DeliveryScheme& miso_scheme, int G) {
  if (miso_scheme.flavor != Flavor::kMisoSignal) {
    fail(ErrorCode::kWrongFlavor, "elevation expects a signal-level MISO scheme");
  }
  if (miso_scheme.config.G != 1) {
    fail(ErrorCode::kConfigMismatch, "input scheme must describe the virtual network (G = 1)");
  }
  if (G < 1) fail(ErrorCode::kConfigMismatch, "G must be positive");

  DeliveryScheme out;
  // Real network: L = eta * G with the virtual eta = miso L.
  out.config = validate_config(miso_scheme.config.K, static_cast<long long>(miso_scheme.config.L) * G, G,
                               miso_scheme.config.N, miso_scheme.config.M, 0);
  out.flavor = Flavor::kMimoSignal;
  out.placement = miso_scheme.placement;
  out.demands = miso_scheme.demands;
  out.subpackets_per_file = miso_scheme.subpackets_per_file * G;
  out.config.F = miso_scheme.config.F == miso_scheme.subpackets_per_file || miso_scheme.config.F == 0
                     ? out.subpackets_per_file
                     : miso_scheme.config.F;

  out.transmissions.reserve(miso_scheme.transmissions.size());
  for (const TransmissionVector& tv : miso_scheme.transmissions) {
    TransmissionVector stretched;
    stretched.index = tv.index;
    stretched.duration = tv.duration / G;
    for (const Term& term : tv.terms) {
      for (Term& part : stretch_term(term, G)) stretched.terms.push_back(std::move(part));
    }
    canonicalize_terms(stretched);
    out.transmissions.push_back(std::move(stretched));
  }
  out.mac_mode = max_terms_per_recipient(out) > 1;
  return out;
}

}  // namespace ccm
