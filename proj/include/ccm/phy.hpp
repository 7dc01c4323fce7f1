#pragma once

#include <armadillo>
#include <complex>
#include <cstdint>
#include <string>

#include "ccm/types.hpp"

namespace ccm {

enum class CombinerPolicy { kIdentity, kSvd };

const char* combiner_policy_name(CombinerPolicy policy);
CombinerPolicy combiner_policy_from_name(const std::string& name);

/// Sampled complex-baseband channels plus receive combiners and the
/// equivalent per-stream transmit-side channel vectors.
struct ChannelRealization {
  int K = 0, L = 0, G = 0;
  uint64_t seed = 0;
  CombinerPolicy policy = CombinerPolicy::kIdentity;
  std::vector<arma::cx_mat> H;      // per user: G x L channel matrix
  std::vector<arma::cx_mat> U;      // per user: G x G combiners, column g = u_{k,g}
  std::vector<arma::cx_mat> equiv;  // per user: L x G, column g = h_{k,g} = (u^H H_k)^H

  arma::cx_vec equivalent_channel(const StreamId& s) const {
    return equiv.at(s.user - 1).col(s.stream - 1);
  }
};

/// Draws every H_k i.i.d. circularly-symmetric complex Gaussian (unit
/// variance) from a seeded generator, resampling (up to 10 times) if a
/// realization misses the rank conditions rank(H_k) = G, rank(stacked H) >= L.
ChannelRealization sample_channels(const NetworkConfig& config, uint64_t seed,
                                   CombinerPolicy policy = CombinerPolicy::kIdentity);

/// identity: u_{k,g} = e_g.  svd: u_{k,g} = g-th left singular vector of H_k.
arma::cx_mat pick_combiners(const arma::cx_mat& channel, CombinerPolicy policy);

/// Unit-norm w in the nullspace of the stacked zero-forcing rows, phase
/// rotated so target^H w is real positive.  Throws Error(kDegenerateZfSet) if
/// the zf channels are dependent (rank < count at tol 1e-9) or the target
/// lies in their span.
arma::cx_vec zf_beamformer(const std::vector<arma::cx_vec>& zf_channels, const arma::cx_vec& target);

struct StreamRecord {
  int transmission = 0;
  StreamId stream;
  std::complex<double> sent;
  std::complex<double> recovered;
  double error = 0;
  friend bool operator==(const StreamRecord&, const StreamRecord&) = default;
};

struct SimulationOptions {
  double noise_variance = 0.0;
  uint64_t seed = 0;               // drives symbols and noise
  bool cache_cancellation = true;  // ablation switch: receivers skip cache-aided subtraction
  bool parallel = true;
};

struct SimulationReport {
  uint64_t seed = 0;
  double noise_variance = 0;
  CombinerPolicy policy = CombinerPolicy::kIdentity;
  std::vector<StreamRecord> records;  // (transmission, stream) order
  std::vector<int> per_transmission_streams;
  double max_zf_residual = 0;        // max |h^H w| / ||h|| over zero-forced pairs
  double max_cancellation_gap = 0;   // reconstructed vs ground-truth interference
  double max_error = 0;
  double mean_mse = 0;
  double predicted_mean_mse = 0;  // mean of variance / |h^H w|^2

  std::string to_json_string() const;
  friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

/// Runs every transmission of a strict-mode MIMO scheme over one channel
/// realization: seeded unit-power symbols, nullspace beamformers, per-stream
/// AWGN, cache-aided interference subtraction before the final division.
/// Transmissions are simulated in parallel when options.parallel is set; the
/// per-(seed, transmission) generators make the result identical either way.
SimulationReport simulate(const DeliveryScheme& scheme, const ChannelRealization& channel,
                          const SimulationOptions& options);

}  // namespace ccm
