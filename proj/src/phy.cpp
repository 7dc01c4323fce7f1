#include "ccm/phy.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <random>

#include "ccm/placement.hpp"

namespace ccm {

namespace {

constexpr double kRankTol = 1e-9;

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 task_rng(uint64_t seed, uint64_t task) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(task + 1)));
}

std::complex<double> gaussian(std::mt19937_64& rng, double variance) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return std::sqrt(variance / 2.0) * std::complex<double>(re, im);
}

std::complex<double> unit_symbol(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * arma::datum::pi);
  const double phase = uniform(rng);
  return {std::cos(phase), std::sin(phase)};
}

}  // namespace

const char* combiner_policy_name(CombinerPolicy policy) {
  return policy == CombinerPolicy::kIdentity ? "identity" : "svd";
}

CombinerPolicy combiner_policy_from_name(const std::string& name) {
  if (name == "identity") return CombinerPolicy::kIdentity;
  if (name == "svd") return CombinerPolicy::kSvd;
  fail(ErrorCode::kBadInput, "unknown combiner policy '" + name + "'");
}

arma::cx_mat pick_combiners(const arma::cx_mat& channel, CombinerPolicy policy) {
  const arma::uword G = channel.n_rows;
  if (policy == CombinerPolicy::kIdentity) return arma::cx_mat(G, G, arma::fill::eye);
  arma::cx_mat left;
  arma::vec singular;
  arma::cx_mat right;
  if (!arma::svd(left, singular, right, channel)) {
    fail(ErrorCode::kRankDeficient, "SVD of channel matrix failed");
  }
  return left.head_cols(G);
}

ChannelRealization sample_channels(const NetworkConfig& config, uint64_t seed, CombinerPolicy policy) {
  ChannelRealization channel;
  channel.K = config.K;
  channel.L = config.L;
  channel.G = config.G;
  channel.seed = seed;
  channel.policy = policy;

  std::mt19937_64 rng = task_rng(seed, 0);
  for (int attempt = 0; attempt < 10; ++attempt) {
    channel.H.clear();
    arma::cx_mat stacked(static_cast<arma::uword>(config.K) * config.G, config.L);
    bool full_rank = true;
    for (int user = 0; user < config.K; ++user) {
      arma::cx_mat Hk(config.G, config.L);
      for (arma::uword r = 0; r < Hk.n_rows; ++r) {
        for (arma::uword c = 0; c < Hk.n_cols; ++c) Hk(r, c) = gaussian(rng, 1.0);
      }
      full_rank &= arma::rank(Hk, kRankTol) == static_cast<arma::uword>(config.G);
      stacked.rows(user * config.G, (user + 1) * config.G - 1) = Hk;
      channel.H.push_back(std::move(Hk));
    }
    full_rank &= arma::rank(stacked, kRankTol) >= static_cast<arma::uword>(config.L);
    if (!full_rank) continue;

    for (const arma::cx_mat& Hk : channel.H) {
      arma::cx_mat Uk = pick_combiners(Hk, policy);
      // normalize combiner columns (identity already is; svd columns too)
      for (arma::uword g = 0; g < Uk.n_cols; ++g) Uk.col(g) /= arma::norm(Uk.col(g));
      channel.equiv.push_back(Hk.t() * Uk);  // column g = (u^H H_k)^H
      channel.U.push_back(std::move(Uk));
    }
    return channel;
  }
  fail(ErrorCode::kRankDeficient, "channel sampler failed rank conditions 10 times");
}

arma::cx_vec zf_beamformer(const std::vector<arma::cx_vec>& zf_channels, const arma::cx_vec& target) {
  const arma::uword L = target.n_elem;
  const arma::uword m = zf_channels.size();
  if (arma::norm(target) < kRankTol) fail(ErrorCode::kDegenerateZfSet, "zero target channel");
  if (m == 0) {
    arma::cx_vec w = target / arma::norm(target);
    return w;  // target^H w = ||target||, already real positive
  }
  arma::cx_mat stacked(m, L);
  for (arma::uword i = 0; i < m; ++i) stacked.row(i) = zf_channels[i].t();

  arma::cx_mat left;
  arma::vec singular;
  arma::cx_mat right;
  if (!arma::svd(left, singular, right, stacked)) {
    fail(ErrorCode::kDegenerateZfSet, "SVD of zero-forcing stack failed");
  }
  arma::uword rank = 0;
  for (arma::uword i = 0; i < singular.n_elem; ++i) rank += singular(i) > kRankTol;
  if (rank < m) {
    fail(ErrorCode::kDegenerateZfSet, "zero-forcing channels are linearly dependent");
  }
  if (rank >= L) fail(ErrorCode::kDegenerateZfSet, "no nullspace left for the target");

  const arma::cx_mat nullspace = right.cols(rank, L - 1);
  arma::cx_vec coeff = nullspace.t() * target;
  const double gain = arma::norm(coeff);
  if (gain < kRankTol) {
    fail(ErrorCode::kDegenerateZfSet, "target channel lies in the zero-forcing span");
  }
  return nullspace * (coeff / gain);  // unit norm, target^H w = gain > 0
}

namespace {

struct TransmissionTrace {
  std::vector<StreamRecord> records;
  int served = 0;
  double max_zf_residual = 0;
  double max_cancellation_gap = 0;
  double predicted_mse_sum = 0;
};

TransmissionTrace simulate_transmission(const DeliveryScheme& scheme, const ChannelRealization& channel,
                                        const SimulationOptions& options,
                                        const TransmissionVector& tv) {
  TransmissionTrace trace;
  std::mt19937_64 rng = task_rng(options.seed, static_cast<uint64_t>(tv.index));

  // One unit-power symbol per distinct subpacket, drawn in canonical term order.
  std::map<SubpacketId, std::complex<double>> symbols;
  for (const Term& term : tv.terms) {
    if (!symbols.count(term.subpacket)) symbols[term.subpacket] = unit_symbol(rng);
  }

  // Beamformers and zero-forcing residuals.
  std::vector<arma::cx_vec> beams(tv.terms.size());
  for (size_t i = 0; i < tv.terms.size(); ++i) {
    const Term& term = tv.terms[i];
    std::vector<arma::cx_vec> zf_channels;
    zf_channels.reserve(term.zf.size());
    for (const StreamId& s : term.zf) zf_channels.push_back(channel.equivalent_channel(s));
    beams[i] = zf_beamformer(zf_channels, channel.equivalent_channel(term.recipient));
    for (const StreamId& s : term.zf) {
      const arma::cx_vec h = channel.equivalent_channel(s);
      const double residual = std::abs(arma::cdot(h, beams[i])) / arma::norm(h);
      trace.max_zf_residual = std::max(trace.max_zf_residual, residual);
    }
  }

  arma::cx_vec x(channel.L, arma::fill::zeros);
  for (size_t i = 0; i < tv.terms.size(); ++i) x += symbols[tv.terms[i].subpacket] * beams[i];

  const std::vector<StreamId> served = tv.served_streams();
  trace.served = static_cast<int>(served.size());
  for (const StreamId& stream : served) {
    size_t desired = tv.terms.size();
    for (size_t i = 0; i < tv.terms.size(); ++i) {
      if (tv.terms[i].recipient == stream) {
        if (desired != tv.terms.size()) {
          fail(ErrorCode::kNotStrictMode, "stream carries several desired terms; run strict schemes only");
        }
        desired = i;
      }
    }
    const Term& want = tv.terms[desired];
    const arma::cx_vec h = channel.equivalent_channel(stream);
    const std::complex<double> noise = gaussian(rng, options.noise_variance);
    const std::complex<double> y = arma::cdot(h, x) + noise;

    // Receiver-side reconstruction from cache + known scalar multipliers.
    std::complex<double> rebuilt = 0;
    std::complex<double> true_interference = 0;
    for (size_t i = 0; i < tv.terms.size(); ++i) {
      if (i == desired) continue;
      const std::complex<double> contribution =
          symbols[tv.terms[i].subpacket] * arma::cdot(h, beams[i]);
      true_interference += contribution;
      if (options.cache_cancellation && is_cached(scheme.placement, stream.user, tv.terms[i].subpacket)) {
        rebuilt += contribution;
      }
    }
    if (options.cache_cancellation) {
      trace.max_cancellation_gap =
          std::max(trace.max_cancellation_gap, std::abs(rebuilt - true_interference));
    }

    const std::complex<double> desired_gain = arma::cdot(h, beams[desired]);
    const std::complex<double> recovered = (y - rebuilt) / desired_gain;
    const std::complex<double> sent = symbols[want.subpacket];
    trace.records.push_back({tv.index, stream, sent, recovered, std::abs(recovered - sent)});
    trace.predicted_mse_sum += options.noise_variance / std::norm(desired_gain);
  }
  return trace;
}

}  // namespace

SimulationReport simulate(const DeliveryScheme& scheme, const ChannelRealization& channel,
                          const SimulationOptions& options) {
  if (scheme.flavor != Flavor::kMimoSignal) {
    fail(ErrorCode::kWrongFlavor, "simulation expects a mimo-signal scheme; elevate first");
  }
  if (scheme.mac_mode) {
    fail(ErrorCode::kNotStrictMode, "mac-mode schemes have no one-shot symbol recovery");
  }
  if (channel.K != scheme.config.K || channel.L != scheme.config.L || channel.G != scheme.config.G) {
    fail(ErrorCode::kChannelMismatch, "channel realization does not match the scheme config");
  }

  SimulationReport report;
  report.seed = options.seed;
  report.noise_variance = options.noise_variance;
  report.policy = channel.policy;

  const int n = static_cast<int>(scheme.transmissions.size());
  std::vector<TransmissionTrace> traces(n);
  if (options.parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      traces[i] = simulate_transmission(scheme, channel, options, scheme.transmissions[i]);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      traces[i] = simulate_transmission(scheme, channel, options, scheme.transmissions[i]);
    }
  }

  double mse_sum = 0;
  double predicted_sum = 0;
  size_t streams = 0;
  for (TransmissionTrace& trace : traces) {
    report.per_transmission_streams.push_back(trace.served);
    report.max_zf_residual = std::max(report.max_zf_residual, trace.max_zf_residual);
    report.max_cancellation_gap = std::max(report.max_cancellation_gap, trace.max_cancellation_gap);
    for (const StreamRecord& record : trace.records) {
      report.max_error = std::max(report.max_error, record.error);
      mse_sum += record.error * record.error;
      ++streams;
    }
    predicted_sum += trace.predicted_mse_sum;
    report.records.insert(report.records.end(), trace.records.begin(), trace.records.end());
  }
  if (streams > 0) {
    report.mean_mse = mse_sum / static_cast<double>(streams);
    report.predicted_mean_mse = predicted_sum / static_cast<double>(streams);
  }
  return report;
}

std::string SimulationReport::to_json_string() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["noise_variance"] = noise_variance;
  j["combiner_policy"] = combiner_policy_name(policy);
  j["streams"] = records.size();
  j["per_transmission_streams"] = per_transmission_streams;
  j["max_zf_residual"] = max_zf_residual;
  j["max_cancellation_gap"] = max_cancellation_gap;
  j["max_error"] = max_error;
  j["mean_mse"] = mean_mse;
  j["predicted_mean_mse"] = predicted_mean_mse;
  return j.dump(1) + "\n";
}

}  // namespace ccm
