#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ccm/phy.hpp"
#include "ccm/verify.hpp"
#include "test_util.hpp"

using namespace ccm;

TEST_CASE("channel sampling is deterministic and satisfies the rank conditions") {
  const NetworkConfig config = test::k6_config();
  const ChannelRealization a = sample_channels(config, 7);
  const ChannelRealization b = sample_channels(config, 7);
  REQUIRE(a.H.size() == 6);
  for (int k = 0; k < 6; ++k) {
    CHECK(arma::approx_equal(a.H[k], b.H[k], "absdiff", 0.0));
    CHECK(arma::rank(a.H[k], 1e-9) == 2);
    CHECK(a.H[k].n_rows == 2);
    CHECK(a.H[k].n_cols == 4);
  }
  const ChannelRealization c = sample_channels(config, 8);
  CHECK_FALSE(arma::approx_equal(a.H[0], c.H[0], "absdiff", 1e-12));
}

TEST_CASE("G = 1 equivalent channel is the conjugated channel row") {
  const NetworkConfig config = validate_config(4, 2, 1, 4, Rational(1));
  const ChannelRealization channel = sample_channels(config, 3);
  for (int k = 1; k <= 4; ++k) {
    const arma::cx_vec h = channel.equivalent_channel({k, 1});
    const arma::cx_vec expected = channel.H[k - 1].t() * arma::cx_vec{1.0};
    CHECK(arma::approx_equal(h, expected, "absdiff", 1e-14));
  }
}

TEST_CASE("combiner policies: identity is the identity, svd yields orthogonal rows") {
  const NetworkConfig config = test::k6_config();
  const ChannelRealization channel = sample_channels(config, 11);
  for (const arma::cx_mat& Hk : channel.H) {
    CHECK(arma::approx_equal(pick_combiners(Hk, CombinerPolicy::kIdentity),
                             arma::cx_mat(2, 2, arma::fill::eye), "absdiff", 0.0));
    const arma::cx_mat U = pick_combiners(Hk, CombinerPolicy::kSvd);
    CHECK(arma::approx_equal(U.t() * U, arma::cx_mat(U.n_cols, U.n_cols, arma::fill::eye), "absdiff",
                             1e-12));
    const arma::cx_mat rows = U.t() * Hk;  // G x L with orthogonal rows
    const arma::cx_mat gram = rows * rows.t();
    for (arma::uword r = 0; r < gram.n_rows; ++r) {
      for (arma::uword c = 0; c < gram.n_cols; ++c) {
        if (r != c) CHECK(std::abs(gram(r, c)) < 1e-10);
      }
    }
  }
}

TEST_CASE("zero-forcing beamformer basics") {
  // L = 2: nulling e_1 leaves exactly e_2 (up to phase, fixed to be real positive)
  arma::cx_vec e1(2, arma::fill::zeros), e2(2, arma::fill::zeros);
  e1(0) = 1.0;
  e2(1) = 1.0;
  const arma::cx_vec w = zf_beamformer({e1}, e2);
  CHECK(std::abs(w(0)) < 1e-14);
  CHECK(std::abs(w(1) - std::complex<double>(1.0, 0.0)) < 1e-14);

  // empty zero-forcing set: matched direction
  const arma::cx_vec w0 = zf_beamformer({}, e2);
  CHECK(std::abs(arma::cdot(e2, w0) - std::complex<double>(1.0, 0.0)) < 1e-14);

  // the target inside the zero-forcing span has no usable gain
  CHECK_THROWS_WITH_AS(zf_beamformer({e2}, e2), doctest::Contains("DegenerateZfSet"), Error);
  CHECK_THROWS_WITH_AS(zf_beamformer({e1, e1}, e2), doctest::Contains("DegenerateZfSet"), Error);
}

TEST_CASE("zero-forcing residuals stay under 1e-10 across seeds") {
  const DeliveryScheme scheme = test::k6_elevated_scheme();
  double worst = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const ChannelRealization channel = sample_channels(scheme.config, seed);
    SimulationOptions options;
    options.seed = seed;
    const SimulationReport report = simulate(scheme, channel, options);
    worst = std::max(worst, report.max_zf_residual);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("noiseless recovery is exact for the worked example") {
  const DeliveryScheme scheme = test::k6_elevated_scheme();
  const ChannelRealization channel = sample_channels(scheme.config, 123);
  SimulationOptions options;
  options.seed = 123;
  const SimulationReport report = simulate(scheme, channel, options);
  CHECK(report.records.size() == 30 * 6);
  CHECK(report.max_error <= 1e-8);
  CHECK(report.max_cancellation_gap <= 1e-10);
  for (int streams : report.per_transmission_streams) CHECK(streams == 6);

  const VerificationReport verification = check_scheme(scheme);
  CHECK(report.per_transmission_streams == verification.per_transmission_dof);
}

TEST_CASE("disabling cache cancellation wrecks recovery") {
  const DeliveryScheme scheme = test::k6_elevated_scheme();
  const ChannelRealization channel = sample_channels(scheme.config, 5);
  SimulationOptions options;
  options.seed = 5;
  options.cache_cancellation = false;
  const SimulationReport report = simulate(scheme, channel, options);
  // user 1 decodes A_2^{1,1} on stream 1:1 against un-cancelled B_1, C_1 terms
  double stream11_error = 0;
  for (const StreamRecord& record : report.records) {
    if (record.transmission == 1 && record.stream == StreamId{1, 1}) stream11_error = record.error;
  }
  CHECK(stream11_error >= 0.1);
  CHECK(report.max_error >= 0.1);
}

TEST_CASE("noiseless exactness across a small scheme grid") {
  for (int K = 3; K <= 5; ++K) {
    for (int eta = 1; eta <= 2; ++eta) {
      for (int G = 1; G <= 2; ++G) {
        if (eta * G > K - 1) continue;
        const NetworkConfig config = validate_config(K, eta * G, G, K, Rational(1));
        const DeliveryScheme scheme =
            elevate_scheme(cyclic_t1_scheduler(virtual_config(config), default_demands(config)), G);
        const ChannelRealization channel = sample_channels(scheme.config, 17);
        SimulationOptions options;
        options.seed = 17;
        const SimulationReport report = simulate(scheme, channel, options);
        CHECK(report.max_error <= 1e-8);
      }
    }
  }
}

TEST_CASE("both combiner policies recover noiselessly on the same seed") {
  const DeliveryScheme scheme = test::k6_elevated_scheme();
  for (const CombinerPolicy policy : {CombinerPolicy::kIdentity, CombinerPolicy::kSvd}) {
    const ChannelRealization channel = sample_channels(scheme.config, 29, policy);
    SimulationOptions options;
    options.seed = 29;
    CHECK(simulate(scheme, channel, options).max_error <= 1e-8);
  }
}

TEST_CASE("mean MSE scales linearly with the noise variance") {
  const DeliveryScheme scheme = test::k6_elevated_scheme();
  const std::vector<double> variances{1e-4, 1e-3, 1e-2};
  std::vector<double> mean_mse(variances.size(), 0.0);
  const int seeds = 10;
  for (uint64_t seed = 0; seed < seeds; ++seed) {
    const ChannelRealization channel = sample_channels(scheme.config, seed);
    for (size_t i = 0; i < variances.size(); ++i) {
      SimulationOptions options;
      options.seed = seed;
      options.noise_variance = variances[i];
      mean_mse[i] += simulate(scheme, channel, options).mean_mse / seeds;
    }
  }
  // least-squares slope in log-log coordinates
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < variances.size(); ++i) {
    const double x = std::log(variances[i]), y = std::log(mean_mse[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(variances.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("simulation rejects wrong inputs") {
  const DeliveryScheme miso = test::k6_virtual_scheme();
  const ChannelRealization channel = sample_channels(test::k6_config(), 1);
  SimulationOptions options;
  CHECK_THROWS_WITH_AS(simulate(miso, channel, options), doctest::Contains("WrongFlavor"), Error);

  const NetworkConfig mac_config = validate_config(6, 4, 2, 6, Rational(1));
  const DeliveryScheme mac = elevate_scheme(
      decouple(multiserver_bitlevel(virtual_config(mac_config), {1, 2, 3, 4, 5, 6})), 2);
  REQUIRE(mac.mac_mode);
  CHECK_THROWS_WITH_AS(simulate(mac, channel, options), doctest::Contains("NotStrictMode"), Error);

  const ChannelRealization wrong = sample_channels(validate_config(4, 4, 2, 4, Rational(1)), 1);
  CHECK_THROWS_WITH_AS(simulate(test::k6_elevated_scheme(), wrong, options),
                       doctest::Contains("ChannelMismatch"), Error);
}

TEST_CASE("per-stream MSE tracks variance over squared channel gain") {
  const DeliveryScheme scheme = test::k6_elevated_scheme();
  const ChannelRealization channel = sample_channels(scheme.config, 41);
  SimulationOptions options;
  options.seed = 41;
  options.noise_variance = 1e-3;
  std::vector<double> ratios;
  const int trials = 30;
  double mse_sum = 0, predicted = 0;
  for (int rep = 0; rep < trials; ++rep) {
    options.seed = 1000 + rep;
    const SimulationReport report = simulate(scheme, channel, options);
    mse_sum += report.mean_mse;
    predicted = report.predicted_mean_mse;  // channel-only, identical each run
  }
  CHECK(mse_sum / trials == doctest::Approx(predicted).epsilon(0.25));
}
