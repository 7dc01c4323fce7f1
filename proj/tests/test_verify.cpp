#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ccm/json_io.hpp"
#include "ccm/verify.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace ccm;

namespace {

Term& find_term(DeliveryScheme& scheme, int tx, const StreamId& recipient) {
  for (Term& term : scheme.transmissions[tx - 1].terms) {
    if (term.recipient == recipient) return term;
  }
  REQUIRE(false);
  return scheme.transmissions[0].terms[0];
}

}  // namespace

TEST_CASE("the elevated worked example passes strict verification with DoF 6") {
  const DeliveryScheme scheme = test::k6_elevated_scheme();
  const VerificationReport report = check_scheme(scheme);
  CHECK(report.pass);
  CHECK(report.mode == VerifyMode::kStrict);
  CHECK(report.violations.empty());
  CHECK(report.achieved_dof == Rational(6));
  CHECK(report.subpacketization == 36);
  CHECK(report.transmissions == 30);
  for (int dof : report.per_transmission_dof) CHECK(dof == 6);
}

TEST_CASE("a zero-forcing gap covered by the cache still passes") {
  // x(1): B_1^{1,1} is not zero-forced at stream 1:1, but user 1 caches packet 1
  DeliveryScheme scheme = test::k6_elevated_scheme();
  const Term& b = find_term(scheme, 1, {2, 1});
  CHECK_FALSE(std::binary_search(b.zf.begin(), b.zf.end(), StreamId{1, 1}));
  CHECK(check_scheme(scheme).pass);
}

TEST_CASE("corrupting C_1 to C_2 breaks decodability at user 1") {
  DeliveryScheme scheme = test::k6_elevated_scheme();
  Term& c = find_term(scheme, 1, {3, 1});
  REQUIRE(c.subpacket.file == 3);
  c.subpacket.packet = PacketLabel::cyclic(2);  // user 1 caches only packet 1
  canonicalize_terms(scheme.transmissions[0]);

  const VerificationReport report = check_scheme(scheme);
  CHECK_FALSE(report.pass);
  bool named = false;
  for (const Violation& v : report.violations) {
    named = named || (v.transmission == 1 && v.rule == rules::kInterference && v.where == StreamId{1, 1});
  }
  CHECK(named);
  CHECK_THROWS_WITH_AS(achieved_dof(scheme), doctest::Contains("NotVerified"), Error);
}

TEST_CASE("bit-level worked example passes in mac mode with three served users") {
  const DeliveryScheme bit = multiserver_bitlevel(test::example1_config(), {1, 2, 3});
  const VerificationReport report = check_scheme(bit);
  CHECK(report.pass);
  CHECK(report.mode == VerifyMode::kMac);
  CHECK(report.per_transmission_dof == std::vector<int>{3});
  CHECK(report.achieved_dof == Rational(3));  // t + L for the virtual view

  // strict mode rejects it: two desired codewords per user in one dimension
  const VerificationReport strict = check_scheme(bit, {VerifyMode::kStrict, true});
  CHECK_FALSE(strict.pass);
  bool count_rule = false;
  for (const Violation& v : strict.violations) count_rule |= v.rule == rules::kStrictCount;
  CHECK(count_rule);
}

TEST_CASE("decoupled multiserver scheme passes mac verification") {
  const DeliveryScheme scheme = decouple(multiserver_bitlevel(test::example1_config(), {1, 2, 3}));
  const VerificationReport report = check_scheme(scheme);
  CHECK(report.pass);
  CHECK(report.mode == VerifyMode::kMac);
  CHECK(report.achieved_dof == Rational(3));
}

TEST_CASE("achieved DoF: 5 for the pure-MISO view, 6 elevated, K for a full group") {
  const NetworkConfig miso_view = validate_config(6, 4, 1, 6, Rational(1));
  const DeliveryScheme pure = elevate_scheme(cyclic_t1_scheduler(miso_view, {1, 2, 3, 4, 5, 6}), 1);
  CHECK(achieved_dof(pure) == Rational(5));  // L + t

  CHECK(achieved_dof(test::k6_elevated_scheme()) == Rational(6));  // Gt + L

  // t + eta = K: one serve group spans all users
  const NetworkConfig full = validate_config(3, 2, 1, 3, Rational(1));
  CHECK(achieved_dof(elevate_scheme(cyclic_t1_scheduler(full, {1, 2, 3}), 1)) == Rational(3));
}

TEST_CASE("predicted subpacketization closed forms") {
  CHECK(predicted_subpacketization(test::k6_config(), BaselineKind::kCyclic) == 36);
  CHECK(predicted_subpacketization(test::k6_config(), BaselineKind::kMultiserver) == 2 * 6 * 4);
  CHECK(predicted_subpacketization(test::example1_config(), BaselineKind::kMultiserver) == 3);

  // eta < t: the cyclic baseline does not apply
  const NetworkConfig heavy = validate_config(6, 2, 2, 6, Rational(2));
  REQUIRE(heavy.t == 2);
  REQUIRE(heavy.eta == 1);
  CHECK_THROWS_WITH_AS(predicted_subpacketization(heavy, BaselineKind::kCyclic),
                       doctest::Contains("ApplicabilityError"), Error);
  CHECK(predicted_subpacketization(heavy, BaselineKind::kMultiserver) == 2 * binomial(6, 2) * 1);
}

TEST_CASE("metric identity over a small elevated-cyclic grid") {
  for (int K = 3; K <= 6; ++K) {
    for (int eta = 1; eta <= 2; ++eta) {
      for (int G = 1; G <= 2; ++G) {
        if (eta * G > K - 1) continue;
        const NetworkConfig config = validate_config(K, eta * G, G, K, Rational(1));
        const DeliveryScheme elevated =
            elevate_scheme(cyclic_t1_scheduler(virtual_config(config), default_demands(config)), G);
        const VerificationReport report = check_scheme(elevated, {VerifyMode::kStrict, true});
        CHECK(report.pass);
        CHECK(report.achieved_dof == Rational(G * (1 + eta)));  // Gt + L
        CHECK(subpacketization_of(elevated) == K * G * (1 + eta));
        CHECK(subpacketization_of(elevated) ==
              predicted_subpacketization(config, BaselineKind::kCyclic));
      }
    }
  }
}

TEST_CASE("duration times served streams meets the demand bound with equality") {
  for (const DeliveryScheme& scheme :
       {test::k6_elevated_scheme(), test::k6_virtual_scheme(),
        decouple(multiserver_bitlevel(test::example1_config(), {1, 2, 3}))}) {
    Rational served_time;
    for (const TransmissionVector& tv : scheme.transmissions) {
      served_time += tv.duration * Rational(static_cast<long long>(tv.served_streams().size()));
    }
    CHECK(served_time == Rational(scheme.config.K - scheme.config.t));
  }
}

TEST_CASE("report and metrics are invariant under q and g relabeling") {
  const DeliveryScheme scheme = test::k6_elevated_scheme();
  const VerificationReport base = check_scheme(scheme);
  std::mt19937_64 rng(4242);
  for (int round = 0; round < 5; ++round) {
    const DeliveryScheme shuffled = test::permute_g(test::permute_q(scheme, rng), rng);
    const VerificationReport report = check_scheme(shuffled);
    CHECK(report.pass == base.pass);
    CHECK(report.achieved_dof == base.achieved_dof);
    CHECK(report.per_transmission_dof == base.per_transmission_dof);
    CHECK(report.subpacketization == base.subpacketization);
  }
}

TEST_CASE("soundness fuzz agrees with the independent oracle") {
  const DeliveryScheme base = test::k6_elevated_scheme();
  std::mt19937_64 rng(20240507);
  int caught = 0;
  for (int round = 0; round < 300; ++round) {
    DeliveryScheme mutated = base;
    const int tx = static_cast<int>(rng() % mutated.transmissions.size());
    TransmissionVector& tv = mutated.transmissions[tx];
    Term& term = tv.terms[rng() % tv.terms.size()];
    switch (rng() % 3) {
      case 0: {  // drop a zero-forcing stream
        term.zf.erase(term.zf.begin() + rng() % term.zf.size());
        break;
      }
      case 1: {  // swap the recipient to another stream
        StreamId other = term.recipient;
        while (other == term.recipient) {
          other = {static_cast<int>(rng() % base.config.K) + 1,
                   static_cast<int>(rng() % base.config.G) + 1};
        }
        term.recipient = other;
        break;
      }
      default: {  // change the packet label
        int packet = term.subpacket.packet.index;
        while (packet == term.subpacket.packet.index) {
          packet = static_cast<int>(rng() % base.config.K) + 1;
        }
        term.subpacket.packet = PacketLabel::cyclic(packet);
        break;
      }
    }
    const test::OracleOutcome oracle = test::oracle_scan(mutated, /*strict=*/true);
    const VerificationReport report = check_scheme(mutated, {VerifyMode::kStrict, true});
    REQUIRE(report.pass == oracle.pass);  // zero false passes, zero false alarms
    if (!report.pass) {
      ++caught;
      bool named = false;
      for (const Violation& v : report.violations) {
        named = named || oracle.bad_transmissions.count(v.transmission);
      }
      CHECK(named);
    }
  }
  CHECK(caught > 250);  // nearly every corruption of a tight scheme breaks a rule
}

TEST_CASE("fragment matching reports structural and q-order mismatches") {
  const DeliveryScheme scheme = test::k6_elevated_scheme();
  auto fragments = decode_transmissions(read_text_file(test::golden_dir() + "/k6_elevated.json"),
                                        Flavor::kMimoSignal);
  std::string diff;
  REQUIRE(contains_fragments_up_to_q(scheme, fragments, &diff));

  // damage one zero-forcing set: structural match must fail
  auto broken = fragments;
  broken[1].terms[2].zf.pop_back();
  CHECK_FALSE(contains_fragments_up_to_q(scheme, broken, &diff));
  CHECK(diff.find("fragment 2") != std::string::npos);

  // same structure but inverted q order for C_1 across the two transmissions
  auto swapped = fragments;
  swapped[0].terms[4].subpacket.q = 2;
  swapped[0].terms[5].subpacket.q = 2;
  swapped[1].terms[2].subpacket.q = 1;
  swapped[1].terms[3].subpacket.q = 1;
  CHECK_FALSE(contains_fragments_up_to_q(scheme, swapped, &diff));
  CHECK(diff.find("q order") != std::string::npos);
}

TEST_CASE("verification report serialization carries violations") {
  DeliveryScheme scheme = test::k6_elevated_scheme();
  scheme.transmissions[4].terms[0].subpacket.packet = PacketLabel::cyclic(5);
  const VerificationReport report = check_scheme(scheme);
  const std::string text = report.to_json_string();
  CHECK(text.find("\"pass\": false") != std::string::npos);
  CHECK(text.find("\"rule\"") != std::string::npos);
}
