#include <doctest.h>

#include <climits>
#include <cmath>

#include "hsr/relay_decision.hpp"
#include "support/fixtures.hpp"

using namespace hsr;

namespace {

PathEstimates estimates_for(const Scenario& s, const SimParams& params, int flow_id) {
  const NodePositions pos = positions_at_slot(s, 0);
  const ChannelContext ctx{pos, params.channel, nullptr};
  return estimate_standalone_throughput(s.flows[static_cast<std::size_t>(flow_id)], ctx,
                                        params.frame);
}

}  // namespace

TEST_CASE("frame demand volume") {
  FrameConfig frame;
  CHECK(frame_demand_bits(1e8, frame) == doctest::Approx(1e8 * 0.14485));
}

TEST_CASE("standalone estimates against an independent scalar recomputation") {
  const SimParams params = fixtures::default_params();
  const Scenario s = fixtures::manual_scenario({{12, 1e8}}, 190.0);
  const PathEstimates est = estimates_for(s, params, 0);

  // test-local recomputation of the direct path
  const NodePositions pos = positions_at_slot(s, 0);
  const Position3D mr = pos.mrs[12];
  const double d = std::sqrt(mr.x * mr.x + (mr.y - 155) * (mr.y - 155) +
                             (mr.z - 10) * (mr.z - 10));
  const double pl = d <= 153.3 ? 108.75 - 14.5 * std::log10(d) : 42.34 + 15.9 * std::log10(d);
  const double pr = 20 + 20 - 35 - pl;
  const double noise = -134 + 10 * std::log10(850.0);
  const double rate = 0.5 * 850e6 * std::log2(1.0 + std::pow(10.0, (pr - noise) / 10.0));
  CHECK(est.rate_l1_bps == doctest::Approx(rate).epsilon(1e-12));
  CHECK(est.q_l1_bps == doctest::Approx(rate * 8000 * 18e-6 / 0.14485).epsilon(1e-12));

  // a whole frame alone is strictly below the slot rate
  CHECK(est.q_l1_bps < est.rate_l1_bps);
  CHECK(est.q_l2_bps < est.rate_l2_bps);
  CHECK(est.q_l2p_bps < est.rate_l2p_bps);
}

TEST_CASE("with both hops in the far segment, the nearer one carries more") {
  const SimParams params = fixtures::default_params();
  Scenario s = fixtures::manual_scenario({{23, 1e8}, {0, 1e8}}, 190.0);
  // push the UAV out so both UAV->MR slants sit beyond the break distance
  s.uav_position.x = s.bs_position.x + 400.0;
  const PathEstimates near_hop = estimates_for(s, params, 0);  // MR 23, ~230 m slant
  const PathEstimates far_hop = estimates_for(s, params, 1);   // MR 0, ~420 m slant
  CHECK(near_hop.q_l2p_bps > far_hop.q_l2p_bps);
}

TEST_CASE("estimated slot counts: exact slot, ceiling, relayed sum, zero rate") {
  FrameConfig frame;
  PathEstimates est;
  est.rate_l1_bps = 1e9;
  est.rate_l2_bps = 1e9;
  est.rate_l2p_bps = 1e9;
  // demand of exactly one slot at the rate
  const double qos_one_slot = 1e9 * frame.slot_duration_s / frame.frame_duration_s();
  CHECK(estimate_slots(qos_one_slot, Verdict::Direct, est, frame) == 1);
  CHECK(estimate_slots(qos_one_slot, Verdict::Relayed, est, frame) == 2);
  // every partial slot rounds up
  CHECK(estimate_slots(qos_one_slot * 1.0001, Verdict::Direct, est, frame) == 2);
  CHECK(estimate_slots(qos_one_slot * 2.5, Verdict::Direct, est, frame) == 3);
  // equal hop rates: relayed costs exactly twice the direct estimate
  for (double factor : {1.0, 3.7, 10.2}) {
    const long long direct = estimate_slots(qos_one_slot * factor, Verdict::Direct, est, frame);
    CHECK(estimate_slots(qos_one_slot * factor, Verdict::Relayed, est, frame) == 2 * direct);
  }
  est.rate_l2_bps = 0.0;
  CHECK(estimate_slots(1e8, Verdict::Relayed, est, frame) == LLONG_MAX);
  CHECK(estimate_slots(1e8, Verdict::Abandoned, est, frame) == 0);
}

TEST_CASE("the four feasibility cases map to the specified verdicts") {
  const SimParams params = fixtures::default_params();
  // Eavesdropper near the train head; destination MR 4 is angularly separated.
  const Scenario probe = fixtures::manual_scenario({{4, 1e8}}, 190.0);
  const PathEstimates est = estimates_for(probe, params, 0);
  const double q_direct = est.q_l1_bps;
  const double q_relay = std::min(est.q_l2_bps, est.q_l2p_bps);
  REQUIRE(q_direct > 0);
  REQUIRE(q_relay > 0);
  const double lo = std::min(q_direct, q_relay);
  const double hi = std::max(q_direct, q_relay);
  REQUIRE(hi > lo * 1.001);  // distinct levels so the between-case exists

  const double fits_both = lo * 0.5;
  const double fits_one = (lo + hi) / 2.0;
  const double fits_neither = hi * 2.0;

  const Scenario s = fixtures::manual_scenario(
      {{4, fits_both}, {4, fits_one}, {4, fits_neither}}, 190.0);
  const DecisionSets sets = decide_all(s, params);
  REQUIRE(sets.is_partition(3));

  // both feasible: cheaper estimate wins
  const FlowDecision& both = sets.decisions[0];
  const long long direct_cost = estimate_slots(fits_both, Verdict::Direct, est, params.frame);
  const long long relay_cost = estimate_slots(fits_both, Verdict::Relayed, est, params.frame);
  CHECK(both.verdict == (direct_cost <= relay_cost ? Verdict::Direct : Verdict::Relayed));

  // only one path feasible
  const FlowDecision& single = sets.decisions[1];
  CHECK(single.verdict == (q_direct > q_relay ? Verdict::Direct : Verdict::Relayed));

  // neither path feasible
  CHECK(sets.decisions[2].verdict == Verdict::Abandoned);
}

TEST_CASE("secrecy failure turns a both-feasible flow into a relayed one") {
  const SimParams params = fixtures::default_params();
  // Destination MR 12 at roof offset (12 + 0.5) * 200/24; eavesdropper on top of it.
  const double mr_offset = (12 + 0.5) * (200.0 / 24.0);
  const Scenario s = fixtures::manual_scenario({{12, 2e7}}, mr_offset);
  const DecisionSets sets = decide_all(s, params);
  CHECK(sets.decisions[0].verdict == Verdict::Relayed);

  // identical flow, eavesdropper far away: small demands pick the direct path
  const Scenario clear = fixtures::manual_scenario({{4, 2e7}}, 190.0);
  const DecisionSets clear_sets = decide_all(clear, params);
  CHECK(clear_sets.decisions[0].verdict == Verdict::Direct);
}

TEST_CASE("direct-only flow failing secrecy is abandoned") {
  SimParams params = fixtures::default_params();
  // Cripple the relay path so only the direct one can fit, then block it with
  // a co-located eavesdropper.
  PathLossParams blocked = params.channel.path_loss;
  blocked.alpha_near_db = 250.0;
  blocked.alpha_far_db = 250.0;
  params.channel.path_loss_bs_uav = blocked;
  const double mr_offset = (12 + 0.5) * (200.0 / 24.0);
  const Scenario s = fixtures::manual_scenario({{12, 2e7}}, mr_offset);
  REQUIRE(estimates_for(s, params, 0).q_l2_bps < 2e7);
  const DecisionSets sets = decide_all(s, params);
  CHECK(sets.decisions[0].verdict == Verdict::Abandoned);

  SimParams no_secrecy = params;
  no_secrecy.scheduler.enforce_secrecy = false;
  CHECK(decide_all(s, no_secrecy).decisions[0].verdict == Verdict::Direct);
}

TEST_CASE("equal estimated cost resolves to direct transmission") {
  SimParams params = fixtures::default_params();
  // Make both relay hops far faster than the direct path so the relayed
  // estimate floors at two slots, then demand exactly two direct slots.
  PathLossParams boosted = params.channel.path_loss;
  boosted.alpha_near_db = 0.0;
  boosted.beta_near = 0.0;
  boosted.alpha_far_db = 0.0;
  boosted.beta_far = 0.0;
  params.channel.path_loss_bs_uav = boosted;
  params.channel.path_loss_uav_mr = boosted;
  const Scenario probe = fixtures::manual_scenario({{4, 1e8}}, 190.0);
  const PathEstimates est = estimates_for(probe, params, 0);
  REQUIRE(est.rate_l2_bps > 2 * est.rate_l1_bps);
  REQUIRE(est.rate_l2p_bps > 2 * est.rate_l1_bps);

  const double two_direct_slots =
      1.5 * est.rate_l1_bps * params.frame.slot_duration_s / params.frame.frame_duration_s();
  const Scenario tie = fixtures::manual_scenario({{4, two_direct_slots}}, 190.0);
  REQUIRE(estimate_slots(two_direct_slots, Verdict::Direct, est, params.frame) == 2);
  REQUIRE(estimate_slots(two_direct_slots, Verdict::Relayed, est, params.frame) == 2);
  CHECK(decide_all(tie, params).decisions[0].verdict == Verdict::Direct);
}

TEST_CASE("decision sets partition the flows and satisfy their invariants") {
  const SimParams params = fixtures::default_params();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ScenarioConfig config;
    config.flow_count = 2 + static_cast<int>(seed % 17);
    const Scenario s = build_scenario(config, seed);
    const DecisionSets sets = decide_all(s, params);
    REQUIRE(sets.is_partition(config.flow_count));
    for (int id : sets.s1) {
      const FlowDecision& d = sets.decisions[static_cast<std::size_t>(id)];
      CHECK(d.estimates.q_l1_bps >= s.flows[static_cast<std::size_t>(id)].qos_throughput_bps);
      CHECK(d.estimated_slots > 0);
    }
    for (int id : sets.s2) {
      const FlowDecision& d = sets.decisions[static_cast<std::size_t>(id)];
      CHECK(std::min(d.estimates.q_l2_bps, d.estimates.q_l2p_bps) >=
            s.flows[static_cast<std::size_t>(id)].qos_throughput_bps);
    }
    // determinism
    const DecisionSets again = decide_all(s, params);
    CHECK(again.s1 == sets.s1);
    CHECK(again.s2 == sets.s2);
    CHECK(again.abandoned == sets.abandoned);
  }
}

TEST_CASE("removing the eavesdropper never demotes a direct flow") {
  SimParams params = fixtures::default_params();
  SimParams no_secrecy = params;
  no_secrecy.scheduler.enforce_secrecy = false;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ScenarioConfig config;
    const Scenario s = build_scenario(config, seed);
    const DecisionSets with = decide_all(s, params);
    const DecisionSets without = decide_all(s, no_secrecy);
    for (int id : with.s1) {
      const Verdict v = without.decisions[static_cast<std::size_t>(id)].verdict;
      CHECK(v == Verdict::Direct);
    }
    for (int id : without.abandoned) {
      const Verdict v = with.decisions[static_cast<std::size_t>(id)].verdict;
      CHECK(v == Verdict::Abandoned);
    }
  }
}
