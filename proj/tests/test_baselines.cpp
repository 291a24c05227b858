#include <doctest.h>

#include <algorithm>

#include "hsr/baselines.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace hsr;

TEST_CASE("all-direct worlds: concurrent baseline equals the UAV scheme") {
  // Small demands on well-separated MRs, eavesdropper far outside every beam:
  // the relay decision keeps everything direct and the schemes coincide.
  const SimParams params = fixtures::default_params();
  const Scenario s = fixtures::manual_scenario({{1, 2e7}, {5, 2e7}, {8, 2e7}}, 190.0);
  const DecisionSets sets = decide_all(s, params);
  REQUIRE(sets.s2.empty());
  REQUIRE(sets.abandoned.empty());
  const ScheduleResult uav = schedule_uav_assisted(s, params);
  const ScheduleResult qos = schedule_qos_concurrent(s, params);
  CHECK(uav.slot_active == qos.slot_active);
  CHECK(uav.metrics.completed_flows == qos.metrics.completed_flows);
  CHECK(uav.metrics.system_throughput_bps ==
        doctest::Approx(qos.metrics.system_throughput_bps));
}

TEST_CASE("a flow the baseline abandons is rescued by the relay") {
  const SimParams params = fixtures::default_params();
  // eavesdropper parked on the destination blocks the direct path
  const double mr_offset = (12 + 0.5) * (200.0 / 24.0);
  const Scenario s = fixtures::manual_scenario({{12, 1e8}}, mr_offset);
  const ScheduleResult base = schedule_qos_concurrent(s, params);
  const ScheduleResult uav = schedule_uav_assisted(s, params);
  CHECK(base.metrics.completed_flows == 0);
  CHECK(uav.metrics.completed_flows == 1);
  CHECK(validate_schedule(base, s, params).empty());
  CHECK(validate_schedule(uav, s, params).empty());
}

TEST_CASE("zero flows give an empty schedule") {
  const SimParams params = fixtures::default_params();
  ScenarioConfig config;
  config.flow_count = 0;
  const Scenario s = build_scenario(config, 1);
  for (const auto run : {schedule_qos_concurrent, schedule_mqis}) {
    const ScheduleResult r = run(s, params);
    CHECK(r.metrics.completed_flows == 0);
    CHECK(r.metrics.total_slots_used == 0);
    CHECK(r.metrics.system_throughput_bps == 0.0);
  }
}

TEST_CASE("baselines never schedule a UAV-band link") {
  const SimParams params = fixtures::default_params();
  ScenarioConfig config;
  config.flow_count = 12;
  const Scenario s = build_scenario(config, 6);
  for (const auto run : {schedule_qos_concurrent, schedule_mqis}) {
    const ScheduleResult r = run(s, params);
    for (const Link& l : r.links) {
      CHECK(l.band == Band::F1);
      CHECK(l.role == LinkRole::Direct);
    }
    CHECK(validate_schedule(r, s, params).empty());
  }
}

TEST_CASE("conflict-free links form one independent set") {
  const SimParams params = fixtures::default_params();
  const Scenario s = fixtures::manual_scenario({{1, 2e7}, {5, 2e7}, {8, 2e7}}, 190.0);
  const ScheduleResult mqis = schedule_mqis(s, params);
  const ScheduleResult qos = schedule_qos_concurrent(s, params);
  CHECK(mqis.slot_active == qos.slot_active);
}

TEST_CASE("links to one receiver serialize into singleton sets") {
  const SimParams params = fixtures::default_params();
  // three flows to the same MR: a complete conflict graph
  const Scenario s = fixtures::manual_scenario({{4, 2e7}, {4, 2e7}, {4, 2e7}}, 190.0);
  const ScheduleResult r = schedule_mqis(s, params);
  CHECK(r.metrics.completed_flows == 3);
  // no two links ever share a slot, and each runs as one contiguous block
  for (const auto& ids : r.slot_active) {
    CHECK(ids.size() <= 1);
  }
  std::vector<std::pair<long, long>> spans;
  for (const Link& l : r.links) {
    const auto& rec = r.link_slot_rates[static_cast<std::size_t>(l.id)];
    REQUIRE(!rec.empty());
    spans.emplace_back(rec.front().first, rec.back().first);
  }
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i) {
    CHECK(spans[i].first > spans[i - 1].second);  // strictly after the previous completes
  }
}

TEST_CASE("mixed fixture: baseline never beats the UAV scheme (regression)") {
  const SimParams params = fixtures::default_params();
  ScenarioConfig config;
  config.flow_count = 14;
  for (std::uint64_t seed : {2ULL, 5ULL, 9ULL}) {
    const Scenario s = build_scenario(config, seed);
    const ScheduleResult mqis = schedule_mqis(s, params);
    const ScheduleResult uav = schedule_uav_assisted(s, params);
    CHECK(mqis.metrics.completed_flows <= uav.metrics.completed_flows);
  }
}
