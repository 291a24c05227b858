#include "support/fixtures.hpp"

namespace fixtures {

hsr::SimParams default_params() {
  const hsr::ExperimentConfig config = hsr::default_config();
  return hsr::SimParams{config.channel, config.frame, config.scheduler};
}

Micro make_micro(const MicroSpec& spec) {
  Micro micro;

  hsr::ScenarioConfig sc;
  sc.layout.car_count = spec.car_count;
  sc.flow_count = spec.flow_count;
  sc.qos_min_bps = spec.qos_min_bps;
  sc.qos_max_bps = spec.qos_max_bps;
  sc.mobility.update_period_slots = 1 << 20;  // static within any test frame
  micro.scenario = hsr::build_scenario(sc, spec.seed);

  micro.params = default_params();
  micro.params.frame.slot_count = spec.slot_count;
  micro.params.scheduler.bs_antennas = spec.bs_antennas;
  micro.params.scheduler.uav_antennas = spec.uav_antennas;
  return micro;
}

hsr::Scenario manual_scenario(const std::vector<std::pair<int, double>>& flows,
                              double eavesdropper_offset_m) {
  hsr::ScenarioConfig sc;
  sc.flow_count = 0;
  hsr::Scenario scenario = hsr::build_scenario(sc, 0);
  scenario.eavesdropper_offset_m = eavesdropper_offset_m;
  int id = 0;
  for (const auto& [mr, qos] : flows) {
    scenario.flows.push_back({id++, hsr::NodeId::mr(mr), qos});
  }
  scenario.config.flow_count = static_cast<int>(scenario.flows.size());
  return scenario;
}

}  // namespace fixtures
