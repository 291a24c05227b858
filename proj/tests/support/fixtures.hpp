#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hsr/experiment.hpp"

namespace fixtures {

// Library defaults, shared by most tests.
hsr::SimParams default_params();

// Randomized miniature world: few MRs, short frame, single-antenna nodes,
// geometry frozen across the frame. Used by the oracle comparisons.
struct MicroSpec {
  int car_count = 2;
  int flow_count = 3;
  long slot_count = 20;
  int bs_antennas = 1;
  int uav_antennas = 1;
  double qos_min_bps = 10e6;
  double qos_max_bps = 500e6;
  std::uint64_t seed = 0;
};

struct Micro {
  hsr::Scenario scenario;
  hsr::SimParams params;
};

Micro make_micro(const MicroSpec& spec);

// Deterministic hand-built scenario on the default geometry: explicit flow
// destinations/QoS and eavesdropper roof offset.
hsr::Scenario manual_scenario(const std::vector<std::pair<int, double>>& flows,
                              double eavesdropper_offset_m);

}  // namespace fixtures
