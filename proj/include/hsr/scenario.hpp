#pragma once

#include <cstdint>
#include <vector>

#include "hsr/geometry.hpp"

namespace hsr {

enum class NodeKind { Bs, Uav, Mr, Eavesdropper };

struct NodeId {
  NodeKind kind = NodeKind::Bs;
  int index = 0;  // meaningful for Mr only

  static NodeId bs() { return {NodeKind::Bs, 0}; }
  static NodeId uav() { return {NodeKind::Uav, 0}; }
  static NodeId mr(int i) { return {NodeKind::Mr, i}; }
  static NodeId eavesdropper() { return {NodeKind::Eavesdropper, 0}; }

  friend bool operator==(const NodeId&, const NodeId&) = default;
};

struct TrainLayout {
  int car_count = 8;
  double car_length_m = 25.0;
  int mr_per_car = 3;
  double mr_height_m = 2.5;

  int mr_count() const { return car_count * mr_per_car; }
  double length_m() const { return car_count * car_length_m; }
  double mr_spacing_m() const { return length_m() / mr_count(); }
};

struct MobilityConfig {
  double speed_mps = 300.0 / 3.6;   // 300 km/h
  long update_period_slots = 2000;  // position refresh granularity
  double slot_duration_s = 18e-6;   // must match the frame's slot duration
  double initial_train_offset_m = -5.0;  // x of the train rear at slot 0
};

struct Flow {
  int id = 0;
  NodeId destination;              // always an MR
  double qos_throughput_bps = 0.0;
};

struct ScenarioConfig {
  TrainLayout layout;
  MobilityConfig mobility;
  Position3D bs_position{0.0, 155.0, 10.0};
  double uav_distance_m = 150.0;   // along-track offset from the BS (+x)
  double uav_height_m = 100.0;
  int flow_count = 18;
  double qos_min_bps = 10e6;
  double qos_max_bps = 500e6;
};

struct Scenario {
  ScenarioConfig config;
  Position3D bs_position;
  Position3D uav_position;
  double eavesdropper_offset_m = 0.0;  // along the roof, from the train rear
  std::vector<Flow> flows;
  std::uint64_t rng_seed = 0;
};

struct NodePositions {
  Position3D bs, uav, eavesdropper;
  std::vector<Position3D> mrs;

  const Position3D& of(const NodeId& id) const;
};

// MRs are placed at the centers of mr_count equal roof segments; flow
// destinations are sampled without replacement, QoS uniformly in
// [qos_min, qos_max], and the eavesdropper offset uniformly along the roof.
// Identical (config, seed) gives an identical scenario.
Scenario build_scenario(const ScenarioConfig& config, std::uint64_t seed);

// Train-mounted nodes advance piecewise-constantly: displacement refreshes
// every update_period_slots; BS and UAV are fixed.
NodePositions positions_at_slot(const Scenario& s, long slot);

}  // namespace hsr
