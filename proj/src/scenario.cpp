#include "hsr/scenario.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hsr/errors.hpp"
#include "hsr/rng.hpp"

namespace hsr {

const Position3D& NodePositions::of(const NodeId& id) const {
  switch (id.kind) {
    case NodeKind::Bs:
      return bs;
    case NodeKind::Uav:
      return uav;
    case NodeKind::Eavesdropper:
      return eavesdropper;
    case NodeKind::Mr:
      return mrs.at(static_cast<std::size_t>(id.index));
  }
  throw std::out_of_range("NodePositions::of: bad node kind");
}

namespace {

void validate_config(const ScenarioConfig& c) {
  if (c.layout.car_count <= 0) throw ConfigError("layout.car_count must be positive");
  if (c.layout.car_length_m <= 0) throw ConfigError("layout.car_length_m must be positive");
  if (c.layout.mr_per_car <= 0) throw ConfigError("layout.mr_per_car must be positive");
  if (c.layout.mr_height_m < 0) throw ConfigError("layout.mr_height_m must be non-negative");
  if (c.mobility.speed_mps < 0) throw ConfigError("mobility.speed_mps must be non-negative");
  if (c.mobility.update_period_slots < 1)
    throw ConfigError("mobility.update_period_slots must be at least 1");
  if (c.mobility.slot_duration_s <= 0)
    throw ConfigError("mobility.slot_duration_s must be positive");
  if (c.uav_height_m <= 0) throw ConfigError("uav_height_m must be positive");
  if (c.bs_position.z < 0) throw ConfigError("bs_position.z must be non-negative");
  if (c.flow_count < 0) throw ConfigError("flow_count must be non-negative");
  if (c.flow_count > c.layout.mr_count())
    throw ConfigError("flow_count exceeds the number of MRs (" +
                      std::to_string(c.layout.mr_count()) + ")");
  if (c.qos_min_bps <= 0) throw ConfigError("qos_min_bps must be positive");
  if (c.qos_max_bps < c.qos_min_bps)
    throw ConfigError("qos_max_bps must be at least qos_min_bps");
}

}  // namespace

Scenario build_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  validate_config(config);

  Scenario s;
  s.config = config;
  s.rng_seed = seed;
  s.bs_position = config.bs_position;
  // The UAV hovers ahead of the BS along the travel direction, over the side
  // of the cell the train occupies; the configured distance is a magnitude.
  s.uav_position = {config.bs_position.x + config.uav_distance_m, 0.0, config.uav_height_m};
  SplitRng rng(seed, SplitRng::Stream::Scenario);

  // Destinations without replacement: partial Fisher-Yates over MR indices.
  const int mr_count = config.layout.mr_count();
  std::vector<int> mr_indices(static_cast<std::size_t>(mr_count));
  std::iota(mr_indices.begin(), mr_indices.end(), 0);
  for (int f = 0; f < config.flow_count; ++f) {
    const auto pick = f + static_cast<int>(rng.uniform_index(
                              static_cast<std::uint64_t>(mr_count - f)));
    std::swap(mr_indices[static_cast<std::size_t>(f)], mr_indices[static_cast<std::size_t>(pick)]);
  }
  s.flows.reserve(static_cast<std::size_t>(config.flow_count));
  for (int f = 0; f < config.flow_count; ++f) {
    Flow flow;
    flow.id = f;
    flow.destination = NodeId::mr(mr_indices[static_cast<std::size_t>(f)]);
    flow.qos_throughput_bps = rng.uniform(config.qos_min_bps, config.qos_max_bps);
    s.flows.push_back(flow);
  }

  s.eavesdropper_offset_m = rng.uniform(0.0, config.layout.length_m());
  return s;
}

NodePositions positions_at_slot(const Scenario& s, long slot) {
  if (slot < 0) {
    throw std::domain_error("positions_at_slot: slot must be non-negative");
  }
  const MobilityConfig& mob = s.config.mobility;
  const long refreshed = (slot / mob.update_period_slots) * mob.update_period_slots;
  const double displacement =
      mob.speed_mps * static_cast<double>(refreshed) * mob.slot_duration_s;
  const double rear_x = s.config.mobility.initial_train_offset_m + displacement;

  NodePositions p;
  p.bs = s.bs_position;
  p.uav = s.uav_position;
  const TrainLayout& layout = s.config.layout;
  p.mrs.resize(static_cast<std::size_t>(layout.mr_count()));
  const double spacing = layout.mr_spacing_m();
  for (int i = 0; i < layout.mr_count(); ++i) {
    p.mrs[static_cast<std::size_t>(i)] = {rear_x + (i + 0.5) * spacing, 0.0, layout.mr_height_m};
  }
  p.eavesdropper = {rear_x + s.eavesdropper_offset_m, 0.0, layout.mr_height_m};
  return p;
}

}  // namespace hsr
