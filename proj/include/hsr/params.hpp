#pragma once

#include "hsr/channel.hpp"

namespace hsr {

enum class PriorityOrder { Descending, Ascending };

struct SchedulerParams {
  int bs_antennas = 3;
  int uav_antennas = 3;
  // Highest priority first by default; Ascending preserved for comparison.
  PriorityOrder priority_order = PriorityOrder::Descending;
  bool enforce_secrecy = true;
  // Test harness hooks; production runs leave both on.
  bool contention_enabled = true;
  bool interference_enabled = true;
  // When set, system throughput counts completed flows only.
  bool completed_only_throughput = false;
};

struct SimParams {
  ChannelParams channel;
  FrameConfig frame;
  SchedulerParams scheduler;
};

}  // namespace hsr
