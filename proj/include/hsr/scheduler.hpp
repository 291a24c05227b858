#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsr/relay_decision.hpp"

namespace hsr {

enum class ContentionReason { None, HalfDuplex, QoSConflict, SecrecyViolation, ReceiverBusy };

struct ContentionVerdict {
  bool compatible = true;
  ContentionReason reason = ContentionReason::None;
};

struct Metrics {
  int completed_flows = 0;
  double system_throughput_bps = 0.0;
  long total_slots_used = 0;  // last slot index with any active link, plus one
};

struct ScheduleResult {
  std::vector<Link> links;  // final states; residual_bits as of frame end
  std::vector<std::vector<int>> slot_active;  // per slot, ascending link ids
  // Per link: (slot, delivered rate). The completion slot's rate is capped at
  // what the residual demand required, so recorded volume never overshoots.
  std::vector<std::vector<std::pair<long, double>>> link_slot_rates;
  std::vector<bool> flow_completed;  // indexed by flow id, all requested flows
  Metrics metrics;
};

struct Violation {
  long slot = -1;  // -1 for frame-level violations
  std::string constraint;
  std::string detail;
};

// Fraction of a flow's frame demand one slot at `rate_bps` delivers.
double priority_value(double rate_bps, double qos_bps, const FrameConfig& frame);

// Contention rules for admitting `candidate` next to `active`:
//   HalfDuplex        a node would transmit and receive in the same slot
//   ReceiverBusy      an active link already occupies the candidate's receiver
//   QoSConflict       some member of the joined set could no longer meet its
//                     residual demand in the remaining slots
//   SecrecyViolation  some F1 member of the joined set would leak more than
//                     the admissible ratio to the eavesdropper
ContentionVerdict check_contention(const Link& candidate, std::span<const Link> active,
                                   long remaining_slots, const ChannelContext& ctx,
                                   const SimParams& params);

// Slot-by-slot greedy scheduler over the decision sets: F1 queue first under
// the BS antenna budget, then (while no BS->UAV hop is active) the F2 queue
// under the UAV antenna budget; actual rates with mutual interference drive
// the residual-demand bookkeeping.
ScheduleResult schedule_frame(const DecisionSets& decisions, const Scenario& scenario,
                              const SimParams& params);

// Recomputes every constraint from scratch: half-duplex, receiver uniqueness,
// antenna budgets and the secrecy ratio per slot; QoS satisfaction of every
// completed flow; the BS-vs-UAV cumulative volume prefix inequality; and that
// recorded rates never exceed the physical rates of the recorded sets.
std::vector<Violation> validate_schedule(const ScheduleResult& result, const Scenario& scenario,
                                         const SimParams& params);

// Convenience entry point: relay decision plus frame scheduling.
ScheduleResult schedule_uav_assisted(const Scenario& scenario, const SimParams& params);

}  // namespace hsr
