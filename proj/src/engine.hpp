#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hsr/scheduler.hpp"

namespace hsr::detail {

// Expensive, slot-invariant part of a contention check for one candidate
// against a fixed active set and geometry. The QoS inequalities are evaluated
// separately each slot because residuals and the remaining-slot count move.
struct ContentionAnalysis {
  ContentionReason structural = ContentionReason::None;  // HalfDuplex/ReceiverBusy
  bool secrecy_ok = true;
  // Rates inside the joined set, (link id, rate); includes the candidate.
  std::vector<std::pair<int, double>> member_rates;
};

ContentionAnalysis analyze_contention(const Link& candidate, std::span<const Link> active,
                                      const ChannelContext& ctx, const SchedulerParams& sched);

struct EngineInput {
  std::vector<Link> links;
  std::vector<int> stage;  // per link; empty means single-stage
  int flow_count = 0;
};

// The shared slot loop: greedy per-slot admission under the contention rules
// and antenna budgets, rate bookkeeping with mutual interference, residual
// demand updates, and completion accounting. Stages gate admission for the
// independent-set baseline; the relay latch only engages when BS->UAV links
// exist.
ScheduleResult run_slot_engine(const EngineInput& input, const Scenario& scenario,
                               const SimParams& params, const ShadowTable* shadow);

std::optional<ShadowTable> make_shadow_table(const Scenario& scenario,
                                             const ChannelParams& channel);

}  // namespace hsr::detail
