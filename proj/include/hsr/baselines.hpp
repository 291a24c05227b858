#pragma once

#include "hsr/scheduler.hpp"

namespace hsr {

enum class BaselineKind { QoSConcurrent, Mqis };

// Direct transmission or nothing: flows whose standalone direct path misses
// the QoS requirement or the secrecy test are abandoned. Shared by both
// baselines.
DecisionSets direct_only_decisions(const Scenario& scenario, const SimParams& params,
                                   const ShadowTable* shadow = nullptr);

// Same machinery as the UAV-assisted scheduler with the relay set forced
// empty.
ScheduleResult schedule_qos_concurrent(const Scenario& scenario, const SimParams& params);

// Conflict-graph variant: direct links are split into maximal independent
// sets extracted greedily in descending priority, and a set is scheduled only
// after every link of the previous set has completed.
ScheduleResult schedule_mqis(const Scenario& scenario, const SimParams& params);

}  // namespace hsr
