#include "hsr/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "engine.hpp"

namespace hsr {

DecisionSets direct_only_decisions(const Scenario& scenario, const SimParams& params,
                                   const ShadowTable* shadow) {
  const NodePositions positions = positions_at_slot(scenario, 0);
  const ChannelContext ctx{positions, params.channel, shadow};

  DecisionSets sets;
  sets.decisions.resize(scenario.flows.size());
  for (const Flow& flow : scenario.flows) {
    FlowDecision decision;
    decision.flow_id = flow.id;
    decision.estimates = estimate_standalone_throughput(flow, ctx, params.frame);

    bool usable = decision.estimates.q_l1_bps >= flow.qos_throughput_bps;
    if (usable && params.scheduler.enforce_secrecy) {
      const Link l1{0, flow.id, NodeId::bs(), flow.destination, Band::F1, LinkRole::Direct, 0.0};
      usable = secrecy_admissible(l1, {}, ctx);
    }
    decision.verdict = usable ? Verdict::Direct : Verdict::Abandoned;
    decision.estimated_slots =
        usable ? estimate_slots(flow.qos_throughput_bps, Verdict::Direct, decision.estimates,
                                params.frame)
               : 0;
    sets.decisions[static_cast<std::size_t>(flow.id)] = decision;
    (usable ? sets.s1 : sets.abandoned).push_back(flow.id);
  }
  return sets;
}

ScheduleResult schedule_qos_concurrent(const Scenario& scenario, const SimParams& params) {
  const auto shadow = detail::make_shadow_table(scenario, params.channel);
  const DecisionSets decisions =
      direct_only_decisions(scenario, params, shadow ? &*shadow : nullptr);
  return schedule_frame(decisions, scenario, params);
}

ScheduleResult schedule_mqis(const Scenario& scenario, const SimParams& params) {
  const auto shadow = detail::make_shadow_table(scenario, params.channel);
  const ShadowTable* shadow_ptr = shadow ? &*shadow : nullptr;
  const DecisionSets decisions = direct_only_decisions(scenario, params, shadow_ptr);

  detail::EngineInput input;
  input.flow_count = static_cast<int>(scenario.flows.size());
  for (int flow_id : decisions.s1) {
    const Flow& flow = scenario.flows[static_cast<std::size_t>(flow_id)];
    const double demand = frame_demand_bits(flow.qos_throughput_bps, params.frame);
    input.links.push_back({static_cast<int>(input.links.size()), flow_id, NodeId::bs(),
                           flow.destination, Band::F1, LinkRole::Direct, demand});
  }

  const NodePositions positions = positions_at_slot(scenario, 0);
  const ChannelContext ctx{positions, params.channel, shadow_ptr};
  const std::size_t n = input.links.size();

  // Conflict graph at frame start: an edge wherever the pair cannot share a
  // slot on an otherwise empty schedule.
  std::vector<std::vector<char>> conflict(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Link other[] = {input.links[j]};
      const ContentionVerdict verdict = check_contention(
          input.links[i], std::span<const Link>(other), params.frame.slot_count, ctx, params);
      conflict[i][j] = conflict[j][i] = verdict.compatible ? 0 : 1;
    }
  }

  // Greedy maximal independent sets, highest priority vertex first.
  std::vector<double> priority(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double rate = link_rate_bps(input.links[i], {}, ctx);
    const Flow& flow = scenario.flows[static_cast<std::size_t>(input.links[i].flow_id)];
    priority[i] = priority_value(rate, flow.qos_throughput_bps, params.frame);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const bool descending = params.scheduler.priority_order == PriorityOrder::Descending;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (priority[a] != priority[b]) {
      return descending ? priority[a] > priority[b] : priority[a] < priority[b];
    }
    return input.links[a].flow_id < input.links[b].flow_id;
  });

  input.stage.assign(n, -1);
  std::vector<char> assigned(n, 0);
  int stage = 0;
  std::size_t remaining = n;
  while (remaining > 0) {
    std::vector<std::size_t> members;
    for (std::size_t idx : order) {
      if (assigned[idx]) {
        continue;
      }
      bool independent = true;
      for (std::size_t chosen : members) {
        if (conflict[idx][chosen]) {
          independent = false;
          break;
        }
      }
      if (independent) {
        members.push_back(idx);
      }
    }
    for (std::size_t idx : members) {
      assigned[idx] = 1;
      input.stage[idx] = stage;
      --remaining;
    }
    ++stage;
  }

  return detail::run_slot_engine(input, scenario, params, shadow_ptr);
}

}  // namespace hsr
