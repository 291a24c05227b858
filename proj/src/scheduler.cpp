#include "hsr/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "engine.hpp"

namespace hsr {

namespace {

constexpr double kRelTol = 1e-9;

std::string describe_link(const Link& l) {
  std::ostringstream os;
  os << "link " << l.id << " (flow " << l.flow_id << ")";
  return os.str();
}

}  // namespace

double priority_value(double rate_bps, double qos_bps, const FrameConfig& frame) {
  if (qos_bps <= 0.0) {
    throw std::domain_error("priority_value: QoS requirement must be positive");
  }
  return rate_bps * frame.slot_duration_s / (qos_bps * frame.frame_duration_s());
}

ContentionVerdict check_contention(const Link& candidate, std::span<const Link> active,
                                   long remaining_slots, const ChannelContext& ctx,
                                   const SimParams& params) {
  for (const Link& other : active) {
    if (other.id == candidate.id) {
      throw std::domain_error("check_contention: candidate is already active");
    }
  }
  if (!params.scheduler.contention_enabled) {
    return {true, ContentionReason::None};
  }
  const detail::ContentionAnalysis analysis =
      detail::analyze_contention(candidate, active, ctx, params.scheduler);
  if (analysis.structural != ContentionReason::None) {
    return {false, analysis.structural};
  }
  std::map<int, double> residual;
  residual[candidate.id] = candidate.residual_bits;
  for (const Link& other : active) {
    residual[other.id] = other.residual_bits;
  }
  const double slot_bits = params.frame.slot_duration_s * static_cast<double>(remaining_slots);
  for (const auto& [member_id, rate] : analysis.member_rates) {
    const auto it = residual.find(member_id);
    if (it == residual.end()) {
      continue;
    }
    if (rate * slot_bits < it->second) {
      return {false, ContentionReason::QoSConflict};
    }
  }
  if (!analysis.secrecy_ok) {
    return {false, ContentionReason::SecrecyViolation};
  }
  return {true, ContentionReason::None};
}

ScheduleResult schedule_frame(const DecisionSets& decisions, const Scenario& scenario,
                              const SimParams& params) {
  detail::EngineInput input;
  input.flow_count = static_cast<int>(scenario.flows.size());

  int next_id = 0;
  for (int flow_id : decisions.s1) {
    const Flow& flow = scenario.flows[static_cast<std::size_t>(flow_id)];
    const double demand = frame_demand_bits(flow.qos_throughput_bps, params.frame);
    input.links.push_back({next_id++, flow_id, NodeId::bs(), flow.destination, Band::F1,
                           LinkRole::Direct, demand});
  }
  for (int flow_id : decisions.s2) {
    const Flow& flow = scenario.flows[static_cast<std::size_t>(flow_id)];
    const double demand = frame_demand_bits(flow.qos_throughput_bps, params.frame);
    input.links.push_back({next_id++, flow_id, NodeId::bs(), NodeId::uav(), Band::F1,
                           LinkRole::BsToUav, demand});
    input.links.push_back({next_id++, flow_id, NodeId::uav(), flow.destination, Band::F2,
                           LinkRole::UavToMr, demand});
  }

  const auto shadow = detail::make_shadow_table(scenario, params.channel);
  return detail::run_slot_engine(input, scenario, params, shadow ? &*shadow : nullptr);
}

ScheduleResult schedule_uav_assisted(const Scenario& scenario, const SimParams& params) {
  const auto shadow = detail::make_shadow_table(scenario, params.channel);
  const DecisionSets decisions = decide_all(scenario, params, shadow ? &*shadow : nullptr);
  return schedule_frame(decisions, scenario, params);
}

namespace {

struct SlotCheckState {
  std::vector<int> prev_ids;
  long prev_epoch = -1;
  std::vector<double> physical_rate;  // per link id, for the current segment
  bool first = true;
};

void append_violation(std::vector<Violation>& out, long slot, const std::string& constraint,
                      const std::string& detail) {
  if (out.size() < 200) {
    out.push_back({slot, constraint, detail});
  }
}

}  // namespace

std::vector<Violation> validate_schedule(const ScheduleResult& result, const Scenario& scenario,
                                         const SimParams& params) {
  std::vector<Violation> out;
  const long slot_count = params.frame.slot_count;
  if (static_cast<long>(result.slot_active.size()) != slot_count) {
    append_violation(out, -1, "shape", "slot_active length differs from the frame slot count");
    return out;
  }
  if (result.flow_completed.size() != scenario.flows.size() ||
      result.link_slot_rates.size() != result.links.size()) {
    append_violation(out, -1, "shape", "result tables do not match the scenario");
    return out;
  }

  const auto shadow = detail::make_shadow_table(scenario, params.channel);
  const ShadowTable* shadow_ptr = shadow ? &*shadow : nullptr;

  const std::size_t link_count = result.links.size();
  std::vector<std::size_t> cursor(link_count, 0);

  NodePositions positions;
  SlotCheckState state;
  state.physical_rate.assign(link_count, 0.0);

  double bs_bits = 0.0, uav_bits = 0.0;
  bool prefix_reported = false;

  const long period = scenario.config.mobility.update_period_slots;
  const double slot_s = params.frame.slot_duration_s;

  for (long t = 0; t < slot_count; ++t) {
    const auto& ids = result.slot_active[static_cast<std::size_t>(t)];
    const long epoch = t / period;
    const bool same_segment = !state.first && epoch == state.prev_epoch && ids == state.prev_ids;

    if (!same_segment) {
      if (epoch != state.prev_epoch || state.first) {
        positions = positions_at_slot(scenario, t);
      }
      const ChannelContext ctx{positions, params.channel, shadow_ptr};

      std::vector<Link> active;
      active.reserve(ids.size());
      bool ids_ok = true;
      for (int id : ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= link_count) {
          append_violation(out, t, "shape", "active set references an unknown link id");
          ids_ok = false;
          break;
        }
        active.push_back(result.links[static_cast<std::size_t>(id)]);
      }
      if (!ids_ok) {
        return out;
      }

      int bs_links = 0, uav_links = 0;
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (active[i].tx.kind == NodeKind::Bs) {
          ++bs_links;
        } else if (active[i].tx.kind == NodeKind::Uav) {
          ++uav_links;
        }
        for (std::size_t j = i + 1; j < active.size(); ++j) {
          const Link& a = active[i];
          const Link& b = active[j];
          if (a.tx == b.rx || a.rx == b.tx) {
            append_violation(out, t, "half_duplex",
                             describe_link(a) + " and " + describe_link(b) +
                                 " put one node in both directions");
          }
          if (a.rx == b.rx) {
            append_violation(out, t, "receiver_conflict",
                             describe_link(a) + " and " + describe_link(b) +
                                 " share a receiver");
          }
        }
      }
      if (bs_links > params.scheduler.bs_antennas) {
        append_violation(out, t, "antenna_limit",
                         std::to_string(bs_links) + " concurrent BS links");
      }
      if (uav_links > params.scheduler.uav_antennas) {
        append_violation(out, t, "antenna_limit",
                         std::to_string(uav_links) + " concurrent UAV links");
      }

      const std::span<const Link> span(active);
      for (const Link& member : active) {
        const double rate = params.scheduler.interference_enabled
                                ? link_rate_bps(member, span, ctx)
                                : link_rate_bps(member, {}, ctx);
        state.physical_rate[static_cast<std::size_t>(member.id)] = rate;
        if (params.scheduler.enforce_secrecy && member.band == Band::F1) {
          const double eavesdrop_rate = params.scheduler.interference_enabled
                                            ? eavesdropper_rate_bps(member, span, ctx)
                                            : eavesdropper_rate_bps(member, {}, ctx);
          if (!(eavesdrop_rate < kSecrecyCapacityRatio * rate)) {
            append_violation(out, t, "secrecy",
                             describe_link(member) + " leaks above the admissible ratio");
          }
        }
      }
      state.prev_ids = ids;
      state.prev_epoch = epoch;
      state.first = false;
    }

    for (int id : ids) {
      const std::size_t idx = static_cast<std::size_t>(id);
      const auto& recorded = result.link_slot_rates[idx];
      if (cursor[idx] >= recorded.size() || recorded[cursor[idx]].first != t) {
        append_violation(out, t, "rate_record", describe_link(result.links[idx]) +
                                                    " has no recorded rate for an active slot");
        continue;
      }
      const double rate = recorded[cursor[idx]].second;
      ++cursor[idx];
      if (rate > state.physical_rate[idx] * (1.0 + kRelTol) + 1e-9) {
        append_violation(out, t, "rate_record",
                         describe_link(result.links[idx]) + " recorded above the physical rate");
      }
      const double bits = rate * slot_s;
      if (result.links[idx].tx.kind == NodeKind::Bs) {
        bs_bits += bits;
      } else {
        uav_bits += bits;
      }
    }
    if (!prefix_reported && uav_bits > bs_bits * (1.0 + kRelTol) + 1e-6) {
      append_violation(out, t, "relay_prefix",
                       "cumulative UAV-side volume exceeds the BS-side volume");
      prefix_reported = true;
    }
  }

  for (std::size_t idx = 0; idx < link_count; ++idx) {
    if (cursor[idx] != result.link_slot_rates[idx].size()) {
      append_violation(out, -1, "rate_record",
                       describe_link(result.links[idx]) +
                           " has recorded rates outside its active slots");
    }
  }

  // QoS satisfaction of completed flows, per the delivery hop's recorded volume.
  int completed_count = 0;
  for (std::size_t flow_id = 0; flow_id < result.flow_completed.size(); ++flow_id) {
    if (!result.flow_completed[flow_id]) {
      continue;
    }
    ++completed_count;
    const Flow& flow = scenario.flows[flow_id];
    bool found = false;
    for (const Link& l : result.links) {
      if (l.flow_id != static_cast<int>(flow_id) || l.role == LinkRole::BsToUav) {
        continue;
      }
      found = true;
      double volume = 0.0;
      for (const auto& [slot, rate] : result.link_slot_rates[static_cast<std::size_t>(l.id)]) {
        volume += rate * slot_s;
      }
      const double achieved = volume / params.frame.frame_duration_s();
      if (achieved < flow.qos_throughput_bps * (1.0 - kRelTol)) {
        append_violation(out, -1, "qos_completed",
                         "flow " + std::to_string(flow_id) +
                             " marked completed below its QoS requirement");
      }
    }
    if (!found) {
      append_violation(out, -1, "qos_completed",
                       "flow " + std::to_string(flow_id) + " completed without a delivery link");
    }
  }
  if (completed_count != result.metrics.completed_flows) {
    append_violation(out, -1, "metrics",
                     "completed_flows differs from the per-flow completion flags");
  }
  long last_used = 0;
  for (std::size_t t = 0; t < result.slot_active.size(); ++t) {
    if (!result.slot_active[t].empty()) {
      last_used = static_cast<long>(t) + 1;
    }
  }
  if (last_used != result.metrics.total_slots_used) {
    append_violation(out, -1, "metrics", "total_slots_used differs from the recorded slots");
  }
  return out;
}

}  // namespace hsr
