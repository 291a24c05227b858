#include "hsr/relay_decision.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace hsr {

bool DecisionSets::is_partition(int flow_count) const {
  if (s1.size() + s2.size() + abandoned.size() != static_cast<std::size_t>(flow_count)) {
    return false;
  }
  std::vector<bool> seen(static_cast<std::size_t>(flow_count), false);
  for (const auto* set : {&s1, &s2, &abandoned}) {
    for (int id : *set) {
      if (id < 0 || id >= flow_count || seen[static_cast<std::size_t>(id)]) {
        return false;
      }
      seen[static_cast<std::size_t>(id)] = true;
    }
  }
  return true;
}

double frame_demand_bits(double qos_bps, const FrameConfig& frame) {
  return qos_bps * frame.frame_duration_s();
}

namespace {

double alone_throughput_bps(double rate_bps, const FrameConfig& frame) {
  const double slots = static_cast<double>(frame.slot_count);
  return rate_bps * slots * frame.slot_duration_s / frame.frame_duration_s();
}

long long slots_for_hop(double demand_bits, double rate_bps, const FrameConfig& frame) {
  if (rate_bps <= 0.0) {
    return LLONG_MAX;
  }
  const double slots = std::ceil(demand_bits / (rate_bps * frame.slot_duration_s));
  if (slots >= static_cast<double>(LLONG_MAX)) {
    return LLONG_MAX;
  }
  return std::max(1LL, static_cast<long long>(slots));
}

}  // namespace

PathEstimates estimate_standalone_throughput(const Flow& flow, const ChannelContext& ctx,
                                             const FrameConfig& frame) {
  const Link l1{0, flow.id, NodeId::bs(), flow.destination, Band::F1, LinkRole::Direct, 0.0};
  const Link l2{1, flow.id, NodeId::bs(), NodeId::uav(), Band::F1, LinkRole::BsToUav, 0.0};
  const Link l2p{2, flow.id, NodeId::uav(), flow.destination, Band::F2, LinkRole::UavToMr, 0.0};

  PathEstimates est;
  est.rate_l1_bps = link_rate_bps(l1, {}, ctx);
  est.rate_l2_bps = link_rate_bps(l2, {}, ctx);
  est.rate_l2p_bps = link_rate_bps(l2p, {}, ctx);
  est.q_l1_bps = alone_throughput_bps(est.rate_l1_bps, frame);
  est.q_l2_bps = alone_throughput_bps(est.rate_l2_bps, frame);
  est.q_l2p_bps = alone_throughput_bps(est.rate_l2p_bps, frame);
  return est;
}

long long estimate_slots(double qos_bps, Verdict path, const PathEstimates& est,
                         const FrameConfig& frame) {
  const double demand = frame_demand_bits(qos_bps, frame);
  switch (path) {
    case Verdict::Direct:
      return slots_for_hop(demand, est.rate_l1_bps, frame);
    case Verdict::Relayed: {
      const long long first = slots_for_hop(demand, est.rate_l2_bps, frame);
      const long long second = slots_for_hop(demand, est.rate_l2p_bps, frame);
      if (first == LLONG_MAX || second == LLONG_MAX) {
        return LLONG_MAX;
      }
      return first + second;
    }
    case Verdict::Abandoned:
      return 0;
  }
  return 0;
}

DecisionSets decide_all(const Scenario& scenario, const SimParams& params,
                        const ShadowTable* shadow) {
  const NodePositions positions = positions_at_slot(scenario, 0);
  const ChannelContext ctx{positions, params.channel, shadow};

  DecisionSets sets;
  sets.decisions.resize(scenario.flows.size());

  for (const Flow& flow : scenario.flows) {
    FlowDecision decision;
    decision.flow_id = flow.id;
    decision.estimates = estimate_standalone_throughput(flow, ctx, params.frame);
    const PathEstimates& est = decision.estimates;

    const bool direct_fits = est.q_l1_bps >= flow.qos_throughput_bps;
    const bool relay_fits =
        std::min(est.q_l2_bps, est.q_l2p_bps) >= flow.qos_throughput_bps;

    bool direct_secure = true;
    if (direct_fits && params.scheduler.enforce_secrecy) {
      const Link l1{0, flow.id, NodeId::bs(), flow.destination, Band::F1, LinkRole::Direct, 0.0};
      direct_secure = secrecy_admissible(l1, {}, ctx);
    }

    if (!direct_fits && !relay_fits) {
      decision.verdict = Verdict::Abandoned;
    } else if (!direct_fits) {
      decision.verdict = Verdict::Relayed;
    } else if (!relay_fits) {
      decision.verdict = direct_secure ? Verdict::Direct : Verdict::Abandoned;
    } else if (!direct_secure) {
      decision.verdict = Verdict::Relayed;
    } else {
      // Both paths fit and the direct one is secure: fewer estimated slots
      // wins, ties in favour of direct transmission.
      const long long direct_slots = estimate_slots(flow.qos_throughput_bps, Verdict::Direct,
                                                    est, params.frame);
      const long long relay_slots = estimate_slots(flow.qos_throughput_bps, Verdict::Relayed,
                                                   est, params.frame);
      decision.verdict = direct_slots <= relay_slots ? Verdict::Direct : Verdict::Relayed;
    }

    decision.estimated_slots =
        decision.verdict == Verdict::Abandoned
            ? 0
            : estimate_slots(flow.qos_throughput_bps, decision.verdict, est, params.frame);
    sets.decisions[static_cast<std::size_t>(flow.id)] = decision;

    switch (decision.verdict) {
      case Verdict::Direct:
        sets.s1.push_back(flow.id);
        break;
      case Verdict::Relayed:
        sets.s2.push_back(flow.id);
        break;
      case Verdict::Abandoned:
        sets.abandoned.push_back(flow.id);
        break;
    }
  }
  return sets;
}

}  // namespace hsr
