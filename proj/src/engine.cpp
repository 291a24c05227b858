#include "engine.hpp"

#include <algorithm>
#include <cstdint>

namespace hsr::detail {

std::optional<ShadowTable> make_shadow_table(const Scenario& scenario,
                                             const ChannelParams& channel) {
  if (!channel.path_loss.shadowing_enabled) {
    return std::nullopt;
  }
  return ShadowTable(scenario.rng_seed, scenario.config.layout.mr_count());
}

ContentionAnalysis analyze_contention(const Link& candidate, std::span<const Link> active,
                                      const ChannelContext& ctx, const SchedulerParams& sched) {
  ContentionAnalysis analysis;

  for (const Link& other : active) {
    if (candidate.tx == other.rx || candidate.rx == other.tx) {
      analysis.structural = ContentionReason::HalfDuplex;
      return analysis;
    }
  }
  for (const Link& other : active) {
    if (candidate.rx == other.rx) {
      analysis.structural = ContentionReason::ReceiverBusy;
      return analysis;
    }
  }

  std::vector<Link> joined(active.begin(), active.end());
  joined.push_back(candidate);
  const std::span<const Link> joined_span(joined);

  analysis.member_rates.reserve(joined.size());
  for (const Link& member : joined) {
    const double rate = sched.interference_enabled ? link_rate_bps(member, joined_span, ctx)
                                                   : link_rate_bps(member, {}, ctx);
    analysis.member_rates.emplace_back(member.id, rate);
  }

  // Adding an F2 link cannot move any F1 link's secrecy margin, so the
  // check only runs for F1 candidates, over every F1 member of the joined set.
  if (sched.enforce_secrecy && candidate.band == Band::F1) {
    for (std::size_t i = 0; i < joined.size(); ++i) {
      const Link& member = joined[i];
      if (member.band != Band::F1) {
        continue;
      }
      const double main_rate = analysis.member_rates[i].second;
      const double eavesdrop_rate =
          sched.interference_enabled ? eavesdropper_rate_bps(member, joined_span, ctx)
                                     : eavesdropper_rate_bps(member, {}, ctx);
      if (!(eavesdrop_rate < kSecrecyCapacityRatio * main_rate)) {
        analysis.secrecy_ok = false;
        break;
      }
    }
  }
  return analysis;
}

namespace {

class FrameEngine {
 public:
  FrameEngine(const EngineInput& input, const Scenario& scenario, const SimParams& params,
              const ShadowTable* shadow)
      : scenario_(scenario),
        params_(params),
        shadow_(shadow),
        links_(input.links),
        stage_(input.stage),
        flow_count_(input.flow_count) {
    if (stage_.empty()) {
      stage_.assign(links_.size(), 0);
    }
    max_stage_ = stage_.empty() ? 0 : *std::max_element(stage_.begin(), stage_.end());
  }

  ScheduleResult run();

 private:
  const Link& link(int id) const { return links_[static_cast<std::size_t>(id)]; }
  Link& link(int id) { return links_[static_cast<std::size_t>(id)]; }

  void refresh_positions(long slot);
  void advance_stage();
  void recompute_active_rates();
  std::vector<Link> active_snapshot() const;
  void sort_queue(std::vector<int>& queue);
  void secrecy_sweep();
  void scan_f1(long slot);
  void scan_f2(long slot);
  bool admissible(int id, long slot);
  void admit(int id);
  void remove_from_active(int id);
  void record_and_update(long slot);

  const Scenario& scenario_;
  const SimParams& params_;
  const ShadowTable* shadow_;

  std::vector<Link> links_;
  std::vector<int> stage_;
  int flow_count_ = 0;
  int max_stage_ = 0;
  int current_stage_ = 0;

  NodePositions positions_;
  long epoch_ = -1;

  std::vector<int> active_ids_;  // ascending
  std::vector<char> in_active_;
  std::vector<char> completed_;
  std::vector<char> enqueued_f2_;
  std::vector<double> rate_bps_;      // physical rate while active
  std::vector<double> priority_;      // last computed priority per link
  std::vector<int> queue_f1_, queue_f2_;
  std::vector<int> flow_relay_first_, flow_relay_second_;  // link ids per flow, -1 if none

  bool relay_hop_active_ = false;  // a BS->UAV link is in the active set
  int bs_in_use_ = 0, uav_in_use_ = 0;
  bool rates_stale_ = true;
  bool sweep_pending_ = true;
  bool queue_f2_dirty_ = false;
  std::uint64_t generation_ = 0;

  struct CandidateCache {
    std::uint64_t generation = 0;
    ContentionAnalysis analysis;
  };
  std::vector<CandidateCache> cache_;

  // results
  std::vector<std::vector<int>> slot_active_;
  std::vector<std::vector<std::pair<long, double>>> link_slot_rates_;
  std::vector<bool> flow_completed_;
  int completed_flow_count_ = 0;
  int completed_link_count_ = 0;
};

void FrameEngine::refresh_positions(long slot) {
  const long period = scenario_.config.mobility.update_period_slots;
  const long epoch = slot / period;
  if (epoch != epoch_) {
    positions_ = positions_at_slot(scenario_, slot);
    epoch_ = epoch;
    rates_stale_ = true;
    sweep_pending_ = true;
    ++generation_;
  }
}

void FrameEngine::advance_stage() {
  while (current_stage_ < max_stage_) {
    bool stage_done = true;
    for (std::size_t i = 0; i < links_.size(); ++i) {
      if (stage_[i] == current_stage_ && !completed_[i]) {
        stage_done = false;
        break;
      }
    }
    if (!stage_done) {
      return;
    }
    ++current_stage_;
  }
}

std::vector<Link> FrameEngine::active_snapshot() const {
  std::vector<Link> snapshot;
  snapshot.reserve(active_ids_.size());
  for (int id : active_ids_) {
    snapshot.push_back(link(id));
  }
  return snapshot;
}

void FrameEngine::recompute_active_rates() {
  const ChannelContext ctx{positions_, params_.channel, shadow_};
  const std::vector<Link> snapshot = active_snapshot();
  const std::span<const Link> span(snapshot);
  for (int id : active_ids_) {
    rate_bps_[static_cast<std::size_t>(id)] =
        params_.scheduler.interference_enabled ? link_rate_bps(link(id), span, ctx)
                                               : link_rate_bps(link(id), {}, ctx);
  }
  rates_stale_ = false;
}

void FrameEngine::sort_queue(std::vector<int>& queue) {
  const ChannelContext ctx{positions_, params_.channel, shadow_};
  for (int id : queue) {
    const double rate = link_rate_bps(link(id), {}, ctx);
    const double qos =
        scenario_.flows[static_cast<std::size_t>(link(id).flow_id)].qos_throughput_bps;
    priority_[static_cast<std::size_t>(id)] = priority_value(rate, qos, params_.frame);
  }
  const bool descending = params_.scheduler.priority_order == PriorityOrder::Descending;
  std::stable_sort(queue.begin(), queue.end(), [&](int a, int b) {
    const double pa = priority_[static_cast<std::size_t>(a)];
    const double pb = priority_[static_cast<std::size_t>(b)];
    if (pa != pb) {
      return descending ? pa > pb : pa < pb;
    }
    if (link(a).flow_id != link(b).flow_id) {
      return link(a).flow_id < link(b).flow_id;
    }
    return a < b;
  });
}

// Completions and geometry refreshes can push a standing F1 link past the
// secrecy ratio; such links must leave the slot's active set before rates are
// recorded. Lowest priority goes first, then everything is re-derived.
void FrameEngine::secrecy_sweep() {
  if (!params_.scheduler.enforce_secrecy || !params_.scheduler.contention_enabled) {
    return;
  }
  const ChannelContext ctx{positions_, params_.channel, shadow_};
  for (;;) {
    if (rates_stale_) {
      recompute_active_rates();
    }
    const std::vector<Link> snapshot = active_snapshot();
    const std::span<const Link> span(snapshot);
    int worst = -1;
    double worst_priority = 0.0;
    for (int id : active_ids_) {
      const Link& member = link(id);
      if (member.band != Band::F1) {
        continue;
      }
      const double main_rate = rate_bps_[static_cast<std::size_t>(id)];
      const double eavesdrop_rate = params_.scheduler.interference_enabled
                                        ? eavesdropper_rate_bps(member, span, ctx)
                                        : eavesdropper_rate_bps(member, {}, ctx);
      if (!(eavesdrop_rate < kSecrecyCapacityRatio * main_rate)) {
        const double prio = priority_[static_cast<std::size_t>(id)];
        if (worst < 0 || prio < worst_priority || (prio == worst_priority && id > worst)) {
          worst = id;
          worst_priority = prio;
        }
      }
    }
    if (worst < 0) {
      return;
    }
    remove_from_active(worst);
  }
}

bool FrameEngine::admissible(int id, long slot) {
  if (!params_.scheduler.contention_enabled) {
    return true;
  }
  CandidateCache& entry = cache_[static_cast<std::size_t>(id)];
  if (entry.generation != generation_) {
    const ChannelContext ctx{positions_, params_.channel, shadow_};
    const std::vector<Link> snapshot = active_snapshot();
    entry.analysis = analyze_contention(link(id), snapshot, ctx, params_.scheduler);
    entry.generation = generation_;
  }
  const ContentionAnalysis& analysis = entry.analysis;
  if (analysis.structural != ContentionReason::None || !analysis.secrecy_ok) {
    return false;
  }
  const double slot_s = params_.frame.slot_duration_s;
  const double remaining = static_cast<double>(params_.frame.slot_count - slot);
  for (const auto& [member_id, rate] : analysis.member_rates) {
    if (rate * slot_s * remaining < link(member_id).residual_bits) {
      return false;
    }
  }
  return true;
}

void FrameEngine::admit(int id) {
  active_ids_.insert(std::lower_bound(active_ids_.begin(), active_ids_.end(), id), id);
  in_active_[static_cast<std::size_t>(id)] = 1;
  rates_stale_ = true;
  ++generation_;
  const Link& admitted = link(id);
  if (admitted.band == Band::F1) {
    ++bs_in_use_;
  } else {
    ++uav_in_use_;
  }
  if (admitted.role == LinkRole::BsToUav) {
    relay_hop_active_ = true;
    const int second = flow_relay_second_[static_cast<std::size_t>(admitted.flow_id)];
    if (second >= 0 && !enqueued_f2_[static_cast<std::size_t>(second)]) {
      queue_f2_.push_back(second);
      enqueued_f2_[static_cast<std::size_t>(second)] = 1;
      queue_f2_dirty_ = true;
    }
  }
}

void FrameEngine::remove_from_active(int id) {
  active_ids_.erase(std::find(active_ids_.begin(), active_ids_.end(), id));
  in_active_[static_cast<std::size_t>(id)] = 0;
  rates_stale_ = true;
  sweep_pending_ = true;
  ++generation_;
  const Link& removed = link(id);
  if (removed.band == Band::F1) {
    --bs_in_use_;
  } else {
    --uav_in_use_;
  }
  if (removed.role == LinkRole::BsToUav) {
    relay_hop_active_ = false;
    for (int other : active_ids_) {
      if (link(other).role == LinkRole::BsToUav) {
        relay_hop_active_ = true;
        break;
      }
    }
  }
}

void FrameEngine::scan_f1(long slot) {
  for (int id : queue_f1_) {
    if (bs_in_use_ >= params_.scheduler.bs_antennas) {
      break;
    }
    const std::size_t idx = static_cast<std::size_t>(id);
    if (completed_[idx] || in_active_[idx] || stage_[idx] > current_stage_) {
      continue;
    }
    if (admissible(id, slot)) {
      admit(id);
    }
  }
}

void FrameEngine::scan_f2(long slot) {
  if (relay_hop_active_ || queue_f2_.empty()) {
    return;
  }
  if (queue_f2_dirty_) {
    sort_queue(queue_f2_);
    queue_f2_dirty_ = false;
  }
  for (int id : queue_f2_) {
    if (uav_in_use_ >= params_.scheduler.uav_antennas) {
      break;
    }
    const std::size_t idx = static_cast<std::size_t>(id);
    if (completed_[idx] || in_active_[idx]) {
      continue;
    }
    // The relayed volume must be on the UAV before it can go out.
    const int first = flow_relay_first_[static_cast<std::size_t>(link(id).flow_id)];
    if (first >= 0 && !completed_[static_cast<std::size_t>(first)]) {
      continue;
    }
    if (admissible(id, slot)) {
      admit(id);
    }
  }
}

void FrameEngine::record_and_update(long slot) {
  if (rates_stale_) {
    recompute_active_rates();
  }
  auto& recorded = slot_active_[static_cast<std::size_t>(slot)];
  recorded = active_ids_;

  const double slot_s = params_.frame.slot_duration_s;
  std::vector<int> finished;
  for (int id : active_ids_) {
    Link& member = link(id);
    const double physical_bits = rate_bps_[static_cast<std::size_t>(id)] * slot_s;
    const double delivered_bits = std::min(physical_bits, member.residual_bits);
    link_slot_rates_[static_cast<std::size_t>(id)].emplace_back(slot, delivered_bits / slot_s);
    member.residual_bits -= delivered_bits;
    if (member.residual_bits <= 0.0) {
      finished.push_back(id);
    }
  }
  for (int id : finished) {
    completed_[static_cast<std::size_t>(id)] = 1;
    ++completed_link_count_;
    remove_from_active(id);
    const Link& done = link(id);
    if (done.role != LinkRole::BsToUav) {
      flow_completed_[static_cast<std::size_t>(done.flow_id)] = true;
      ++completed_flow_count_;
    }
  }
}

ScheduleResult FrameEngine::run() {
  const std::size_t link_count = links_.size();
  in_active_.assign(link_count, 0);
  completed_.assign(link_count, 0);
  enqueued_f2_.assign(link_count, 0);
  rate_bps_.assign(link_count, 0.0);
  priority_.assign(link_count, 0.0);
  cache_.assign(link_count, {});
  link_slot_rates_.assign(link_count, {});
  flow_completed_.assign(static_cast<std::size_t>(flow_count_), false);
  flow_relay_first_.assign(static_cast<std::size_t>(flow_count_), -1);
  flow_relay_second_.assign(static_cast<std::size_t>(flow_count_), -1);
  slot_active_.assign(static_cast<std::size_t>(params_.frame.slot_count), {});

  for (const Link& l : links_) {
    if (l.role == LinkRole::BsToUav) {
      flow_relay_first_[static_cast<std::size_t>(l.flow_id)] = l.id;
    } else if (l.role == LinkRole::UavToMr) {
      flow_relay_second_[static_cast<std::size_t>(l.flow_id)] = l.id;
    }
    if (l.band == Band::F1) {
      queue_f1_.push_back(l.id);
    }
  }

  refresh_positions(0);
  sort_queue(queue_f1_);

  for (long slot = 0; slot < params_.frame.slot_count; ++slot) {
    refresh_positions(slot);
    advance_stage();
    if (sweep_pending_) {
      secrecy_sweep();
      sweep_pending_ = false;
    }
    scan_f1(slot);
    scan_f2(slot);
    record_and_update(slot);
    if (completed_link_count_ == static_cast<int>(links_.size())) {
      break;  // remaining slots stay empty
    }
  }

  ScheduleResult result;
  result.links = std::move(links_);
  result.slot_active = std::move(slot_active_);
  result.link_slot_rates = std::move(link_slot_rates_);
  result.flow_completed = std::move(flow_completed_);
  result.metrics.completed_flows = completed_flow_count_;

  long last_used = 0;
  for (std::size_t t = 0; t < result.slot_active.size(); ++t) {
    if (!result.slot_active[t].empty()) {
      last_used = static_cast<long>(t) + 1;
    }
  }
  result.metrics.total_slots_used = last_used;

  double throughput = 0.0;
  for (const Link& l : result.links) {
    if (l.role == LinkRole::BsToUav) {
      continue;  // delivery is counted on the final hop only
    }
    if (params_.scheduler.completed_only_throughput &&
        !result.flow_completed[static_cast<std::size_t>(l.flow_id)]) {
      continue;
    }
    double volume_bits = 0.0;
    for (const auto& [slot, rate] : result.link_slot_rates[static_cast<std::size_t>(l.id)]) {
      volume_bits += rate * params_.frame.slot_duration_s;
    }
    throughput += volume_bits / params_.frame.frame_duration_s();
  }
  result.metrics.system_throughput_bps = throughput;
  return result;
}

}  // namespace

ScheduleResult run_slot_engine(const EngineInput& input, const Scenario& scenario,
                               const SimParams& params, const ShadowTable* shadow) {
  FrameEngine engine(input, scenario, params, shadow);
  return engine.run();
}

}  // namespace hsr::detail
