#pragma once

#include <vector>

#include "hsr/params.hpp"

namespace hsr {

enum class Verdict { Direct, Relayed, Abandoned };

// Interference-free single-link estimates at frame-start geometry. The q_*
// values assume the link holds every slot of the frame alone.
struct PathEstimates {
  double rate_l1_bps = 0.0;   // BS -> MR
  double rate_l2_bps = 0.0;   // BS -> UAV
  double rate_l2p_bps = 0.0;  // UAV -> MR
  double q_l1_bps = 0.0;
  double q_l2_bps = 0.0;
  double q_l2p_bps = 0.0;
};

struct FlowDecision {
  int flow_id = 0;
  Verdict verdict = Verdict::Abandoned;
  PathEstimates estimates;
  long long estimated_slots = 0;  // for the chosen path; 0 when abandoned
};

struct DecisionSets {
  std::vector<int> s1;         // direct flows, ascending flow id
  std::vector<int> s2;         // relayed flows, ascending flow id
  std::vector<int> abandoned;
  std::vector<FlowDecision> decisions;  // indexed by flow id

  bool is_partition(int flow_count) const;
};

// A flow's demand volume for one frame, in bits.
double frame_demand_bits(double qos_bps, const FrameConfig& frame);

PathEstimates estimate_standalone_throughput(const Flow& flow, const ChannelContext& ctx,
                                             const FrameConfig& frame);

// Slots needed to move the frame demand over the chosen path, each hop
// rounded up separately. Non-positive rates give LLONG_MAX.
long long estimate_slots(double qos_bps, Verdict path, const PathEstimates& est,
                         const FrameConfig& frame);

// Transmission method selection: partitions flows into direct (s1), relayed
// (s2) and abandoned, by QoS feasibility of each path, the secrecy test for
// direct transmission, and the estimated-slot comparison when both fit.
DecisionSets decide_all(const Scenario& scenario, const SimParams& params,
                        const ShadowTable* shadow = nullptr);

}  // namespace hsr
