#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hsr/geometry.hpp"
#include "hsr/scenario.hpp"

namespace hsr {

enum class Band { F1, F2 };
enum class LinkRole { Direct, BsToUav, UavToMr };
enum class LinkClass { BsToMr, BsToUav, UavToMr, BsToEavesdropper };

// Sidelobe level implied by the pattern's printed constants (natural log of
// the beamwidth in degrees); overridable per config.
double default_side_lobe_gain_dbi(double half_power_beamwidth_deg);

struct AntennaParams {
  double max_gain_dbi = 20.0;
  double half_power_beamwidth_deg = 15.0;
  double side_lobe_gain_dbi = -11.692279437673118;  // default_side_lobe_gain_dbi(15)
  double max_attenuation_db = 26.0;  // main-lobe floor, applied only when clamped
  bool clamp_main_lobe = false;

  double main_lobe_width_deg() const { return 2.6 * half_power_beamwidth_deg; }
};

struct PathLossParams {
  double break_distance_m = 153.3;
  double alpha_near_db = 108.75;
  double beta_near = -1.45;
  double alpha_far_db = 42.34;
  double beta_far = 1.59;
  double shadowing_sigma_db = 5.85;
  bool shadowing_enabled = false;
};

// Transmit power never appears in the measured parameter tables; this default
// is an assumption of this implementation, chosen so that the secrecy ratio
// test separates links by geometry rather than passing or failing uniformly.
inline constexpr double kDefaultTransmitPowerDbm = -35.0;

struct RadioParams {
  Band band = Band::F1;
  double carrier_ghz = 28.0;
  double bandwidth_mhz = 850.0;
  double transmit_power_dbm = kDefaultTransmitPowerDbm;
  double noise_density_dbm_per_mhz = -134.0;
  double efficiency = 0.5;  // transceiver efficiency, in (0,1)
};

struct Link {
  int id = 0;
  int flow_id = 0;
  NodeId tx, rx;
  Band band = Band::F1;
  LinkRole role = LinkRole::Direct;
  double residual_bits = 0.0;
};

struct FrameConfig {
  long slot_count = 8000;          // transmission slots per super frame
  double slot_duration_s = 18e-6;
  double scheduling_phase_s = 850e-6;

  double frame_duration_s() const {
    return scheduling_phase_s + static_cast<double>(slot_count) * slot_duration_s;
  }
};

struct ChannelParams {
  AntennaParams antenna;        // one pattern for BS, UAV, MR and eavesdropper
  PathLossParams path_loss;
  std::optional<PathLossParams> path_loss_bs_mr;
  std::optional<PathLossParams> path_loss_bs_uav;
  std::optional<PathLossParams> path_loss_uav_mr;
  std::optional<PathLossParams> path_loss_bs_eavesdropper;
  RadioParams f1{Band::F1, 28.0, 850.0};
  RadioParams f2{Band::F2, 60.0, 1500.0};

  const PathLossParams& path_loss_for(LinkClass c) const;
  const RadioParams& radio_for(Band b) const;
};

LinkClass link_class(const NodeId& tx, const NodeId& rx);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// Pattern gain at an off-boresight angle in [0, 180] degrees.
double antenna_gain_dbi(double off_boresight_deg, const AntennaParams& p);

// Two-segment alpha-beta model: alpha + 10*beta*log10(d) + shadow, with the
// near-segment constants up to the break distance. d must be positive.
double path_loss_db(double distance_m, const PathLossParams& p, double shadow_db = 0.0);

double received_power_dbm(double tx_gain_dbi, double rx_gain_dbi,
                          double tx_power_dbm, double path_loss_db);

double noise_floor_dbm(const RadioParams& radio);

// Shannon rate with all powers converted to linear milliwatts.
double shannon_rate_bps(double pr_dbm, double interference_mw, const RadioParams& radio);

// Per-frame throughput: sum(rate * slot) / (scheduling phase + M * slot).
double achieved_throughput_bps(std::span<const double> slot_rates_bps, const FrameConfig& frame);

double secrecy_capacity_bps(double main_rate_bps, double eavesdropper_rate_bps);

// A BS-band link is admissible against eavesdropping only while the
// eavesdropper's rate stays strictly under this fraction of the main rate.
inline constexpr double kSecrecyCapacityRatio = 0.1;

// Unit-normal shadowing draws, one per unordered node pair, fixed for a whole
// frame; call sites scale by the applicable sigma.
class ShadowTable {
 public:
  ShadowTable() = default;
  ShadowTable(std::uint64_t root_seed, int mr_count);

  double unit_sample(const NodeId& a, const NodeId& b) const;

 private:
  int node_index(const NodeId& id) const;

  int mr_count_ = 0;
  std::vector<double> samples_;
};

struct ChannelContext {
  const NodePositions& positions;
  const ChannelParams& params;
  const ShadowTable* shadow = nullptr;  // null when shadowing is disabled
};

double shadow_unit_for(const ChannelContext& ctx, const NodeId& a, const NodeId& b);

// Interference from `interferer`'s transmitter at `victim`'s receiver, with
// both beams pointing at their own partners. The pair must share a band.
double interference_power_dbm(const Link& interferer, const Link& victim,
                              const ChannelContext& ctx);

// Rate of `link` given the concurrently active set (self and cross-band
// entries are ignored).
double link_rate_bps(const Link& link, std::span<const Link> active,
                     const ChannelContext& ctx);

// Rate at which the eavesdropper receives `link`'s transmission, with the
// co-band interference the active set produces at the eavesdropper. F1 only.
double eavesdropper_rate_bps(const Link& link, std::span<const Link> active,
                             const ChannelContext& ctx);

bool secrecy_admissible(const Link& link, std::span<const Link> active,
                        const ChannelContext& ctx);

}  // namespace hsr
