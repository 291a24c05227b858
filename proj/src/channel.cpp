#include "hsr/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "hsr/rng.hpp"

namespace hsr {

double default_side_lobe_gain_dbi(double half_power_beamwidth_deg) {
  return -0.4111 * std::log(half_power_beamwidth_deg) - 10.579;
}

const PathLossParams& ChannelParams::path_loss_for(LinkClass c) const {
  switch (c) {
    case LinkClass::BsToMr:
      return path_loss_bs_mr ? *path_loss_bs_mr : path_loss;
    case LinkClass::BsToUav:
      return path_loss_bs_uav ? *path_loss_bs_uav : path_loss;
    case LinkClass::UavToMr:
      return path_loss_uav_mr ? *path_loss_uav_mr : path_loss;
    case LinkClass::BsToEavesdropper:
      return path_loss_bs_eavesdropper ? *path_loss_bs_eavesdropper : path_loss;
  }
  return path_loss;
}

const RadioParams& ChannelParams::radio_for(Band b) const {
  return b == Band::F1 ? f1 : f2;
}

LinkClass link_class(const NodeId& tx, const NodeId& rx) {
  if (tx.kind == NodeKind::Bs) {
    switch (rx.kind) {
      case NodeKind::Mr:
        return LinkClass::BsToMr;
      case NodeKind::Uav:
        return LinkClass::BsToUav;
      case NodeKind::Eavesdropper:
        return LinkClass::BsToEavesdropper;
      default:
        break;
    }
  }
  if (tx.kind == NodeKind::Uav && rx.kind == NodeKind::Mr) {
    return LinkClass::UavToMr;
  }
  throw std::domain_error("link_class: unsupported transmitter/receiver pair");
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double antenna_gain_dbi(double off_boresight_deg, const AntennaParams& p) {
  if (off_boresight_deg < 0.0 || off_boresight_deg > 180.0) {
    throw std::domain_error("antenna_gain_dbi: angle outside [0, 180] degrees");
  }
  if (off_boresight_deg <= p.main_lobe_width_deg() / 2.0) {
    const double ratio = 2.0 * off_boresight_deg / p.half_power_beamwidth_deg;
    double gain = p.max_gain_dbi - 3.01 * ratio * ratio;
    if (p.clamp_main_lobe) {
      gain = std::max(gain, p.max_gain_dbi - p.max_attenuation_db);
    }
    return gain;
  }
  return p.side_lobe_gain_dbi;
}

double path_loss_db(double distance_m, const PathLossParams& p, double shadow_db) {
  if (distance_m <= 0.0) {
    throw std::domain_error("path_loss_db: distance must be positive");
  }
  const bool near = distance_m <= p.break_distance_m;
  const double alpha = near ? p.alpha_near_db : p.alpha_far_db;
  const double beta = near ? p.beta_near : p.beta_far;
  const double shadow = p.shadowing_enabled ? shadow_db : 0.0;
  return alpha + 10.0 * beta * std::log10(distance_m) + shadow;
}

double received_power_dbm(double tx_gain_dbi, double rx_gain_dbi, double tx_power_dbm,
                          double path_loss_db) {
  return tx_gain_dbi + rx_gain_dbi + tx_power_dbm - path_loss_db;
}

double noise_floor_dbm(const RadioParams& radio) {
  return radio.noise_density_dbm_per_mhz + 10.0 * std::log10(radio.bandwidth_mhz);
}

double shannon_rate_bps(double pr_dbm, double interference_mw, const RadioParams& radio) {
  const double noise_mw = dbm_to_mw(noise_floor_dbm(radio));
  const double sinr = dbm_to_mw(pr_dbm) / (noise_mw + interference_mw);
  return radio.efficiency * radio.bandwidth_mhz * 1e6 * std::log2(1.0 + sinr);
}

double achieved_throughput_bps(std::span<const double> slot_rates_bps,
                               const FrameConfig& frame) {
  double volume_bits = 0.0;
  for (double rate : slot_rates_bps) {
    volume_bits += rate * frame.slot_duration_s;
  }
  return volume_bits / frame.frame_duration_s();
}

double secrecy_capacity_bps(double main_rate_bps, double eavesdropper_rate_bps) {
  return main_rate_bps - eavesdropper_rate_bps;
}

ShadowTable::ShadowTable(std::uint64_t root_seed, int mr_count) : mr_count_(mr_count) {
  const int n = 3 + mr_count;  // BS, UAV, eavesdropper, MRs
  samples_.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  SplitRng rng(root_seed, SplitRng::Stream::Shadowing);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double sample = rng.normal(0.0, 1.0);
      samples_[static_cast<std::size_t>(a * n + b)] = sample;
      samples_[static_cast<std::size_t>(b * n + a)] = sample;
    }
  }
}

int ShadowTable::node_index(const NodeId& id) const {
  switch (id.kind) {
    case NodeKind::Bs:
      return 0;
    case NodeKind::Uav:
      return 1;
    case NodeKind::Eavesdropper:
      return 2;
    case NodeKind::Mr:
      return 3 + id.index;
  }
  throw std::out_of_range("ShadowTable: bad node kind");
}

double ShadowTable::unit_sample(const NodeId& a, const NodeId& b) const {
  const int n = 3 + mr_count_;
  return samples_.at(static_cast<std::size_t>(node_index(a) * n + node_index(b)));
}

double shadow_unit_for(const ChannelContext& ctx, const NodeId& a, const NodeId& b) {
  return ctx.shadow ? ctx.shadow->unit_sample(a, b) : 0.0;
}

namespace {

// Received power of `tx`'s beam (pointing at `beam_target`) at `receiver`,
// whose own beam points at `rx_boresight`.
double beam_power_dbm(const NodeId& tx, const NodeId& beam_target, const NodeId& receiver,
                      const NodeId& rx_boresight, const RadioParams& radio,
                      const ChannelContext& ctx) {
  const Position3D& tx_pos = ctx.positions.of(tx);
  const Position3D& rx_pos = ctx.positions.of(receiver);
  const double tx_gain =
      antenna_gain_dbi(off_boresight_deg(tx_pos, ctx.positions.of(beam_target), rx_pos),
                       ctx.params.antenna);
  const double rx_gain =
      antenna_gain_dbi(off_boresight_deg(rx_pos, ctx.positions.of(rx_boresight), tx_pos),
                       ctx.params.antenna);
  const PathLossParams& pl = ctx.params.path_loss_for(link_class(tx, receiver));
  const double shadow_db = shadow_unit_for(ctx, tx, receiver) * pl.shadowing_sigma_db;
  const double loss = path_loss_db(distance_m(tx_pos, rx_pos), pl, shadow_db);
  return received_power_dbm(tx_gain, rx_gain, radio.transmit_power_dbm, loss);
}

}  // namespace

double interference_power_dbm(const Link& interferer, const Link& victim,
                              const ChannelContext& ctx) {
  if (interferer.band != victim.band) {
    throw std::domain_error("interference_power_dbm: cross-band pair");
  }
  if (interferer.id == victim.id) {
    throw std::domain_error("interference_power_dbm: link cannot interfere with itself");
  }
  const RadioParams& radio = ctx.params.radio_for(interferer.band);
  return beam_power_dbm(interferer.tx, interferer.rx, victim.rx, victim.tx, radio, ctx);
}

double link_rate_bps(const Link& link, std::span<const Link> active,
                     const ChannelContext& ctx) {
  const RadioParams& radio = ctx.params.radio_for(link.band);
  const double pr_dbm = beam_power_dbm(link.tx, link.rx, link.rx, link.tx, radio, ctx);
  double interference_mw = 0.0;
  for (const Link& other : active) {
    if (other.id == link.id || other.band != link.band) {
      continue;
    }
    interference_mw += dbm_to_mw(interference_power_dbm(other, link, ctx));
  }
  return shannon_rate_bps(pr_dbm, interference_mw, radio);
}

double eavesdropper_rate_bps(const Link& link, std::span<const Link> active,
                             const ChannelContext& ctx) {
  if (link.band != Band::F1) {
    throw std::domain_error("eavesdropper_rate_bps: only F1 links can be overheard");
  }
  const NodeId eva = NodeId::eavesdropper();
  const NodeId bs = NodeId::bs();
  const RadioParams& radio = ctx.params.radio_for(Band::F1);
  // The eavesdropper's beam stays on the BS.
  const double pr_dbm = beam_power_dbm(link.tx, link.rx, eva, bs, radio, ctx);
  double interference_mw = 0.0;
  for (const Link& other : active) {
    if (other.id == link.id || other.band != Band::F1) {
      continue;
    }
    interference_mw += dbm_to_mw(beam_power_dbm(other.tx, other.rx, eva, bs, radio, ctx));
  }
  return shannon_rate_bps(pr_dbm, interference_mw, radio);
}

bool secrecy_admissible(const Link& link, std::span<const Link> active,
                        const ChannelContext& ctx) {
  const double main_rate = link_rate_bps(link, active, ctx);
  const double eavesdrop_rate = eavesdropper_rate_bps(link, active, ctx);
  return eavesdrop_rate < kSecrecyCapacityRatio * main_rate;
}

}  // namespace hsr
