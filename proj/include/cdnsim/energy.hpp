// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "cdnsim/scenario.hpp"

namespace cdnsim {

/// Ledger classes, in the fixed order used everywhere (reports, CSV columns,
/// breakdown summation).
enum class EnergyClass : std::size_t {
  Switching = 0,
  Gateway,
  ProviderEdge,
  Core,
  Wdm,
  Server,
  Storage,
  WirelessDevice,
  Decoding,
};

inline constexpr std::size_t kEnergyClassCount = 9;

inline const char* energy_class_name(EnergyClass c) {
  static constexpr const char* names[kEnergyClassCount] = {
      "switching",       "gateway", "provider_edge", "core",    "wdm",
      "server",          "storage", "wireless_device", "decoding"};
  return names[static_cast<std::size_t>(c)];
}

/// Accumulated watt-hours per component class. Single writer; ledgers from
/// independent runs combine with merge(). total_wh tracks the sum of the
/// class fields (same additions, same order), request_count the number of
/// deliveries charged.
struct EnergyLedger {
  std::array<double, kEnergyClassCount> by_class{};
  double total_wh = 0;
  std::uint64_t request_count = 0;

  void add(EnergyClass cls, double wh) {
    if (wh < 0) throw std::invalid_argument("EnergyLedger: negative energy");
    by_class[static_cast<std::size_t>(cls)] += wh;
    total_wh += wh;
  }

  double cls(EnergyClass c) const {
    return by_class[static_cast<std::size_t>(c)];
  }

  void merge_in(const EnergyLedger& other) {
    for (std::size_t i = 0; i < kEnergyClassCount; ++i)
      by_class[i] += other.by_class[i];
    total_wh += other.total_wh;
    request_count += other.request_count;
  }
};

inline EnergyLedger merge(const EnergyLedger& a, const EnergyLedger& b) {
  EnergyLedger out = a;
  out.merge_in(b);
  return out;
}

/// Everything one download needs for the transport/storage cost: content size
/// B (bits), hop count H, replica count R, trailing download rate D
/// (downloads/hour) and the equipment profile. Rejects invalid combinations
/// at construction.
struct TransportContext {
  TransportContext(double size_bits_, std::uint32_t hops_,
                   std::uint32_t replicas_, double downloads_per_hr_,
                   const EquipmentProfile& equipment_)
      : size_bits(size_bits_),
        hops(hops_),
        replicas(replicas_),
        downloads_per_hr(downloads_per_hr_),
        equipment(equipment_) {
    if (!(size_bits >= 0))
      throw std::invalid_argument("TransportContext: size_bits must be >= 0");
    if (replicas < 1)
      throw std::invalid_argument("TransportContext: replicas must be >= 1");
    if (!(downloads_per_hr > 0))
      throw std::invalid_argument(
          "TransportContext: downloads_per_hr must be > 0");
  }

  double size_bits;
  std::uint32_t hops;
  std::uint32_t replicas;
  double downloads_per_hr;
  EquipmentProfile equipment;
};

/// Per-class watt-hours of one download plus their sum. total_wh is computed
/// from the breakdown fields in declaration order, so the two views agree
/// bit-for-bit.
struct TransportEnergy {
  double switching_wh = 0;
  double gateway_wh = 0;
  double provider_edge_wh = 0;
  double core_wh = 0;
  double wdm_wh = 0;
  double server_wh = 0;
  double storage_wh = 0;
  double total_wh = 0;
};

/// Macroscopic transport + storage energy of one download, in watt-hours:
///
///   4 * (B/3600) * (3*P_ES/C_ES + P_G/C_G + 2*P_PE/C_PE
///                   + (H+1)*P_C/C_C + H*P_WDM/C_WDM + P_SR/C_SR)
///   + 2 * (B*R/D) * (P_SD/S_SD)
///
/// The leading 4 is distributed into each transport term and the 2 into the
/// storage term, giving the per-class breakdown directly. The structural
/// constants 4, 3, 2, 2 are part of the model and never configurable.
inline TransportEnergy transport_storage_energy(const TransportContext& ctx) {
  const EquipmentProfile& eq = ctx.equipment;
  const double transport_scale = 4.0 * (ctx.size_bits / 3600.0);
  const double hops = static_cast<double>(ctx.hops);

  TransportEnergy e;
  e.switching_wh = transport_scale * (3.0 * eq.es_power_w / eq.es_capacity_bps);
  e.gateway_wh = transport_scale * (eq.g_power_w / eq.g_capacity_bps);
  e.provider_edge_wh =
      transport_scale * (2.0 * eq.pe_power_w / eq.pe_capacity_bps);
  e.core_wh = transport_scale * ((hops + 1.0) * eq.c_power_w / eq.c_capacity_bps);
  e.wdm_wh = transport_scale * (hops * eq.wdm_power_w / eq.wdm_capacity_bps);
  e.server_wh = transport_scale * (eq.sr_power_w / eq.sr_capacity_bps);
  e.storage_wh = 2.0 *
                 (ctx.size_bits * static_cast<double>(ctx.replicas) /
                  ctx.downloads_per_hr) *
                 (eq.sd_power_w / eq.sd_capacity_bits);
  e.total_wh = e.switching_wh + e.gateway_wh + e.provider_edge_wh + e.core_wh +
               e.wdm_wh + e.server_wh + e.storage_wh;
  return e;
}

/// 802.11 device power in watts for the given usage:
///
///   P = rho_id + rho_tx*tau_tx + rho_rx*tau_rx
///       + gamma_xg*lambda_g + gamma_xr*lambda_r
///
/// Zero usage returns exactly rho_id.
inline double device_power(const WirelessDeviceProfile& profile,
                           const AirtimeUsage& usage) {
  if (usage.tau_tx < 0 || usage.tau_rx < 0 ||
      usage.tau_tx + usage.tau_rx > 1.0)
    throw std::invalid_argument(
        "device_power: airtime fractions must be >= 0 and sum to <= 1");
  if (usage.lambda_g_fps < 0 || usage.lambda_r_fps < 0)
    throw std::invalid_argument("device_power: frame rates must be >= 0");
  return profile.rho_idle_w + profile.rho_tx_w * usage.tau_tx +
         profile.rho_rx_w * usage.tau_rx +
         profile.gamma_xg_j * usage.lambda_g_fps +
         profile.gamma_xr_j * usage.lambda_r_fps;
}

struct DeviceDownloadEnergy {
  double energy_wh = 0;
  double duration_s = 0;
};

/// Device-side energy of downloading size_bits at the given stream bitrate.
/// Airtime is derived from the PHY rate: tau_rx = bitrate/phy_rate, no
/// transmission, lambda_r = bitrate/frame_payload. In Full mode the whole
/// device power (idle draw included) is charged over the download duration;
/// Incremental charges only the increment above idle.
inline DeviceDownloadEnergy device_download_energy(
    const WirelessDeviceProfile& profile, double size_bits, double bitrate_bps,
    DeviceEnergyMode mode = DeviceEnergyMode::Full) {
  if (!(bitrate_bps > 0))
    throw std::invalid_argument(
        "device_download_energy: bitrate_bps must be > 0");
  if (bitrate_bps > profile.phy_rate_bps)
    throw std::invalid_argument(
        "device_download_energy: bitrate_bps exceeds phy_rate_bps");
  AirtimeUsage usage;
  usage.tau_rx = bitrate_bps / profile.phy_rate_bps;
  usage.lambda_r_fps = bitrate_bps / profile.frame_payload_bits;
  double power_w = device_power(profile, usage);
  if (mode == DeviceEnergyMode::Incremental) power_w -= profile.rho_idle_w;
  DeviceDownloadEnergy out;
  out.duration_s = size_bits / bitrate_bps;
  out.energy_wh = power_w * out.duration_s / 3600.0;
  return out;
}

/// Per-playback decoding energy in watt-hours.
inline double decode_energy(const DecodeModel& model, double size_bits) {
  if (!(size_bits >= 0))
    throw std::invalid_argument("decode_energy: size_bits must be >= 0");
  return (model.alpha_j + model.beta_j_per_bit * size_bits) / 3600.0;
}

}  // namespace cdnsim
