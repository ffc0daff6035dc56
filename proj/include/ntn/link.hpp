#pragma once

// Link budgets and the SINR -> spectral-efficiency proxy.

#include <string>
#include <variant>

#include "ntn/antenna.hpp"

namespace ntn::link {

inline constexpr double kBoltzmannDbw = -228.6;  // dBW/K/Hz

enum class Band { S, Ka };
enum class TerminalKind { Handheld, Vsat };
enum class Direction { Downlink, Uplink };

std::string to_string(Band b);
std::string to_string(TerminalKind k);
std::string to_string(Direction d);

struct BandSystem {
  Band name = Band::S;
  double dl_freq_hz = 2e9;
  double ul_freq_hz = 2e9;
  double bandwidth_hz = 30e6;
  double subcarrier_spacing_hz = 15e3;
  double sat_eirp_density_dbw_per_mhz = 34.0;
  double sat_gt_dbk = 1.1;
  double sat_hpbw_rad = 0.0;
  /// Flat atmospheric margin (dB), applied to both directions.
  double atmospheric_loss_db = 0.0;

  static BandSystem s_band();
  static BandSystem ka_band();

  void validate() const;
  double freq_hz(Direction d) const {
    return d == Direction::Downlink ? dl_freq_hz : ul_freq_hz;
  }
  /// Per-beam EIRP over the whole carrier (dBW).
  double beam_eirp_dbw() const;
  /// Normalised satellite beam pattern at the given carrier. The aperture is
  /// implied by the HPBW, so the same normalised pattern holds on both links.
  antenna::AperturePattern beam_pattern(Direction d) const;
};

struct Terminal {
  TerminalKind kind = TerminalKind::Handheld;
  double tx_power_dbm = 23.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 0.0;
  double gt_dbk = -31.6;
  /// Polarisation / implementation loss (dB) applied to both directions.
  double excess_loss_db = 3.0;
  std::variant<antenna::IsotropicPattern, antenna::VsatAntenna> rx_pattern =
      antenna::IsotropicPattern{};

  static Terminal handheld();
  static Terminal vsat();

  void validate() const;
  double eirp_dbw() const { return tx_power_dbm - 30.0 + tx_gain_dbi; }
};

struct SeMapping {
  double attenuation_factor = 0.8;
  double max_se_bps_hz = 5.5;
  double min_sinr_db = -10.0;

  void validate() const;
};

/// 20 log10(4 pi d / lambda).
double fspl_db(double freq_hz, double slant_range_km);

/// EIRP + G/T - FSPL - excess + 228.6 - 10 log10(B).
double cnr_db(double eirp_dbw, double gt_dbk, double fspl_db,
              double excess_loss_db, double bandwidth_hz);

/// Carrier-to-noise-density ratio (dB-Hz): cnr_db without the bandwidth term.
double cn0_dbhz(double eirp_dbw, double gt_dbk, double fspl_db,
                double excess_loss_db);

/// Truncated Shannon: 0 below the outage floor, else
/// min(attenuation * log2(1 + sinr), max_se).
double spectral_efficiency(double sinr_db, const SeMapping& m = {});

double db_to_linear(double db);
double linear_to_db(double lin);

/// Boresight carrier-to-noise-density (dB-Hz) of one beam toward a terminal
/// at the given slant range, before pattern roll-off and shadowing.
double boresight_cn0_dbhz(const BandSystem& band, const Terminal& term,
                          Direction dir, double slant_range_km);

}  // namespace ntn::link
