#include "ntn/link.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ntn/errors.hpp"
#include "ntn/geometry.hpp"

namespace ntn::link {

std::string to_string(Band b) { return b == Band::S ? "S" : "Ka"; }

std::string to_string(TerminalKind k) {
  return k == TerminalKind::Handheld ? "handheld" : "vsat";
}

std::string to_string(Direction d) {
  return d == Direction::Downlink ? "dl" : "ul";
}

BandSystem BandSystem::s_band() {
  BandSystem b;
  b.name = Band::S;
  b.dl_freq_hz = 2e9;
  b.ul_freq_hz = 2e9;
  b.bandwidth_hz = 30e6;
  b.subcarrier_spacing_hz = 15e3;
  b.sat_eirp_density_dbw_per_mhz = 34.0;
  b.sat_gt_dbk = 1.1;
  b.sat_hpbw_rad = geometry::deg2rad(4.41);
  b.atmospheric_loss_db = 0.0;
  return b;
}

BandSystem BandSystem::ka_band() {
  BandSystem b;
  b.name = Band::Ka;
  b.dl_freq_hz = 20e9;
  b.ul_freq_hz = 30e9;
  b.bandwidth_hz = 400e6;
  b.subcarrier_spacing_hz = 60e3;
  b.sat_eirp_density_dbw_per_mhz = 4.0;
  b.sat_gt_dbk = 13.0;
  b.sat_hpbw_rad = geometry::deg2rad(1.76);
  b.atmospheric_loss_db = 1.0;
  return b;
}

void BandSystem::validate() const {
  if (!(dl_freq_hz > 0.0 && ul_freq_hz > 0.0))
    throw ConfigError("carrier frequencies must be positive");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
  if (!(subcarrier_spacing_hz > 0.0))
    throw ConfigError("subcarrier spacing must be positive");
  if (!(sat_hpbw_rad > 0.0 && sat_hpbw_rad < std::numbers::pi))
    throw ConfigError("satellite HPBW must lie in (0, 180) deg");
  if (!(atmospheric_loss_db >= 0.0))
    throw ConfigError("atmospheric loss must be non-negative");
}

double BandSystem::beam_eirp_dbw() const {
  return sat_eirp_density_dbw_per_mhz + 10.0 * std::log10(bandwidth_hz / 1e6);
}

antenna::AperturePattern BandSystem::beam_pattern(Direction d) const {
  const double f = freq_hz(d);
  return {antenna::aperture_for_hpbw(sat_hpbw_rad, f), f, std::nullopt};
}

Terminal Terminal::handheld() { return {}; }

Terminal Terminal::vsat() {
  Terminal t;
  t.kind = TerminalKind::Vsat;
  t.tx_power_dbm = 33.0;
  t.tx_gain_dbi = 43.2;
  t.rx_gain_dbi = 39.7;
  t.gt_dbk = 15.9;
  t.excess_loss_db = 0.0;
  t.rx_pattern = antenna::VsatAntenna{};
  return t;
}

void Terminal::validate() const {
  if (!std::isfinite(tx_power_dbm) || !std::isfinite(tx_gain_dbi) ||
      !std::isfinite(rx_gain_dbi) || !std::isfinite(gt_dbk))
    throw ConfigError("terminal parameters must be finite");
  if (!(excess_loss_db >= 0.0))
    throw ConfigError("excess loss must be non-negative");
}

void SeMapping::validate() const {
  if (!(attenuation_factor > 0.0 && attenuation_factor <= 1.0))
    throw ConfigError("attenuation factor must lie in (0, 1]");
  if (!(max_se_bps_hz > 0.0))
    throw ConfigError("spectral-efficiency cap must be positive");
  if (!std::isfinite(min_sinr_db))
    throw ConfigError("outage threshold must be finite");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double fspl_db(double freq_hz, double slant_range_km) {
  const double lambda = antenna::kSpeedOfLight / freq_hz;
  return 20.0 * std::log10(4.0 * std::numbers::pi * slant_range_km * 1e3 /
                           lambda);
}

double cn0_dbhz(double eirp_dbw, double gt_dbk, double fspl, double excess) {
  return eirp_dbw + gt_dbk - fspl - excess - kBoltzmannDbw;
}

double cnr_db(double eirp_dbw, double gt_dbk, double fspl, double excess,
              double bandwidth_hz) {
  return cn0_dbhz(eirp_dbw, gt_dbk, fspl, excess) -
         10.0 * std::log10(bandwidth_hz);
}

double spectral_efficiency(double sinr_db, const SeMapping& m) {
  if (sinr_db < m.min_sinr_db) return 0.0;
  const double se = m.attenuation_factor * std::log2(1.0 + db_to_linear(sinr_db));
  return std::min(se, m.max_se_bps_hz);
}

double boresight_cn0_dbhz(const BandSystem& band, const Terminal& term,
                          Direction dir, double slant_range_km) {
  const double fspl = fspl_db(band.freq_hz(dir), slant_range_km);
  const double losses = term.excess_loss_db + band.atmospheric_loss_db;
  if (dir == Direction::Downlink)
    return cn0_dbhz(band.beam_eirp_dbw(), term.gt_dbk, fspl, losses);
  return cn0_dbhz(term.eirp_dbw(), band.sat_gt_dbk, fspl, losses);
}

}  // namespace ntn::link
