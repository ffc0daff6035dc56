#pragma once

// Static-snapshot Monte Carlo of per-beam SINR and throughput for one
// satellite's 19 co-channel beams under full-buffer traffic.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ntn/layout.hpp"
#include "ntn/link.hpp"

namespace ntn::snapshot {

struct SnapshotConfig {
  link::BandSystem band = link::BandSystem::s_band();
  link::Terminal terminal = link::Terminal::handheld();
  geometry::SatGeometry geom{600.0, geometry::kEarthRadiusKm, geometry::deg2rad(35.0)};
  double center_elevation_rad = geometry::deg2rad(90.0);
  std::vector<double> densities{0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
  int drops = 200;
  link::SeMapping se_map;
  /// Uplink power-control target: a user's bandwidth is capped where its
  /// SNR at full transmit power would fall below this value.
  double ul_target_snr_db = -6.0;
  /// Log-normal shadowing std-dev (dB); 0 disables it.
  double shadowing_sigma_db = 0.0;
  /// Statistics are taken from beams [0, stats_cells): 7 = centre + ring 1.
  int stats_cells = 7;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Per-user outcome of one snapshot.
struct UserLink {
  int serving_beam = 0;
  double sinr_db = 0.0;
  double bandwidth_hz = 0.0;  // allocated (uplink) or full carrier (downlink)
  double time_share = 1.0;
  double throughput_bps = 0.0;
  /// Received desired-signal C/N0 (dB-Hz) including pattern and shadowing.
  double desired_cn0_dbhz = 0.0;
};

/// Shared, drop-independent state: grid and beam pattern for one direction.
struct Scene {
  layout::BeamGrid grid;
  antenna::AperturePattern pattern;
  link::Direction direction;

  static Scene make(const SnapshotConfig& cfg, link::Direction dir);
};

/// Downlink SINR and throughput of every user. Beams without users are
/// silent; time is shared equally among a beam's users.
/// `shadowing_db` (per user, may be empty) is subtracted from every path.
std::vector<UserLink> evaluate_downlink(const SnapshotConfig& cfg,
                                        const Scene& scene,
                                        const layout::UserDrop& drop,
                                        const std::vector<double>& shadowing_db = {});

/// Uplink: in each beam the carrier is split into equal slots in user order;
/// each user occupies min(slot, power-limited cap) from the slot start.
std::vector<UserLink> evaluate_uplink(const SnapshotConfig& cfg,
                                      const Scene& scene,
                                      const layout::UserDrop& drop,
                                      const std::vector<double>& shadowing_db = {});

struct DensityResult {
  double density = 0.0;
  std::vector<double> sinr_samples_db;
  std::vector<double> user_throughput_samples_bps;
  double mean_cell_throughput_bps = 0.0;
  double mean_spectral_efficiency_bps_hz = 0.0;
  /// Number of (drop, statistics cell) pairs with at least one user.
  long loaded_cell_samples = 0;
};

struct SnapshotResult {
  link::Direction direction = link::Direction::Downlink;
  double bandwidth_hz = 0.0;
  std::vector<DensityResult> per_density;
};

SnapshotResult downlink_snapshot(const SnapshotConfig& cfg);
SnapshotResult uplink_snapshot(const SnapshotConfig& cfg);
SnapshotResult run_snapshot(const SnapshotConfig& cfg, link::Direction dir);

struct Summary {
  double mean = 0.0;
  double p05 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  /// Exact empirical CDF: knot i is (cdf_values[i], cdf_probs[i] = (i+1)/n).
  std::vector<double> cdf_values;
  std::vector<double> cdf_probs;
};

/// Linear-interpolated percentile (p in [0, 1]) of sorted samples.
double percentile_sorted(const std::vector<double>& sorted, double p);

/// Throws DomainError on empty input.
Summary summarize(std::vector<double> samples);

/// Per-density CSV: density, sinr_p05_db, sinr_p50_db, sinr_p95_db,
/// mean_user_tput_bps, mean_cell_tput_bps, mean_se_bps_hz.
void write_csv(std::ostream& os, const SnapshotResult& result);

}  // namespace ntn::snapshot
