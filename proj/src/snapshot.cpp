#include "ntn/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "ntn/csv.hpp"
#include "ntn/errors.hpp"
#include "ntn/rng.hpp"

namespace ntn::snapshot {

namespace {

using link::Direction;

constexpr std::uint64_t kShadowStream = 0x5348414457ULL;

struct DropOutcome {
  std::vector<double> sinr_db;
  std::vector<double> user_tput;
  std::vector<double> cell_tput;  // loaded statistics cells only
};

std::vector<std::vector<int>> users_by_beam(const layout::UserDrop& drop,
                                            std::size_t beams) {
  std::vector<std::vector<int>> out(beams);
  for (std::size_t k = 0; k < drop.users.size(); ++k)
    out[drop.users[k].serving_beam].push_back(static_cast<int>(k));
  return out;
}

double shadow_of(const std::vector<double>& shadowing_db, std::size_t k) {
  return shadowing_db.empty() ? 0.0 : shadowing_db[k];
}

// Boresight C/N0 (linear, Hz) of user k including shadowing.
double user_cn0(const SnapshotConfig& cfg, const Scene& scene,
                const layout::User& u, Direction dir, double shadow_db) {
  const double slant = (u.ecef - scene.grid.sat_position).norm();
  return link::db_to_linear(
      link::boresight_cn0_dbhz(cfg.band, cfg.terminal, dir, slant) - shadow_db);
}

DropOutcome run_drop(const SnapshotConfig& cfg, const Scene& scene,
                     std::size_t density_index, int drop_index) {
  const double density = cfg.densities[density_index];
  const auto seed = derive_seed(cfg.seed, density_index, drop_index);
  const auto drop = layout::drop_users(scene.grid, density, seed, scene.pattern);

  std::vector<double> shadow;
  if (cfg.shadowing_sigma_db > 0.0 && !drop.users.empty()) {
    std::mt19937_64 rng(derive_seed(cfg.seed ^ kShadowStream, density_index, drop_index));
    std::normal_distribution<double> n(0.0, cfg.shadowing_sigma_db);
    shadow.resize(drop.users.size());
    for (auto& s : shadow) s = n(rng);
  }

  const auto links = scene.direction == Direction::Downlink
                         ? evaluate_downlink(cfg, scene, drop, shadow)
                         : evaluate_uplink(cfg, scene, drop, shadow);

  DropOutcome out;
  std::vector<double> cell(scene.grid.beams.size(), 0.0);
  std::vector<int> load(scene.grid.beams.size(), 0);
  for (const auto& l : links) {
    if (l.serving_beam >= cfg.stats_cells) continue;
    out.sinr_db.push_back(l.sinr_db);
    out.user_tput.push_back(l.throughput_bps);
    cell[l.serving_beam] += l.throughput_bps;
    ++load[l.serving_beam];
  }
  for (int c = 0; c < cfg.stats_cells; ++c)
    if (load[c] > 0) out.cell_tput.push_back(cell[c]);
  return out;
}

// Drops are evaluated in parallel; results are merged in drop order so the
// output does not depend on scheduling.
DensityResult run_density(const SnapshotConfig& cfg, const Scene& scene,
                          std::size_t density_index) {
  std::vector<DropOutcome> outcomes(cfg.drops);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, cfg.drops));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int d = w; d < cfg.drops; d += workers)
            outcomes[d] = run_drop(cfg, scene, density_index, d);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  DensityResult r;
  r.density = cfg.densities[density_index];
  double cell_sum = 0.0;
  for (const auto& o : outcomes) {
    r.sinr_samples_db.insert(r.sinr_samples_db.end(), o.sinr_db.begin(), o.sinr_db.end());
    r.user_throughput_samples_bps.insert(r.user_throughput_samples_bps.end(),
                                         o.user_tput.begin(), o.user_tput.end());
    for (double c : o.cell_tput) cell_sum += c;
    r.loaded_cell_samples += static_cast<long>(o.cell_tput.size());
  }
  if (r.loaded_cell_samples > 0) {
    r.mean_cell_throughput_bps = cell_sum / static_cast<double>(r.loaded_cell_samples);
  }
  r.mean_spectral_efficiency_bps_hz = r.mean_cell_throughput_bps / cfg.band.bandwidth_hz;
  return r;
}

}  // namespace

void SnapshotConfig::validate() const {
  band.validate();
  terminal.validate();
  geom.validate();
  se_map.validate();
  if (drops < 1) throw ConfigError("drops must be >= 1");
  if (densities.empty()) throw ConfigError("at least one density is required");
  for (double d : densities)
    if (!(d > 0.0) || !std::isfinite(d))
      throw ConfigError("densities must be positive");
  if (stats_cells < 1 || stats_cells > layout::kBeamCount)
    throw ConfigError("stats_cells must lie in [1, 19]");
  if (!(shadowing_sigma_db >= 0.0))
    throw ConfigError("shadowing sigma must be non-negative");
  if (!std::isfinite(ul_target_snr_db))
    throw ConfigError("uplink SNR target must be finite");
}

Scene Scene::make(const SnapshotConfig& cfg, Direction dir) {
  cfg.validate();
  return {layout::build_grid(cfg.band, cfg.geom, cfg.center_elevation_rad),
          cfg.band.beam_pattern(dir), dir};
}

std::vector<UserLink> evaluate_downlink(const SnapshotConfig& cfg,
                                        const Scene& scene,
                                        const layout::UserDrop& drop,
                                        const std::vector<double>& shadowing_db) {
  const auto& grid = scene.grid;
  const auto served = users_by_beam(drop, grid.beams.size());
  const double bw = cfg.band.bandwidth_hz;

  std::vector<UserLink> out(drop.users.size());
  for (std::size_t k = 0; k < drop.users.size(); ++k) {
    const auto& u = drop.users[k];
    const auto g = layout::beam_gains(grid, u.ecef, scene.pattern);
    const double cn0 = user_cn0(cfg, scene, u, Direction::Downlink,
                                shadow_of(shadowing_db, k));
    // All beams share the satellite path, so interference and the desired
    // signal scale with the same cn0.
    double interference = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      if (static_cast<int>(j) != u.serving_beam && !served[j].empty())
        interference += g[j] * cn0;
    const double desired = g[u.serving_beam] * cn0;
    const double sinr = desired / (interference + bw);

    UserLink& l = out[k];
    l.serving_beam = u.serving_beam;
    l.sinr_db = link::linear_to_db(sinr);
    l.bandwidth_hz = bw;
    l.time_share = 1.0 / static_cast<double>(served[u.serving_beam].size());
    l.throughput_bps = l.time_share * bw * link::spectral_efficiency(l.sinr_db, cfg.se_map);
    l.desired_cn0_dbhz = link::linear_to_db(desired);
  }
  return out;
}

std::vector<UserLink> evaluate_uplink(const SnapshotConfig& cfg,
                                      const Scene& scene,
                                      const layout::UserDrop& drop,
                                      const std::vector<double>& shadowing_db) {
  const auto& grid = scene.grid;
  const auto served = users_by_beam(drop, grid.beams.size());
  const double bw = cfg.band.bandwidth_hz;
  const double target = link::db_to_linear(cfg.ul_target_snr_db);
  const std::size_t n = drop.users.size();

  std::vector<std::vector<double>> gains(n);
  std::vector<double> cn0(n);
  for (std::size_t k = 0; k < n; ++k) {
    gains[k] = layout::beam_gains(grid, drop.users[k].ecef, scene.pattern);
    cn0[k] = user_cn0(cfg, scene, drop.users[k], Direction::Uplink,
                      shadow_of(shadowing_db, k));
  }

  // Frequency blocks: [slot * share, slot * share + allocated).
  std::vector<double> lo(n), hi(n);
  for (const auto& members : served) {
    if (members.empty()) continue;
    const double share = bw / static_cast<double>(members.size());
    for (std::size_t s = 0; s < members.size(); ++s) {
      const int k = members[s];
      const double snr_density = cn0[k] * gains[k][drop.users[k].serving_beam];
      const double cap = snr_density / target;
      lo[k] = static_cast<double>(s) * share;
      hi[k] = lo[k] + std::min(share, cap);
    }
  }

  std::vector<UserLink> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int beam = drop.users[k].serving_beam;
    const double alloc = hi[k] - lo[k];
    double interference = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (drop.users[m].serving_beam == beam) continue;
      const double overlap = std::min(hi[k], hi[m]) - std::max(lo[k], lo[m]);
      if (overlap <= 0.0) continue;
      const double psd = cn0[m] * gains[m][beam] / (hi[m] - lo[m]);
      interference += psd * overlap;
    }
    const double desired = cn0[k] * gains[k][beam];
    UserLink& l = out[k];
    l.serving_beam = beam;
    l.bandwidth_hz = alloc;
    l.time_share = 1.0;
    l.desired_cn0_dbhz = link::linear_to_db(desired);
    if (alloc > 0.0) {
      l.sinr_db = link::linear_to_db(desired / (interference + alloc));
      l.throughput_bps = alloc * link::spectral_efficiency(l.sinr_db, cfg.se_map);
    } else {
      l.sinr_db = -std::numeric_limits<double>::infinity();
      l.throughput_bps = 0.0;
    }
  }
  return out;
}

SnapshotResult run_snapshot(const SnapshotConfig& cfg, Direction dir) {
  const Scene scene = Scene::make(cfg, dir);
  SnapshotResult result;
  result.direction = dir;
  result.bandwidth_hz = cfg.band.bandwidth_hz;
  for (std::size_t i = 0; i < cfg.densities.size(); ++i)
    result.per_density.push_back(run_density(cfg, scene, i));
  return result;
}

SnapshotResult downlink_snapshot(const SnapshotConfig& cfg) {
  return run_snapshot(cfg, Direction::Downlink);
}

SnapshotResult uplink_snapshot(const SnapshotConfig& cfg) {
  return run_snapshot(cfg, Direction::Uplink);
}

double percentile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw DomainError("percentile of an empty sample");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(h));
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (h - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

Summary summarize(std::vector<double> samples) {
  if (samples.empty()) throw DomainError("cannot summarise an empty sample");
  std::sort(samples.begin(), samples.end());
  Summary s;
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
           static_cast<double>(samples.size());
  s.p05 = percentile_sorted(samples, 0.05);
  s.p50 = percentile_sorted(samples, 0.50);
  s.p95 = percentile_sorted(samples, 0.95);
  const auto n = static_cast<double>(samples.size());
  s.cdf_probs.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    s.cdf_probs[i] = static_cast<double>(i + 1) / n;
  s.cdf_values = std::move(samples);
  return s;
}

void write_csv(std::ostream& os, const SnapshotResult& result) {
  csv::header(os, {"density", "sinr_p05_db", "sinr_p50_db", "sinr_p95_db",
                   "mean_user_tput_bps", "mean_cell_tput_bps", "mean_se_bps_hz"});
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& d : result.per_density) {
    double p05 = nan, p50 = nan, p95 = nan, user = nan;
    if (!d.sinr_samples_db.empty()) {
      const auto s = summarize(d.sinr_samples_db);
      p05 = s.p05;
      p50 = s.p50;
      p95 = s.p95;
      user = summarize(d.user_throughput_samples_bps).mean;
    }
    csv::row(os, {d.density, p05, p50, p95, user, d.mean_cell_throughput_bps,
                  d.mean_spectral_efficiency_bps_hz});
  }
}

}  // namespace ntn::snapshot
