#include "commands.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include "ntn/antenna.hpp"
#include "ntn/constellation.hpp"
#include "ntn/csv.hpp"
#include "ntn/errors.hpp"
#include "ntn/layout.hpp"
#include "ntn/scenario.hpp"
#include "ntn/snapshot.hpp"

namespace ntn::cli {

namespace {

using geometry::deg2rad;
using geometry::rad2deg;
using link::Band;
using link::Direction;

struct Common {
  std::string scenario_path;
  std::string preset_name;
  std::string out_path;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--scenario", c.scenario_path, "Scenario INI file");
  cmd->add_option("--preset", c.preset_name, "Built-in preset: s-handheld, ka-vsat, kuiper");
  cmd->add_option("--out", c.out_path, "Output file (default: stdout)");
}

scenario::Scenario load_scenario(const Common& c, const std::string& default_preset) {
  if (!c.scenario_path.empty() && !c.preset_name.empty())
    throw UsageError("--scenario and --preset are mutually exclusive");
  if (!c.scenario_path.empty()) return scenario::load(c.scenario_path);
  return scenario::preset(c.preset_name.empty() ? default_preset : c.preset_name);
}

// Writes through a temporary file renamed into place, so a failed command
// never leaves a partial output file behind.
void emit(const Common& c, std::ostream& out,
          const std::function<void(std::ostream&)>& body) {
  if (c.out_path.empty()) {
    body(out);
    return;
  }
  const std::filesystem::path target(c.out_path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  try {
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw ConfigError("cannot open output file '" + c.out_path + "'");
      body(f);
      f.flush();
      if (!f) throw ConfigError("write failed for '" + c.out_path + "'");
    }
    std::filesystem::rename(tmp, target);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

void cmd_antenna(const Common& c, double theta_max_deg, double step_deg, std::ostream& out) {
  if (!(step_deg > 0.0)) throw UsageError("--step-deg must be positive");
  if (!(theta_max_deg > 0.0 && theta_max_deg <= 90.0))
    throw UsageError("--theta-max-deg must lie in (0, 90]");
  const auto sc = load_scenario(c, "s-handheld");
  const auto pattern = sc.snapshot.band.beam_pattern(Direction::Downlink);
  const long rows = static_cast<long>(std::floor(theta_max_deg / step_deg + 1e-9)) + 1;
  emit(c, out, [&](std::ostream& os) {
    csv::header(os, {"theta_deg", "gain_db"});
    for (long i = 0; i < rows; ++i) {
      const double theta = static_cast<double>(i) * step_deg;
      csv::row(os, {theta, antenna::gain_dbi(pattern, deg2rad(theta))});
    }
  });
}

void cmd_capacity(const Common& c, std::optional<double> step_deg, bool summary,
                  std::ostream& out, std::ostream& err) {
  const auto sc = load_scenario(c, "kuiper");
  const double step = step_deg ? deg2rad(*step_deg) : sc.capacity.step_rad;
  if (!(step > 0.0)) throw UsageError("--step-deg must be positive");
  const auto& shell = sc.shell;
  const auto& cap = sc.capacity;
  const auto in = [&](Band b, Direction d) { return cap.inputs(b, d); };
  const bool covered = geometry::footprint_angle(shell.geometry()) > 0.0;
  if (!covered) err << "warning: no latitude is covered by this shell\n";

  if (summary) {
    emit(c, out, [&](std::ostream& os) {
      csv::header(os, {"quantity", "min", "max"});
      if (!covered) return;
      for (Band b : {Band::S, Band::Ka}) {
        const auto s = constellation::service_summary(
            shell, in(b, Direction::Downlink), in(b, Direction::Uplink), cap.hpbw(b), step,
            cap.min_visible_for_service);
        if (!s) continue;
        const std::string tag = b == Band::S ? "_s" : "_ka";
        if (b == Band::S) {
          os << "service_edge_lat_deg," << csv::number(rad2deg(s->edge_latitude_rad)) << ','
             << csv::number(rad2deg(s->edge_latitude_rad)) << '\n';
          os << "n_visible," << csv::number(s->n_visible.min) << ','
             << csv::number(s->n_visible.max) << '\n';
        }
        os << "cells_per_sat" << tag << ',' << csv::number(s->cells_per_satellite.min) << ','
           << csv::number(s->cells_per_satellite.max) << '\n';
        os << "dens_dl" << tag << ',' << csv::number(s->density_dl.min) << ','
           << csv::number(s->density_dl.max) << '\n';
        os << "dens_ul" << tag << ',' << csv::number(s->density_ul.min) << ','
           << csv::number(s->density_ul.max) << '\n';
      }
    });
    return;
  }

  emit(c, out, [&](std::ostream& os) {
    csv::header(os, {"lat_deg", "n_visible", "cells_per_sat_s", "cells_per_sat_ka", "dens_dl_s",
                     "dens_ul_s", "dens_dl_ka", "dens_ul_ka"});
    if (!covered) return;
    const double limit = geometry::kPi / 2;
    for (long i = 0;; ++i) {
      const double lat = static_cast<double>(i) * step;
      if (lat > limit + 1e-12) break;
      const auto s = constellation::capacity_at(shell, in(Band::S, Direction::Downlink),
                                                in(Band::S, Direction::Uplink),
                                                cap.hpbw(Band::S), std::min(lat, limit));
      const auto k = constellation::capacity_at(shell, in(Band::Ka, Direction::Downlink),
                                                in(Band::Ka, Direction::Uplink),
                                                cap.hpbw(Band::Ka), std::min(lat, limit));
      csv::row(os, {rad2deg(lat), s.n_visible, s.cells_per_satellite, k.cells_per_satellite,
                    s.density_dl_bps_km2, s.density_ul_bps_km2, k.density_dl_bps_km2,
                    k.density_ul_bps_km2});
    }
  });
}

void cmd_snapshot(const Common& c, const std::string& direction,
                  const std::string& densities, std::optional<int> drops, std::ostream& out) {
  Direction dir;
  if (direction == "dl") dir = Direction::Downlink;
  else if (direction == "ul") dir = Direction::Uplink;
  else throw UsageError("direction must be 'dl' or 'ul', got '" + direction + "'");

  auto sc = load_scenario(c, "s-handheld");
  auto cfg = sc.snapshot;
  if (c.seed) cfg.seed = *c.seed;
  if (!densities.empty()) {
    try {
      cfg.densities = scenario::parse_number_list(densities);
    } catch (const ConfigError& e) {
      throw UsageError(std::string("--densities: ") + e.what());
    }
  }
  if (drops) {
    if (*drops < 1) throw UsageError("--drops must be >= 1");
    cfg.drops = *drops;
  }
  const auto result = snapshot::run_snapshot(cfg, dir);
  emit(c, out, [&](std::ostream& os) { snapshot::write_csv(os, result); });
}

void cmd_visible(const Common& c, double lat_deg, bool oracle, long samples, std::ostream& out) {
  if (!(std::abs(lat_deg) <= 90.0)) throw UsageError("--lat-deg must lie in [-90, 90]");
  if (oracle && samples < 1) throw UsageError("--samples must be >= 1");
  const auto sc = load_scenario(c, "kuiper");
  const double lat = deg2rad(lat_deg);
  const double nv = constellation::visible_satellites(sc.shell, lat);
  emit(c, out, [&](std::ostream& os) {
    if (!oracle) {
      csv::header(os, {"lat_deg", "n_visible"});
      csv::row(os, {lat_deg, nv});
      return;
    }
    const double bf = constellation::brute_force_visibility(sc.shell, lat, samples,
                                                            c.seed.value_or(1));
    const double gap = bf > 0.0 ? std::abs(nv - bf) / bf
                                : (nv > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    csv::header(os, {"lat_deg", "n_visible", "oracle_n_visible", "rel_gap"});
    csv::row(os, {lat_deg, nv, bf, gap});
  });
}

void cmd_layout(const Common& c, std::optional<double> center_elev_deg, int gain_points,
                std::ostream& out) {
  if (gain_points < 0 || gain_points == 1) throw UsageError("--gain-map needs 0 or >= 2 points");
  const auto sc = load_scenario(c, "s-handheld");
  const double elev = center_elev_deg ? deg2rad(*center_elev_deg)
                                      : sc.snapshot.center_elevation_rad;
  const auto grid = layout::build_grid(sc.snapshot.band, sc.snapshot.geom, elev);
  const auto pattern = sc.snapshot.band.beam_pattern(Direction::Downlink);
  emit(c, out, [&](std::ostream& os) {
    if (gain_points == 0) {
      csv::header(os, {"beam_index", "ring", "u", "v", "lat_deg", "lon_deg", "cell_area_km2"});
      for (const auto& b : grid.beams) {
        csv::row(os, {static_cast<double>(b.index), static_cast<double>(b.ring), b.uv_center.u,
                      b.uv_center.v, rad2deg(b.ground_center.latitude),
                      rad2deg(b.ground_center.longitude), layout::cell_area_km2(grid, b.index)});
      }
      return;
    }
    csv::header(os, {"lat", "lon", "beam_index", "normalized_gain_db"});
    for (const auto& s : layout::gain_map(grid, pattern, gain_points)) {
      csv::row(os, {rad2deg(s.position.latitude), rad2deg(s.position.longitude),
                    static_cast<double>(s.beam_index), s.normalized_gain_db});
    }
  });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Throughput and capacity toolkit for LEO satellite access networks", "ntncap"};
  app.require_subcommand(1);

  Common common;

  auto* antenna_cmd = app.add_subcommand("antenna", "Satellite beam pattern samples (CSV)");
  add_common(antenna_cmd, common);
  double theta_max = 10.0;
  double antenna_step = 0.01;
  antenna_cmd->add_option("--theta-max-deg", theta_max, "Largest off-boresight angle");
  antenna_cmd->add_option("--step-deg", antenna_step, "Angular step");

  auto* capacity_cmd = app.add_subcommand("capacity", "Capacity density versus latitude (CSV)");
  add_common(capacity_cmd, common);
  std::optional<double> capacity_step;
  bool summary = false;
  capacity_cmd->add_option("--step-deg", capacity_step, "Latitude step");
  capacity_cmd->add_flag("--summary", summary, "Print served-band ranges instead of the sweep");

  auto* snapshot_cmd = app.add_subcommand("snapshot", "Monte Carlo SINR/throughput sweep (CSV)");
  add_common(snapshot_cmd, common);
  std::string direction;
  std::string densities;
  std::optional<int> drops;
  snapshot_cmd->add_option("direction", direction, "dl or ul")->required();
  snapshot_cmd->add_option("--seed", common.seed, "Master seed");
  snapshot_cmd->add_option("--densities", densities, "Comma-separated users per cell");
  snapshot_cmd->add_option("--drops", drops, "Snapshots per density");

  auto* visible_cmd = app.add_subcommand("visible", "Mean visible satellites at a latitude");
  add_common(visible_cmd, common);
  double lat_deg = 0.0;
  bool oracle = false;
  long samples = 1'000'000;
  visible_cmd->add_option("--lat-deg", lat_deg, "Observer latitude")->required();
  visible_cmd->add_flag("--oracle", oracle, "Also run the brute-force constellation oracle");
  visible_cmd->add_option("--samples", samples, "Oracle samples");
  visible_cmd->add_option("--seed", common.seed, "Oracle seed");

  auto* layout_cmd = app.add_subcommand("layout", "19-beam grid or gain map (CSV)");
  add_common(layout_cmd, common);
  std::optional<double> center_elev;
  int gain_points = 0;
  layout_cmd->add_option("--center-elevation-deg", center_elev, "Central beam elevation");
  layout_cmd->add_option("--gain-map", gain_points, "Raster points per side (0: beam table)");

  auto* preset_cmd = app.add_subcommand("preset", "Print a built-in preset as a scenario file");
  std::string preset_name;
  preset_cmd->add_option("name", preset_name, "s-handheld, ka-vsat or kuiper")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*antenna_cmd) cmd_antenna(common, theta_max, antenna_step, out);
    else if (*capacity_cmd) cmd_capacity(common, capacity_step, summary, out, err);
    else if (*snapshot_cmd) cmd_snapshot(common, direction, densities, drops, out);
    else if (*visible_cmd) cmd_visible(common, lat_deg, oracle, samples, out);
    else if (*layout_cmd) cmd_layout(common, center_elev, gain_points, out);
    else if (*preset_cmd) out << scenario::to_ini(scenario::preset(preset_name));
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}

}  // namespace ntn::cli
