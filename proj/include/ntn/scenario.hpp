#pragma once

// Scenario files: INI sections [band], [terminal], [shell], [snapshot], [se],
// [capacity], plus an optional [scenario] base = <preset>. Keys missing from
// a file take the value of the base preset; unknown keys are rejected.

#include <string>
#include <vector>

#include "ntn/constellation.hpp"
#include "ntn/snapshot.hpp"

namespace ntn::scenario {

/// Band parameters and mean spectral efficiencies feeding the
/// constellation capacity sweep (both bands are always evaluated).
struct CapacitySettings {
  int n_beams = 19;
  int polarizations = 2;
  double s_bandwidth_hz = 30e6;
  double s_hpbw_rad = geometry::deg2rad(4.41);
  double ka_bandwidth_hz = 400e6;
  double ka_hpbw_rad = geometry::deg2rad(1.76);
  double se_dl_s = 0.52;
  double se_ul_s = 0.18;
  double se_dl_ka = 0.47;
  double se_ul_ka = 0.5;
  /// Mean visible satellites required for a latitude to count as served in
  /// range summaries.
  double min_visible_for_service = 3.0;
  double step_rad = geometry::deg2rad(0.5);

  constellation::CapacityInputs inputs(link::Band band, link::Direction dir) const;
  double hpbw(link::Band band) const;
};

struct Scenario {
  std::string base = "s-handheld";
  snapshot::SnapshotConfig snapshot;
  constellation::ConstellationShell shell;
  CapacitySettings capacity;

  /// Copies the shell altitude and minimum elevation into the snapshot
  /// geometry and validates every section.
  void finalize();
};

std::vector<std::string> preset_names();

/// Built-in presets: "s-handheld", "ka-vsat", "kuiper". Throws ConfigError
/// for an unknown name.
Scenario preset(const std::string& name);

/// Parses INI text. Throws ConfigError on syntax errors, unknown sections or
/// keys, and invalid values.
Scenario parse(const std::string& text);
Scenario load(const std::string& path);

/// INI text that parses back to the same scenario.
std::string to_ini(const Scenario& s);

/// Comma-separated list of positive numbers.
std::vector<double> parse_number_list(const std::string& text);

}  // namespace ntn::scenario
