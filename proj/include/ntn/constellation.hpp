#pragma once

// Analytical constellation capacity: mean visible satellites per latitude,
// Earth-fixed hexagonal cells, per-satellite capacity and capacity density.

#include <cstdint>
#include <optional>
#include <vector>

#include "ntn/geometry.hpp"

namespace ntn::constellation {

struct ConstellationShell {
  int planes = 80;
  int sats_per_plane = 40;
  double altitude_km = 600.0;
  double inclination_rad = geometry::deg2rad(50.0);
  double min_elevation_rad = geometry::deg2rad(35.0);
  /// Walker phasing factor, used only by the brute-force oracle.
  int phasing = 1;

  static ConstellationShell kuiper() { return {}; }

  void validate() const;
  int total_satellites() const { return planes * sats_per_plane; }
  geometry::SatGeometry geometry() const {
    return {altitude_km, geometry::kEarthRadiusKm, min_elevation_rad};
  }
  /// Highest |latitude| with any visibility: inclination + footprint angle.
  double coverage_limit_rad() const;
};

struct CapacityInputs {
  int n_beams = 19;
  double bandwidth_hz = 30e6;
  double mean_se_bps_hz = 0.52;
  int polarizations = 2;

  void validate() const;
};

/// Mean number of satellites above the minimum elevation seen from a
/// latitude, by tanh-sinh quadrature after the substitution
/// sin x = sin(inclination) sin t, which removes the inverse-square-root
/// blow-up at x = +-inclination. Relative tolerance 1e-8.
double visible_satellites(const ConstellationShell& shell, double latitude);

/// Monte Carlo oracle: Walker constellation on circular orbits, observer
/// longitude and constellation phase drawn uniformly, satellites counted
/// when their computed elevation is at least the minimum elevation.
double brute_force_visibility(const ConstellationShell& shell, double latitude,
                              long samples, std::uint64_t seed = 1);

/// Geocentric angle between adjacent Earth-fixed cell centres: beams
/// separated by half the HPBW at nadir.
double cell_center_angle(const geometry::SatGeometry& geom, double hpbw_rad);

/// Hexagonal cell area (km^2) with inradius half the centre separation:
/// (sqrt(3)/2) R^2 beta_cell^2.
double cell_area(const geometry::SatGeometry& geom, double hpbw_rad);

/// The bracketed factor of the uncorrected cell-area expression, evaluated
/// literally. It equals -cell_center_angle(); kept for diagnostics.
double cell_area_literal_bracket(const geometry::SatGeometry& geom,
                                 double hpbw_rad);

double footprint_area(const geometry::SatGeometry& geom);

double cells_per_footprint(const geometry::SatGeometry& geom, double hpbw_rad);

/// nullopt at uncovered latitudes (no visible satellite).
std::optional<double> cells_per_satellite(const ConstellationShell& shell,
                                          double latitude, double hpbw_rad);

/// polarizations * se * bandwidth * beams (bps).
double satellite_capacity(const CapacityInputs& inputs);

struct DensityForms {
  double via_cells;      // C_sat / (A_cell * cells per satellite)
  double via_footprint;  // C_sat * N_visible / footprint area
};

std::optional<DensityForms> capacity_density_forms(
    const ConstellationShell& shell, const CapacityInputs& inputs,
    double hpbw_rad, double latitude);

/// Capacity per unit surface (bps/km^2); nullopt at uncovered latitudes.
std::optional<double> capacity_density(const ConstellationShell& shell,
                                       const CapacityInputs& inputs,
                                       double hpbw_rad, double latitude);

struct CapacityPoint {
  double latitude_rad = 0.0;
  double n_visible = 0.0;
  double cells_per_footprint = 0.0;
  double cells_per_satellite = 0.0;  // NaN where uncovered
  double density_dl_bps_km2 = 0.0;
  double density_ul_bps_km2 = 0.0;
};

using CapacityProfile = std::vector<CapacityPoint>;

CapacityPoint capacity_at(const ConstellationShell& shell,
                          const CapacityInputs& inputs_dl,
                          const CapacityInputs& inputs_ul, double hpbw_rad,
                          double latitude);

/// Points at 0, step, 2 step, ... up to the coverage limit, which is always
/// included as the final point.
CapacityProfile latitude_sweep(const ConstellationShell& shell,
                               const CapacityInputs& inputs_dl,
                               const CapacityInputs& inputs_ul, double hpbw_rad,
                               double step);

/// Highest latitude (>= 0) whose mean visible count is at least
/// `min_visible`, or nullopt if no latitude reaches it.
std::optional<double> service_edge(const ConstellationShell& shell,
                                   double min_visible);

struct Range {
  double min;
  double max;
};

/// Extremes over the served band |latitude| <= service_edge(min_visible),
/// taken over the sweep points inside it plus the edge itself.
struct ServiceSummary {
  double edge_latitude_rad;
  Range n_visible;
  Range cells_per_satellite;
  Range density_dl;
  Range density_ul;
};

std::optional<ServiceSummary> service_summary(const ConstellationShell& shell,
                                              const CapacityInputs& inputs_dl,
                                              const CapacityInputs& inputs_ul,
                                              double hpbw_rad, double step,
                                              double min_visible);

}  // namespace ntn::constellation
