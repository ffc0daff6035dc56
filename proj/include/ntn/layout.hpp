#pragma once

// 19-beam hexagonal UV grid of one satellite, its ground cells, and user
// drops over those cells.

#include <cstdint>
#include <vector>

#include "ntn/antenna.hpp"
#include "ntn/geometry.hpp"
#include "ntn/link.hpp"

namespace ntn::layout {

using geometry::GroundPoint;
using geometry::UvPoint;
using geometry::Vec3;

inline constexpr int kBeamCount = 19;

struct Beam {
  int index = 0;
  int ring = 0;  // 0, 1 or 2
  UvPoint uv_center;
  GroundPoint ground_center;
  Vec3 ground_ecef;
  Vec3 boresight_direction;  // unit vector from the satellite
};

struct BeamGrid {
  geometry::SatGeometry geom;
  Vec3 sat_position;
  /// Nadir-pointing frame: w toward the Earth centre, u toward north.
  geometry::AntennaFrame frame;
  std::vector<Beam> beams;
  double center_elevation_rad = 0.0;
  double uv_spacing = 0.0;
  /// Ground projections of the third lattice ring. They bound the outer
  /// cells so every cell is a closed polygon.
  std::vector<Vec3> guard_centers;
};

/// Axial hex lattice offsets (in units of the spacing) for rings 0..rings,
/// ordered by ring then counter-clockwise from +u.
std::vector<UvPoint> hex_lattice(int rings);

/// Adjacent-beam spacing in the UV plane for a half-HPBW angular separation.
double uv_spacing_for(double hpbw_rad);

/// Builds the grid. The lattice is centred on the UV point of the central
/// beam, which is tilted north until its ground centre sees the satellite at
/// `center_elevation`. Throws ConfigError if any beam misses the Earth.
BeamGrid build_grid(const link::BandSystem& band,
                    const geometry::SatGeometry& geom,
                    double center_elevation);

/// Off-boresight angle of `target` for the given beam.
double off_boresight_angle(const BeamGrid& grid, int beam_index,
                           const Vec3& target_ecef);

/// Normalised gain of `beam_index` toward `target`. Throws DomainError when
/// the satellite is below the target's horizon.
double beam_gain_at(const BeamGrid& grid, int beam_index,
                    const GroundPoint& target,
                    const antenna::AperturePattern& pattern);

/// Gains of all beams toward an Earth-surface point (no horizon check).
std::vector<double> beam_gains(const BeamGrid& grid, const Vec3& target_ecef,
                               const antenna::AperturePattern& pattern);

/// Index of the beam centre (real or guard) nearest to `p`; guard centres
/// are reported as kBeamCount + k.
int nearest_center(const BeamGrid& grid, const Vec3& p);

/// Vertices (ECEF, on the sphere, counter-clockwise) of a cell's Voronoi
/// polygon among real and guard centres.
std::vector<Vec3> cell_polygon(const BeamGrid& grid, int beam_index);

/// Spherical area (km^2) of a cell polygon.
double cell_area_km2(const BeamGrid& grid, int beam_index);

struct User {
  GroundPoint position;
  Vec3 ecef;
  int drop_cell = 0;     // cell the position was drawn in
  int serving_beam = 0;  // strongest beam
};

struct UserDrop {
  std::vector<User> users;
  double users_per_cell_mean = 0.0;
};

/// Poisson(mean) users per cell, uniform over each cell polygon, then each
/// attached to its strongest beam.
UserDrop drop_users(const BeamGrid& grid, double mean_users_per_cell,
                    std::uint64_t rng_seed,
                    const antenna::AperturePattern& pattern);

struct GainSample {
  GroundPoint position;
  int beam_index;
  double normalized_gain_db;
};

/// Raster of the strongest-beam normalised gain over the cell area,
/// `points_per_side` squared samples.
std::vector<GainSample> gain_map(const BeamGrid& grid,
                                 const antenna::AperturePattern& pattern,
                                 int points_per_side);

}  // namespace ntn::layout
