#include "ntn/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ntn/errors.hpp"
#include "ntn/rng.hpp"

namespace ntn::layout {

namespace {

constexpr double kPi = std::numbers::pi;

struct Tangent {
  Vec3 e1;
  Vec3 e2;
};

Tangent tangent_basis(const Vec3& c) {
  const auto f = geometry::AntennaFrame::from_boresight(c);
  return {f.u_axis, f.v_axis};
}

std::vector<Vec3> all_centers(const BeamGrid& grid) {
  std::vector<Vec3> out;
  out.reserve(grid.beams.size() + grid.guard_centers.size());
  for (const auto& b : grid.beams) out.push_back(b.ground_ecef.normalized());
  for (const auto& g : grid.guard_centers) out.push_back(g.normalized());
  return out;
}

using Point2 = Eigen::Vector2d;

// Keeps the part of `poly` where n.dot(p) + k >= 0.
std::vector<Point2> clip(const std::vector<Point2>& poly, const Point2& n,
                         double k) {
  std::vector<Point2> out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % m];
    const double da = n.dot(a) + k;
    const double db = n.dot(b) + k;
    if (da >= 0.0) out.push_back(a);
    if ((da >= 0.0) != (db >= 0.0)) out.push_back(a + (b - a) * (da / (da - db)));
  }
  return out;
}

// Solid angle of the spherical triangle (a, b, c) of unit vectors.
double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double num = std::abs(a.dot(b.cross(c)));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

}  // namespace

std::vector<UvPoint> hex_lattice(int rings) {
  std::vector<UvPoint> pts{{0.0, 0.0}};
  for (int r = 1; r <= rings; ++r) {
    for (int side = 0; side < 6; ++side) {
      const double a0 = kPi / 3.0 * side;
      const double a1 = kPi / 3.0 * (side + 2);
      for (int t = 0; t < r; ++t) {
        pts.push_back({r * std::cos(a0) + t * std::cos(a1),
                       r * std::sin(a0) + t * std::sin(a1)});
      }
    }
  }
  return pts;
}

double uv_spacing_for(double hpbw_rad) {
  return 2.0 * std::sin(hpbw_rad / 4.0);
}

BeamGrid build_grid(const link::BandSystem& band,
                    const geometry::SatGeometry& geom,
                    double center_elevation) {
  band.validate();
  geom.validate();
  if (!(center_elevation > geom.min_elevation_rad &&
        center_elevation <= kPi / 2))
    throw ConfigError("centre elevation must lie in (min elevation, 90] deg");

  BeamGrid grid;
  grid.geom = geom;
  grid.center_elevation_rad = center_elevation;
  grid.uv_spacing = uv_spacing_for(band.sat_hpbw_rad);
  grid.sat_position =
      geometry::position_above({0.0, 0.0}, geom.altitude_km, geom.earth_radius_km);
  grid.frame = geometry::AntennaFrame::from_boresight(-grid.sat_position);

  const double beta_c = geometry::geocentric_angle_for_elevation(geom, center_elevation);
  const Vec3 center_ground =
      geometry::to_ecef({std::max(0.0, beta_c), 0.0}, geom.earth_radius_km);
  const UvPoint uv_c = grid.frame.to_uv(center_ground - grid.sat_position);

  const auto lattice = hex_lattice(3);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const UvPoint uv{uv_c.u + grid.uv_spacing * lattice[i].u,
                     uv_c.v + grid.uv_spacing * lattice[i].v};
    const bool guard = static_cast<int>(i) >= kBeamCount;
    std::optional<Vec3> hit;
    Vec3 dir = Vec3::Zero();
    if (uv.radius() < 1.0) {
      dir = grid.frame.direction(uv);
      hit = geometry::ray_sphere_intersection(grid.sat_position, dir,
                                              geom.earth_radius_km);
    }
    if (guard) {
      if (hit) grid.guard_centers.push_back(*hit);
      continue;
    }
    if (!hit)
      throw ConfigError("beam " + std::to_string(i) +
                        " misses the Earth; lower the centre tilt");
    Beam b;
    b.index = static_cast<int>(i);
    b.ring = i == 0 ? 0 : (i <= 6 ? 1 : 2);
    b.uv_center = uv;
    b.ground_ecef = *hit;
    b.ground_center = geometry::from_ecef(*hit);
    b.boresight_direction = dir;
    grid.beams.push_back(b);
  }
  return grid;
}

double off_boresight_angle(const BeamGrid& grid, int beam_index,
                           const Vec3& target_ecef) {
  if (beam_index < 0 || beam_index >= static_cast<int>(grid.beams.size()))
    throw DomainError("beam index out of range");
  return geometry::angle_between(grid.beams[beam_index].boresight_direction,
                                 target_ecef - grid.sat_position);
}

double beam_gain_at(const BeamGrid& grid, int beam_index,
                    const GroundPoint& target,
                    const antenna::AperturePattern& pattern) {
  const auto es = geometry::elevation_and_slant(grid.sat_position, target,
                                                grid.geom.earth_radius_km);
  if (es.elevation_rad < 0.0)
    throw DomainError("target is below the satellite horizon");
  const Vec3 t = geometry::to_ecef(target, grid.geom.earth_radius_km);
  return antenna::pattern_gain(pattern, off_boresight_angle(grid, beam_index, t));
}

std::vector<double> beam_gains(const BeamGrid& grid, const Vec3& target_ecef,
                               const antenna::AperturePattern& pattern) {
  std::vector<double> g(grid.beams.size());
  const Vec3 los = target_ecef - grid.sat_position;
  for (std::size_t i = 0; i < grid.beams.size(); ++i) {
    const double th = geometry::angle_between(grid.beams[i].boresight_direction, los);
    g[i] = antenna::pattern_gain(pattern, std::min(th, kPi / 2));
  }
  return g;
}

int nearest_center(const BeamGrid& grid, const Vec3& p) {
  const Vec3 q = p.normalized();
  int best = 0;
  double best_dot = -2.0;
  const int nb = static_cast<int>(grid.beams.size());
  for (int i = 0; i < nb; ++i) {
    const double d = q.dot(grid.beams[i].ground_ecef.normalized());
    if (d > best_dot) {
      best_dot = d;
      best = i;
    }
  }
  for (std::size_t k = 0; k < grid.guard_centers.size(); ++k) {
    const double d = q.dot(grid.guard_centers[k].normalized());
    if (d > best_dot) {
      best_dot = d;
      best = nb + static_cast<int>(k);
    }
  }
  return best;
}

std::vector<Vec3> cell_polygon(const BeamGrid& grid, int beam_index) {
  if (beam_index < 0 || beam_index >= static_cast<int>(grid.beams.size()))
    throw DomainError("beam index out of range");
  // Gnomonic projection about the cell centre maps great circles, and hence
  // the perpendicular-bisector planes, to straight lines.
  const Vec3 c = grid.beams[beam_index].ground_ecef.normalized();
  const auto [e1, e2] = tangent_basis(c);
  std::vector<Point2> poly{{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}};
  const auto centers = all_centers(grid);
  for (std::size_t j = 0; j < centers.size(); ++j) {
    if (static_cast<int>(j) == beam_index) continue;
    const Vec3 diff = c - centers[j];
    poly = clip(poly, Point2(e1.dot(diff), e2.dot(diff)), 1.0 - c.dot(centers[j]));
  }
  std::vector<Vec3> out;
  out.reserve(poly.size());
  const double r = grid.geom.earth_radius_km;
  for (const auto& p : poly)
    out.push_back(r * (c + p.x() * e1 + p.y() * e2).normalized());
  return out;
}

double cell_area_km2(const BeamGrid& grid, int beam_index) {
  const auto poly = cell_polygon(grid, beam_index);
  const Vec3 c = grid.beams[beam_index].ground_ecef.normalized();
  double omega = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    omega += triangle_solid_angle(c, poly[i].normalized(),
                                  poly[(i + 1) % poly.size()].normalized());
  }
  const double r = grid.geom.earth_radius_km;
  return omega * r * r;
}

UserDrop drop_users(const BeamGrid& grid, double mean_users_per_cell,
                    std::uint64_t rng_seed,
                    const antenna::AperturePattern& pattern) {
  if (!(mean_users_per_cell >= 0.0) || !std::isfinite(mean_users_per_cell))
    throw ConfigError("mean users per cell must be a non-negative number");
  UserDrop drop;
  drop.users_per_cell_mean = mean_users_per_cell;
  if (mean_users_per_cell == 0.0) return drop;

  std::mt19937_64 rng(splitmix64(rng_seed));
  std::poisson_distribution<int> count(mean_users_per_cell);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double earth_r = grid.geom.earth_radius_km;

  for (const auto& beam : grid.beams) {
    const int n = count(rng);
    if (n == 0) continue;
    const Vec3 c = beam.ground_ecef.normalized();
    const auto [e1, e2] = tangent_basis(c);
    double cap = 0.0;
    for (const auto& v : cell_polygon(grid, beam.index))
      cap = std::max(cap, geometry::angle_between(c, v));
    const double one_minus_cos = 1.0 - std::cos(cap);

    // Uniform on the spherical cap around the centre, rejected outside the
    // cell polygon.
    for (int accepted = 0; accepted < n;) {
      const double cos_a = 1.0 - unit(rng) * one_minus_cos;
      const double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));
      const double az = 2.0 * kPi * unit(rng);
      const Vec3 p = cos_a * c + sin_a * (std::cos(az) * e1 + std::sin(az) * e2);
      if (nearest_center(grid, p) != beam.index) continue;
      User u;
      u.ecef = earth_r * p;
      u.position = geometry::from_ecef(p);
      u.drop_cell = beam.index;
      const auto g = beam_gains(grid, u.ecef, pattern);
      u.serving_beam = static_cast<int>(std::max_element(g.begin(), g.end()) - g.begin());
      drop.users.push_back(u);
      ++accepted;
    }
  }
  return drop;
}

std::vector<GainSample> gain_map(const BeamGrid& grid,
                                 const antenna::AperturePattern& pattern,
                                 int points_per_side) {
  if (points_per_side < 2) throw ConfigError("gain map needs >= 2 points per side");
  const Vec3 c = grid.beams.front().ground_ecef.normalized();
  const auto [e1, e2] = tangent_basis(c);
  double extent = 0.0;
  for (const auto& b : grid.beams)
    for (const auto& v : cell_polygon(grid, b.index))
      extent = std::max(extent, geometry::angle_between(c, v));
  const double half = std::tan(extent);

  std::vector<GainSample> out;
  out.reserve(static_cast<std::size_t>(points_per_side) * points_per_side);
  const double step = 2.0 * half / (points_per_side - 1);
  for (int iy = 0; iy < points_per_side; ++iy) {
    for (int ix = 0; ix < points_per_side; ++ix) {
      const Vec3 p = (c + (-half + ix * step) * e1 + (-half + iy * step) * e2).normalized();
      const Vec3 ecef = grid.geom.earth_radius_km * p;
      if ((grid.sat_position - ecef).dot(p) <= 0.0) continue;  // below horizon
      const auto g = beam_gains(grid, ecef, pattern);
      const auto it = std::max_element(g.begin(), g.end());
      out.push_back({geometry::from_ecef(p), static_cast<int>(it - g.begin()),
                     link::linear_to_db(std::max(*it, 1e-30))});
    }
  }
  return out;
}

}  // namespace ntn::layout
