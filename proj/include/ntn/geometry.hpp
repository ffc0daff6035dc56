#pragma once

// Spherical-Earth geometry in a geocentric Cartesian frame (km). Latitude and
// longitude appear only at the interfaces.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <optional>

namespace ntn::geometry {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEarthRadiusKm = 6371.0;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

struct GroundPoint {
  double latitude = 0.0;   // rad, [-pi/2, pi/2]
  double longitude = 0.0;  // rad, (-pi, pi]
};

struct SatGeometry {
  double altitude_km = 600.0;
  double earth_radius_km = kEarthRadiusKm;
  double min_elevation_rad = 0.0;

  /// Throws ConfigError unless altitude > 0 and 0 <= min elevation <= pi/2.
  void validate() const;
  double orbit_radius_km() const { return earth_radius_km + altitude_km; }
};

/// Direction-cosine coordinates of a direction relative to a boresight.
struct UvPoint {
  double u = 0.0;
  double v = 0.0;

  double radius() const;
};

struct ElevationSlant {
  double elevation_rad;
  double slant_range_km;
};

/// u = sin(theta) cos(omega), v = sin(theta) sin(omega), with theta the
/// off-boresight angle and omega the angle around the boresight.
UvPoint uv_from_angles(double theta, double omega);

/// Inverse of uv_from_angles: returns {theta, omega}. omega is 0 at the origin.
std::pair<double, double> angles_from_uv(const UvPoint& uv);

/// Geocentric half-angle of the region that sees the satellite at or above
/// the minimum elevation.
double footprint_angle(const SatGeometry& geom);

/// Spherical-cap area (km^2) for a geocentric half-angle.
double cap_area_km2(double half_angle_rad,
                    double earth_radius_km = kEarthRadiusKm);

/// Geocentric angle between the sub-satellite point and a ground point that
/// sees the satellite at the given elevation.
double geocentric_angle_for_elevation(const SatGeometry& geom,
                                      double elevation_rad);

Vec3 to_ecef(const GroundPoint& p, double radius_km = kEarthRadiusKm);
GroundPoint from_ecef(const Vec3& r);

/// Satellite position at `altitude_km` above a ground point.
Vec3 position_above(const GroundPoint& p, double altitude_km,
                    double earth_radius_km = kEarthRadiusKm);

/// Central angle between two ground points (rad).
double central_angle(const GroundPoint& a, const GroundPoint& b);

/// Great-circle distance on the sphere (km).
double surface_distance_km(const GroundPoint& a, const GroundPoint& b,
                           double earth_radius_km = kEarthRadiusKm);

/// Elevation of the satellite seen from the ground point, and slant range.
/// Throws DomainError if the satellite is not strictly above the surface.
ElevationSlant elevation_and_slant(const Vec3& sat_position,
                                   const GroundPoint& ground,
                                   double earth_radius_km = kEarthRadiusKm);

/// Orthonormal antenna frame: w is the boresight, u/v span the UV plane.
struct AntennaFrame {
  Vec3 u_axis;
  Vec3 v_axis;
  Vec3 w_axis;

  /// Frame with boresight `w`; the U axis is the projection of `reference`
  /// (geocentric north by default) onto the plane orthogonal to `w`.
  static AntennaFrame from_boresight(const Vec3& boresight,
                                     const Vec3& reference = Vec3::UnitZ());

  Vec3 direction(const UvPoint& uv) const;
  UvPoint to_uv(const Vec3& direction) const;
};

/// Nearer intersection of the ray from `origin` along `direction` with the
/// Earth sphere, or nullopt when the ray misses.
std::optional<Vec3> ray_sphere_intersection(
    const Vec3& origin, const Vec3& direction,
    double earth_radius_km = kEarthRadiusKm);

/// Ground point hit by the beam at `uv` in the antenna frame whose boresight
/// is `boresight_direction`. nullopt when the beam overshoots the limb.
std::optional<GroundPoint> ground_projection(
    const Vec3& sat_position, const Vec3& boresight_direction,
    const UvPoint& uv, double earth_radius_km = kEarthRadiusKm);

/// Angle between two directions (rad), robust near 0 and pi.
double angle_between(const Vec3& a, const Vec3& b);

}  // namespace ntn::geometry
