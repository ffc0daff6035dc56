#include "ntn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ntn/errors.hpp"

namespace ntn::geometry {

void SatGeometry::validate() const {
  if (!(altitude_km > 0.0))
    throw ConfigError("altitude must be positive, got " +
                      std::to_string(altitude_km));
  if (!(earth_radius_km > 0.0))
    throw ConfigError("earth radius must be positive");
  // pi/2 is admitted as the degenerate zero-footprint case.
  if (!(min_elevation_rad >= 0.0 && min_elevation_rad <= kPi / 2))
    throw ConfigError("minimum elevation must lie in [0, 90] deg");
}

double UvPoint::radius() const { return std::hypot(u, v); }

UvPoint uv_from_angles(double theta, double omega) {
  if (!(theta >= 0.0 && theta <= kPi / 2))
    throw DomainError("off-boresight angle must lie in [0, pi/2]");
  const double s = std::sin(theta);
  return {s * std::cos(omega), s * std::sin(omega)};
}

std::pair<double, double> angles_from_uv(const UvPoint& uv) {
  const double r = uv.radius();
  if (r > 1.0 + 1e-15) throw DomainError("UV point outside the unit circle");
  const double theta = std::asin(std::min(r, 1.0));
  const double omega = r > 0.0 ? std::atan2(uv.v, uv.u) : 0.0;
  return {theta, omega};
}

double geocentric_angle_for_elevation(const SatGeometry& geom,
                                      double elevation_rad) {
  const double ratio = geom.earth_radius_km / geom.orbit_radius_km();
  return kPi / 2 - std::asin(ratio * std::cos(elevation_rad)) - elevation_rad;
}

double footprint_angle(const SatGeometry& geom) {
  geom.validate();
  return std::max(0.0,
                  geocentric_angle_for_elevation(geom, geom.min_elevation_rad));
}

double cap_area_km2(double half_angle_rad, double earth_radius_km) {
  // 1 - cos(x) written as 2 sin^2(x/2) to keep precision for small caps.
  const double s = std::sin(half_angle_rad / 2);
  return 2.0 * kPi * earth_radius_km * earth_radius_km * 2.0 * s * s;
}

Vec3 to_ecef(const GroundPoint& p, double radius_km) {
  const double cl = std::cos(p.latitude);
  return radius_km * Vec3(cl * std::cos(p.longitude),
                          cl * std::sin(p.longitude), std::sin(p.latitude));
}

GroundPoint from_ecef(const Vec3& r) {
  return {std::atan2(r.z(), std::hypot(r.x(), r.y())),
          std::atan2(r.y(), r.x())};
}

Vec3 position_above(const GroundPoint& p, double altitude_km,
                    double earth_radius_km) {
  return to_ecef(p, earth_radius_km + altitude_km);
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double central_angle(const GroundPoint& a, const GroundPoint& b) {
  return angle_between(to_ecef(a, 1.0), to_ecef(b, 1.0));
}

double surface_distance_km(const GroundPoint& a, const GroundPoint& b,
                           double earth_radius_km) {
  return earth_radius_km * central_angle(a, b);
}

ElevationSlant elevation_and_slant(const Vec3& sat_position,
                                   const GroundPoint& ground,
                                   double earth_radius_km) {
  if (!(sat_position.norm() > earth_radius_km))
    throw DomainError("satellite must lie strictly above the Earth surface");
  const Vec3 up = to_ecef(ground, 1.0);
  const Vec3 los = sat_position - earth_radius_km * up;
  const double vertical = los.dot(up);
  const double horizontal = (los - vertical * up).norm();
  return {std::atan2(vertical, horizontal), los.norm()};
}

AntennaFrame AntennaFrame::from_boresight(const Vec3& boresight,
                                          const Vec3& reference) {
  AntennaFrame f;
  f.w_axis = boresight.normalized();
  Vec3 ref = reference - reference.dot(f.w_axis) * f.w_axis;
  if (ref.norm() < 1e-9) {
    // Reference parallel to boresight: fall back to any orthogonal axis.
    const Vec3 alt = std::abs(f.w_axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    ref = alt - alt.dot(f.w_axis) * f.w_axis;
  }
  f.u_axis = ref.normalized();
  f.v_axis = f.w_axis.cross(f.u_axis);
  return f;
}

Vec3 AntennaFrame::direction(const UvPoint& uv) const {
  const double r2 = uv.u * uv.u + uv.v * uv.v;
  if (r2 > 1.0) throw DomainError("UV point outside the unit circle");
  return uv.u * u_axis + uv.v * v_axis + std::sqrt(1.0 - r2) * w_axis;
}

UvPoint AntennaFrame::to_uv(const Vec3& direction) const {
  const Vec3 d = direction.normalized();
  return {d.dot(u_axis), d.dot(v_axis)};
}

std::optional<Vec3> ray_sphere_intersection(const Vec3& origin,
                                            const Vec3& direction,
                                            double earth_radius_km) {
  const Vec3 d = direction.normalized();
  const double b = origin.dot(d);
  const double c = origin.squaredNorm() - earth_radius_km * earth_radius_km;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  // Origin outside the sphere: both roots share a sign and t_near * t_far = c,
  // which gives the nearer root without cancellation.
  const double far = -b + std::sqrt(disc);
  if (c <= 0.0 || far <= 0.0) return std::nullopt;
  return origin + (c / far) * d;
}

std::optional<GroundPoint> ground_projection(const Vec3& sat_position,
                                             const Vec3& boresight_direction,
                                             const UvPoint& uv,
                                             double earth_radius_km) {
  const auto frame = AntennaFrame::from_boresight(boresight_direction);
  const auto hit = ray_sphere_intersection(sat_position, frame.direction(uv),
                                           earth_radius_km);
  if (!hit) return std::nullopt;
  return from_ecef(*hit);
}

}  // namespace ntn::geometry
