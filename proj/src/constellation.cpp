#include "ntn/constellation.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "ntn/errors.hpp"
#include "ntn/rng.hpp"

namespace ntn::constellation {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadTolerance = 1e-8;
constexpr long kOracleChunk = 1 << 15;

using geometry::Vec3;

}  // namespace

void ConstellationShell::validate() const {
  if (planes < 1 || sats_per_plane < 1)
    throw ConfigError("planes and satellites per plane must be >= 1");
  if (!(inclination_rad > 0.0 && inclination_rad <= kPi / 2))
    throw ConfigError("inclination must lie in (0, 90] deg");
  geometry().validate();
}

double ConstellationShell::coverage_limit_rad() const {
  return std::min(kPi / 2, inclination_rad + geometry::footprint_angle(geometry()));
}

void CapacityInputs::validate() const {
  if (n_beams < 1) throw ConfigError("n_beams must be >= 1");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
  if (!(mean_se_bps_hz > 0.0)) throw ConfigError("spectral efficiency must be positive");
  if (polarizations < 1) throw ConfigError("polarizations must be >= 1");
}

double visible_satellites(const ConstellationShell& shell, double latitude) {
  if (!(std::abs(latitude) <= kPi / 2))
    throw DomainError("latitude must lie in [-90, 90] deg");
  shell.validate();
  const double beta = geometry::footprint_angle(shell.geometry());
  const double alpha = shell.inclination_rad;
  const double p = std::max(-alpha, latitude - beta);
  const double q = std::min(alpha, latitude + beta);
  if (p >= q) return 0.0;

  // With sin x = sin(alpha) sin t, dx / sqrt(1 - (sin x / sin alpha)^2)
  // becomes sin(alpha) dt / cos x, which is bounded on [-alpha, alpha].
  const double sa = std::sin(alpha);
  const auto to_t = [&](double x) {
    return std::asin(std::clamp(std::sin(x) / sa, -1.0, 1.0));
  };
  const auto integrand = [&](double t) {
    const double x = std::asin(sa * std::sin(t));
    const double d = x - latitude;
    return std::sqrt(std::max(0.0, beta * beta - d * d)) / std::cos(x);
  };
  // Near the coverage limit the chord zero sits just past an endpoint;
  // tanh-sinh copes with that where Gauss-Kronrod bisects for ever.
  thread_local boost::math::quadrature::tanh_sinh<double> quad;
  const double integral = quad.integrate(integrand, to_t(p), to_t(q), kQuadTolerance);
  // The sin(alpha) of the substitution cancels the prefactor's.
  return static_cast<double>(shell.total_satellites()) / (kPi * kPi) * integral;
}

double brute_force_visibility(const ConstellationShell& shell, double latitude,
                              long samples, std::uint64_t seed) {
  shell.validate();
  if (samples < 1) throw ConfigError("oracle needs at least one sample");
  const auto geom = shell.geometry();
  const double r_orbit = geom.orbit_radius_km();
  const double r_earth = geom.earth_radius_km;
  // Cull with a cap a little wider than the footprint so that the exact
  // elevation test below decides every count.
  const double cull_angle = geometry::footprint_angle(geom) + geometry::deg2rad(2.0);
  const double cos_cull = std::cos(cull_angle);
  const double ci = std::cos(shell.inclination_rad);
  const double si = std::sin(shell.inclination_rad);
  const int np = shell.planes;
  const int ns = shell.sats_per_plane;
  const int nsat = shell.total_satellites();
  const double spacing = 2.0 * kPi / ns;

  std::vector<Vec3> p_axis(np), q_axis(np);
  for (int k = 0; k < np; ++k) {
    const double raan = 2.0 * kPi * k / np;
    p_axis[k] = Vec3(std::cos(raan), std::sin(raan), 0.0);
    q_axis[k] = Vec3(-std::sin(raan) * ci, std::cos(raan) * ci, si);
  }

  const auto count_chunk = [&](long chunk, long n) {
    std::mt19937_64 rng(derive_seed(seed, 0, static_cast<std::uint64_t>(chunk)));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    long total = 0;
    for (long s = 0; s < n; ++s) {
      const geometry::GroundPoint obs{latitude, angle(rng) - kPi};
      const double t = angle(rng);
      const Vec3 up = geometry::to_ecef(obs, 1.0);
      for (int k = 0; k < np; ++k) {
        // up . sat_hat = rho cos(u - phi) along the plane.
        const double a = up.dot(p_axis[k]);
        const double b = up.dot(q_axis[k]);
        const double rho = std::hypot(a, b);
        if (rho < cos_cull) continue;
        const double half = std::acos(std::min(1.0, cos_cull / rho));
        const double phi = std::atan2(b, a);
        const double u0 = 2.0 * kPi * shell.phasing * k / nsat + t;
        const long j_lo = static_cast<long>(std::ceil((phi - half - u0) / spacing));
        const long j_hi = std::min(j_lo + ns - 1,
                                   static_cast<long>(std::floor((phi + half - u0) / spacing)));
        for (long j = j_lo; j <= j_hi; ++j) {
          const double u = u0 + spacing * static_cast<double>(j);
          const Vec3 sat = r_orbit * (std::cos(u) * p_axis[k] + std::sin(u) * q_axis[k]);
          const auto es = geometry::elevation_and_slant(sat, obs, r_earth);
          if (es.elevation_rad >= shell.min_elevation_rad) ++total;
        }
      }
    }
    return total;
  };

  const long chunks = (samples + kOracleChunk - 1) / kOracleChunk;
  std::vector<long> counts(chunks, 0);
  const long workers = std::max(1L, std::min<long>(chunks, std::thread::hardware_concurrency()));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (long w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (long c = w; c < chunks; c += workers) {
            const long n = std::min(kOracleChunk, samples - c * kOracleChunk);
            counts[c] = count_chunk(c, n);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  long total = 0;
  for (long c : counts) total += c;
  return static_cast<double>(total) / static_cast<double>(samples);
}

double cell_center_angle(const geometry::SatGeometry& geom, double hpbw_rad) {
  geom.validate();
  if (!(hpbw_rad > 0.0)) throw DomainError("HPBW must be positive");
  const double arg = geom.orbit_radius_km() / geom.earth_radius_km * std::sin(hpbw_rad / 2);
  if (arg > 1.0) throw DomainError("half-HPBW beam points past the Earth limb");
  return std::asin(arg) - hpbw_rad / 2;
}

double cell_area(const geometry::SatGeometry& geom, double hpbw_rad) {
  const double b = cell_center_angle(geom, hpbw_rad);
  const double r = geom.earth_radius_km;
  return std::sqrt(3.0) / 2.0 * r * r * b * b;
}

double cell_area_literal_bracket(const geometry::SatGeometry& geom, double hpbw_rad) {
  const double arg = geom.orbit_radius_km() / geom.earth_radius_km * std::sin(hpbw_rad / 2);
  if (arg > 1.0) throw DomainError("half-HPBW beam points past the Earth limb");
  return (hpbw_rad - kPi) / 2 + std::acos(arg);
}

double footprint_area(const geometry::SatGeometry& geom) {
  return geometry::cap_area_km2(geometry::footprint_angle(geom), geom.earth_radius_km);
}

double cells_per_footprint(const geometry::SatGeometry& geom, double hpbw_rad) {
  return footprint_area(geom) / cell_area(geom, hpbw_rad);
}

std::optional<double> cells_per_satellite(const ConstellationShell& shell,
                                          double latitude, double hpbw_rad) {
  const double nv = visible_satellites(shell, latitude);
  if (!(nv > 0.0)) return std::nullopt;
  return cells_per_footprint(shell.geometry(), hpbw_rad) / nv;
}

double satellite_capacity(const CapacityInputs& in) {
  in.validate();
  return in.polarizations * in.mean_se_bps_hz * in.bandwidth_hz * in.n_beams;
}

std::optional<DensityForms> capacity_density_forms(const ConstellationShell& shell,
                                                   const CapacityInputs& inputs,
                                                   double hpbw_rad, double latitude) {
  const double nv = visible_satellites(shell, latitude);
  if (!(nv > 0.0)) return std::nullopt;
  const auto geom = shell.geometry();
  const double c_sat = satellite_capacity(inputs);
  const double a_cell = cell_area(geom, hpbw_rad);
  const double per_sat = cells_per_footprint(geom, hpbw_rad) / nv;
  return DensityForms{c_sat / (a_cell * per_sat), c_sat * nv / footprint_area(geom)};
}

std::optional<double> capacity_density(const ConstellationShell& shell,
                                       const CapacityInputs& inputs,
                                       double hpbw_rad, double latitude) {
  const auto f = capacity_density_forms(shell, inputs, hpbw_rad, latitude);
  if (!f) return std::nullopt;
  return f->via_cells;
}

CapacityPoint capacity_at(const ConstellationShell& shell, const CapacityInputs& dl,
                          const CapacityInputs& ul, double hpbw_rad, double latitude) {
  const auto geom = shell.geometry();
  CapacityPoint pt;
  pt.latitude_rad = latitude;
  pt.n_visible = visible_satellites(shell, latitude);
  pt.cells_per_footprint = cells_per_footprint(geom, hpbw_rad);
  if (pt.n_visible > 0.0) {
    pt.cells_per_satellite = pt.cells_per_footprint / pt.n_visible;
    const double a_cell = cell_area(geom, hpbw_rad);
    pt.density_dl_bps_km2 = satellite_capacity(dl) / (a_cell * pt.cells_per_satellite);
    pt.density_ul_bps_km2 = satellite_capacity(ul) / (a_cell * pt.cells_per_satellite);
  } else {
    pt.cells_per_satellite = std::numeric_limits<double>::quiet_NaN();
  }
  return pt;
}

CapacityProfile latitude_sweep(const ConstellationShell& shell, const CapacityInputs& dl,
                               const CapacityInputs& ul, double hpbw_rad, double step) {
  if (!(step > 0.0)) throw ConfigError("latitude step must be positive");
  shell.validate();
  dl.validate();
  ul.validate();
  const double limit = shell.coverage_limit_rad();
  CapacityProfile out;
  for (long i = 0;; ++i) {
    const double lat = static_cast<double>(i) * step;
    if (lat > limit) break;
    out.push_back(capacity_at(shell, dl, ul, hpbw_rad, lat));
  }
  if (out.empty() || out.back().latitude_rad < limit)
    out.push_back(capacity_at(shell, dl, ul, hpbw_rad, limit));
  return out;
}

std::optional<double> service_edge(const ConstellationShell& shell, double min_visible) {
  if (!(min_visible > 0.0)) throw ConfigError("service threshold must be positive");
  const double limit = shell.coverage_limit_rad();
  const double probe = geometry::deg2rad(0.01);
  // Walk down from the coverage limit to the outermost crossing, then bisect.
  double hi = limit;
  double lo = limit;
  bool found = false;
  while (lo > 0.0) {
    lo = std::max(0.0, lo - probe);
    if (visible_satellites(shell, lo) >= min_visible) {
      found = true;
      break;
    }
    hi = lo;
  }
  if (!found) return std::nullopt;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (visible_satellites(shell, mid) >= min_visible)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

std::optional<ServiceSummary> service_summary(const ConstellationShell& shell,
                                              const CapacityInputs& dl,
                                              const CapacityInputs& ul,
                                              double hpbw_rad, double step,
                                              double min_visible) {
  const auto edge = service_edge(shell, min_visible);
  if (!edge) return std::nullopt;
  auto points = latitude_sweep(shell, dl, ul, hpbw_rad, step);
  std::erase_if(points, [&](const CapacityPoint& p) {
    return p.latitude_rad > *edge || p.n_visible < min_visible;
  });
  points.push_back(capacity_at(shell, dl, ul, hpbw_rad, *edge));

  constexpr double inf = std::numeric_limits<double>::infinity();
  ServiceSummary s{*edge, {inf, -inf}, {inf, -inf}, {inf, -inf}, {inf, -inf}};
  const auto widen = [](Range& r, double v) {
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
  };
  for (const auto& p : points) {
    widen(s.n_visible, p.n_visible);
    widen(s.cells_per_satellite, p.cells_per_satellite);
    widen(s.density_dl, p.density_dl_bps_km2);
    widen(s.density_ul, p.density_ul_bps_km2);
  }
  return s;
}

}  // namespace ntn::constellation
