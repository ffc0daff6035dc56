#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "ntn/constellation.hpp"
#include "ntn/errors.hpp"

using namespace ntn;
using namespace ntn::constellation;
using geometry::deg2rad;
using geometry::rad2deg;

namespace {

const auto kShell = ConstellationShell::kuiper();
const auto kGeom = kShell.geometry();
constexpr double R = geometry::kEarthRadiusKm;

CapacityInputs inputs(double b, double se) { return {19, b, se, 2}; }

// Mean visible count integrated exactly over the spherical cap: satellite
// surface density N cos x / (2 pi^2 sqrt(sin^2 a - sin^2 x)) times the
// longitude width of the cap at latitude x. No flat-chord approximation.
double exact_cap_visibility(const ConstellationShell& s, double lat) {
  const double beta = geometry::footprint_angle(s.geometry());
  const double a = s.inclination_rad;
  const double p = std::max(-a, lat - beta), q = std::min(a, lat + beta);
  if (p >= q) return 0.0;
  const double sa = std::sin(a);
  const auto width = [&](double x) {
    const double c = (std::cos(beta) - std::sin(lat) * std::sin(x)) /
                     (std::cos(lat) * std::cos(x));
    return 2.0 * std::acos(std::clamp(c, -1.0, 1.0));
  };
  // sin x = sin a sin t again absorbs the density's endpoint blow-up.
  const auto f = [&](double t) {
    const double x = std::asin(sa * std::sin(t));
    return width(x);
  };
  const auto tt = [&](double x) { return std::asin(std::clamp(std::sin(x) / sa, -1.0, 1.0)); };
  boost::math::quadrature::tanh_sinh<double> ts;
  return s.total_satellites() / (2 * M_PI * M_PI) * ts.integrate(f, tt(p), tt(q), 1e-10);
}

// Hexagon of inradius half the nadir beam separation, with the separation
// found by intersecting the tilted ray with the sphere.
double ray_traced_hex_area(double h, double hpbw) {
  const double r = R + h, th = hpbw / 2;
  const double t = r * std::cos(th) - std::sqrt(R * R - r * r * std::sin(th) * std::sin(th));
  const double s = R * std::atan2(t * std::sin(th), r - t * std::cos(th));
  return std::sqrt(3.0) / 2.0 * s * s;
}

}  // namespace

TEST_CASE("visible satellites examples") {
  CHECK(visible_satellites(kShell, 0.0) == doctest::Approx(8.7).epsilon(0.2 / 8.7));
  CHECK(visible_satellites(kShell, deg2rad(70)) == 0.0);
  CHECK(visible_satellites(kShell, deg2rad(-70)) == 0.0);
  double peak = 0.0;
  for (double d = 0; d <= 56; d += 0.1) peak = std::max(peak, visible_satellites(kShell, deg2rad(d)));
  CHECK(peak == doctest::Approx(25.0).epsilon(0.15));
  CHECK_THROWS_AS(visible_satellites(kShell, 2.0), DomainError);
}

TEST_CASE("visible satellites is even and continuous in latitude") {
  for (double d = 0; d <= 60; d += 0.7) {
    const double v = visible_satellites(kShell, deg2rad(d));
    CHECK(v == doctest::Approx(visible_satellites(kShell, deg2rad(-d))).epsilon(1e-12));
    CHECK(v >= 0.0);
    CHECK(std::abs(visible_satellites(kShell, deg2rad(d + 1e-4)) - v) < 0.05);
  }
}

TEST_CASE("brute-force oracle agrees where the chord approximation holds") {
  for (double d : {0.0, 25.0, 45.0}) {
    const double q = visible_satellites(kShell, deg2rad(d));
    const double bf = brute_force_visibility(kShell, deg2rad(d), 200000, 3);
    CHECK(std::abs(q - bf) / bf < 0.02);
  }
}

TEST_CASE("brute-force oracle matches the exact cap integral") {
  for (double d : {0.0, 25.0, 45.0, 55.0}) {
    const double ex = exact_cap_visibility(kShell, deg2rad(d));
    const double bf = brute_force_visibility(kShell, deg2rad(d), 200000, 4);
    CHECK(std::abs(ex - bf) / ex < 0.01);
  }
  // Near the coverage edge the flat-chord approximation falls well below
  // the exact cap count.
  const double q55 = visible_satellites(kShell, deg2rad(55));
  const double ex55 = exact_cap_visibility(kShell, deg2rad(55));
  CHECK((q55 - ex55) / ex55 < -0.04);
}

TEST_CASE("brute-force oracle limits") {
  auto blind = kShell;
  blind.min_elevation_rad = M_PI / 2;
  CHECK(brute_force_visibility(blind, 0.3, 20000) == doctest::Approx(0.0));

  ConstellationShell ring{1, 40, 600.0, 1e-9, deg2rad(35), 1};
  const double beta = geometry::footprint_angle(ring.geometry());
  const double arc = 40 * 2 * beta / (2 * M_PI);
  CHECK(brute_force_visibility(ring, 0.0, 200000) == doctest::Approx(arc).epsilon(0.02));
  CHECK_THROWS_AS(brute_force_visibility(kShell, 0.0, 0), ConfigError);
}

TEST_CASE("satellite-count conservation") {
  // Averaged over the sphere each satellite is seen by its footprint fraction.
  boost::math::quadrature::tanh_sinh<double> ts;
  const double avg = ts.integrate(
      [](double lat) { return visible_satellites(kShell, lat) * std::cos(lat) / 2; },
      -M_PI / 2, M_PI / 2, 1e-8);
  const double beta = geometry::footprint_angle(kGeom);
  const double expect = kShell.total_satellites() * (1 - std::cos(beta)) / 2;
  CHECK(avg == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("cell area") {
  const double s = cell_area(kGeom, deg2rad(4.41));
  const double k = cell_area(kGeom, deg2rad(1.76));
  CHECK(s == doctest::Approx(ray_traced_hex_area(600, deg2rad(4.41))).epsilon(1e-9));
  CHECK(k == doctest::Approx(ray_traced_hex_area(600, deg2rad(1.76))).epsilon(1e-9));
  CHECK(s == doctest::Approx(462).epsilon(0.01));
  CHECK(k == doctest::Approx(73.6).epsilon(0.01));
  CHECK(s / k == doctest::Approx(std::pow(4.41 / 1.76, 2)).epsilon(0.02));

  CHECK(cell_area_literal_bracket(kGeom, deg2rad(4.41)) ==
        doctest::Approx(-cell_center_angle(kGeom, deg2rad(4.41))).epsilon(1e-12));
  CHECK(cell_area_literal_bracket(kGeom, deg2rad(4.41)) < 0.0);

  CHECK_THROWS_AS(cell_area(kGeom, deg2rad(150)), DomainError);
  CHECK_THROWS_AS(cell_area(kGeom, 0.0), DomainError);
}

TEST_CASE("cells per footprint and per satellite") {
  CHECK(cells_per_footprint(kGeom, deg2rad(4.41)) == doctest::Approx(3.6e3).epsilon(0.03));
  CHECK(cells_per_footprint(kGeom, deg2rad(1.76)) == doctest::Approx(2.25e4).epsilon(0.03));
  const geometry::SatGeometry zenith{600, R, M_PI / 2};
  CHECK(cells_per_footprint(zenith, deg2rad(4.41)) == doctest::Approx(0.0));

  CHECK_FALSE(cells_per_satellite(kShell, deg2rad(70), deg2rad(4.41)));
  const auto c0 = cells_per_satellite(kShell, 0.0, deg2rad(4.41));
  REQUIRE(c0);
  CHECK(*c0 == doctest::Approx(cells_per_footprint(kGeom, deg2rad(4.41)) /
                               visible_satellites(kShell, 0.0)));
}

TEST_CASE("satellite capacity reference values") {
  CHECK(satellite_capacity(inputs(30e6, 0.52)) == doctest::Approx(592.8e6).epsilon(1e-12));
  CHECK(satellite_capacity(inputs(30e6, 0.18)) == doctest::Approx(205.2e6).epsilon(1e-12));
  CHECK(satellite_capacity(inputs(400e6, 0.47)) == doctest::Approx(7.144e9).epsilon(1e-12));
  CHECK(satellite_capacity(inputs(400e6, 0.50)) == doctest::Approx(7.6e9).epsilon(1e-12));
  CHECK_THROWS_AS(satellite_capacity(inputs(0.0, 0.5)), ConfigError);
}

TEST_CASE("capacity density") {
  const auto dl = inputs(30e6, 0.52), ul = inputs(30e6, 0.18);
  for (double d = 0; d <= 56.5; d += 0.5) {
    const auto f = capacity_density_forms(kShell, dl, deg2rad(4.41), deg2rad(d));
    REQUIRE(f);
    CHECK(std::abs(f->via_cells - f->via_footprint) / f->via_cells < 1e-12);
    const auto u = capacity_density(kShell, ul, deg2rad(4.41), deg2rad(d));
    CHECK(*u / f->via_cells == doctest::Approx(0.18 / 0.52).epsilon(1e-12));
  }
  const auto eq = capacity_density(kShell, dl, deg2rad(4.41), 0.0);
  CHECK(*eq == doctest::Approx(592.8e6 * 8.65 / 1.653e6).epsilon(0.01));
  CHECK(*eq == doctest::Approx(3.1e3).epsilon(0.03));
  CHECK_FALSE(capacity_density(kShell, dl, deg2rad(4.41), deg2rad(60)));
}

TEST_CASE("latitude sweep") {
  const auto dl = inputs(400e6, 0.47), ul = inputs(400e6, 0.5);
  const auto prof = latitude_sweep(kShell, dl, ul, deg2rad(1.76), deg2rad(0.5));
  REQUIRE(!prof.empty());
  CHECK(prof.front().latitude_rad == 0.0);
  CHECK(prof.back().latitude_rad == doctest::Approx(kShell.coverage_limit_rad()));
  CHECK(rad2deg(kShell.coverage_limit_rad()) == doctest::Approx(56.5).epsilon(0.5 / 56.5));
  CHECK(prof.back().n_visible == doctest::Approx(0.0));
  for (const auto& p : prof) {
    const auto mirror = capacity_at(kShell, dl, ul, deg2rad(1.76), -p.latitude_rad);
    CHECK(mirror.n_visible == doctest::Approx(p.n_visible).epsilon(1e-12));
  }
  const auto beyond = capacity_at(kShell, dl, ul, deg2rad(1.76), deg2rad(60));
  CHECK(beyond.n_visible == 0.0);
  CHECK(std::isnan(beyond.cells_per_satellite));
  CHECK_THROWS_AS(latitude_sweep(kShell, dl, ul, deg2rad(1.76), 0.0), ConfigError);
}

TEST_CASE("service edge and summary") {
  const auto edge = service_edge(kShell, 3.0);
  REQUIRE(edge);
  CHECK(visible_satellites(kShell, *edge) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(visible_satellites(kShell, *edge + 1e-4) < 3.0);
  CHECK_FALSE(service_edge(kShell, 100.0));

  const auto s = service_summary(kShell, inputs(30e6, 0.52), inputs(30e6, 0.18), deg2rad(4.41),
                                 deg2rad(0.5), 3.0);
  REQUIRE(s);
  CHECK(s->n_visible.min == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(s->cells_per_satellite.min > 19.0);
  CHECK(s->density_dl.max > s->density_dl.min);
}
