#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>
#include <numeric>

#include "ntn/errors.hpp"
#include "ntn/layout.hpp"

using namespace ntn;
using namespace ntn::layout;
using geometry::deg2rad;

namespace {

const geometry::SatGeometry kGeom{600.0, geometry::kEarthRadiusKm, deg2rad(35.0)};

BeamGrid s_grid(double elev_deg = 90.0) {
  return build_grid(link::BandSystem::s_band(), kGeom, deg2rad(elev_deg));
}

antenna::AperturePattern s_pattern() {
  return link::BandSystem::s_band().beam_pattern(link::Direction::Downlink);
}

double ground_km(const Vec3& a, const Vec3& b) {
  return geometry::kEarthRadiusKm * geometry::angle_between(a, b);
}

}  // namespace

TEST_CASE("lattice has 19 beams in three rings") {
  const auto g = s_grid();
  REQUIRE(g.beams.size() == 19);
  CHECK(std::count_if(g.beams.begin(), g.beams.end(), [](auto& b) { return b.ring == 0; }) == 1);
  CHECK(std::count_if(g.beams.begin(), g.beams.end(), [](auto& b) { return b.ring == 1; }) == 6);
  CHECK(std::count_if(g.beams.begin(), g.beams.end(), [](auto& b) { return b.ring == 2; }) == 12);

  // Adjacent pairs sit exactly one spacing apart in UV.
  int adjacent = 0;
  for (std::size_t i = 0; i < g.beams.size(); ++i) {
    for (std::size_t j = i + 1; j < g.beams.size(); ++j) {
      const double du = g.beams[i].uv_center.u - g.beams[j].uv_center.u;
      const double dv = g.beams[i].uv_center.v - g.beams[j].uv_center.v;
      const double d = std::hypot(du, dv);
      if (d < 1.5 * g.uv_spacing) {
        CHECK(std::abs(d - g.uv_spacing) < 1e-12);
        ++adjacent;
      }
    }
  }
  CHECK(adjacent == 42);
}

TEST_CASE("uv spacing") {
  CHECK(uv_spacing_for(deg2rad(1.76)) == doctest::Approx(2 * std::sin(deg2rad(0.44))));
  CHECK(uv_spacing_for(deg2rad(1.76)) == doctest::Approx(0.01536).epsilon(1e-3));
}

TEST_CASE("nadir grid geometry") {
  const auto g = s_grid();
  const auto& c = g.beams[0];
  CHECK(std::abs(c.ground_center.latitude) < 1e-12);
  CHECK(std::abs(c.ground_center.longitude) < 1e-12);

  // Quadratic ray-sphere oracle for a ring-1 beam: its direction cosine
  // off nadir is exactly the lattice spacing.
  const double R = geometry::kEarthRadiusKm, r = R + 600.0, th = std::asin(g.uv_spacing);
  const double t = r * std::cos(th) - std::sqrt(R * R - r * r * std::sin(th) * std::sin(th));
  const double sep = R * std::atan2(t * std::sin(th), r - t * std::cos(th));
  for (int i = 1; i <= 6; ++i)
    CHECK(ground_km(c.ground_ecef, g.beams[i].ground_ecef) == doctest::Approx(sep).epsilon(1e-9));

  // Inradius of the central Voronoi cell: nearest edge is half the spacing.
  const auto poly = cell_polygon(g, 0);
  REQUIRE(poly.size() == 6);
  double inradius = 1e9;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec3 mid = (poly[i] + poly[(i + 1) % poly.size()]).normalized();
    inradius = std::min(inradius, ground_km(c.ground_ecef, mid));
  }
  CHECK(inradius == doctest::Approx(sep / 2).epsilon(1e-3));
  CHECK(std::abs(inradius - 11.6) < 0.1);
  CHECK(std::abs(sep - 23.1) < 0.2);
}

TEST_CASE("first-ring cells are congruent at nadir") {
  const auto g = s_grid();
  const double a1 = cell_area_km2(g, 1);
  for (int i = 2; i <= 6; ++i) CHECK(std::abs(cell_area_km2(g, i) / a1 - 1.0) < 1e-6);
  // Flat hexagon with the same inradius, as a sanity scale.
  const double inr = ground_km(g.beams[0].ground_ecef, g.beams[1].ground_ecef) / 2;
  CHECK(cell_area_km2(g, 0) == doctest::Approx(2 * std::sqrt(3.0) * inr * inr).epsilon(0.01));
}

TEST_CASE("tilted grid elongates cells") {
  const auto g = s_grid(60.0);
  const auto es = geometry::elevation_and_slant(g.sat_position, g.beams[0].ground_center);
  CHECK(geometry::rad2deg(es.elevation_rad) == doctest::Approx(60.0).epsilon(1e-9));
  double lo = 1e18, hi = 0;
  for (int i = 0; i < 19; ++i) {
    const double a = cell_area_km2(g, i);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  CHECK(hi / lo > 1.2);
}

TEST_CASE("grid errors") {
  const auto band = link::BandSystem::s_band();
  CHECK_THROWS_AS(build_grid(band, kGeom, deg2rad(30.0)), ConfigError);
  CHECK_THROWS_AS(build_grid(band, kGeom, deg2rad(91.0)), ConfigError);
  // A wide beam tilted low sends the outer ring past the limb.
  auto wide = band;
  wide.sat_hpbw_rad = deg2rad(40.0);
  CHECK_THROWS_AS(build_grid(wide, {600.0, geometry::kEarthRadiusKm, 0.0}, deg2rad(5.0)),
                  ConfigError);
}

TEST_CASE("beam gains") {
  const auto g = s_grid();
  const auto p = s_pattern();
  for (int i = 0; i < 19; ++i)
    CHECK(beam_gain_at(g, i, g.beams[i].ground_center, p) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(beam_gain_at(g, 0, g.beams[1].ground_center, p) ==
        doctest::Approx(antenna::pattern_gain(p, std::asin(g.uv_spacing))).epsilon(1e-9));
  CHECK(beam_gain_at(g, 0, g.beams[1].ground_center, p) == doctest::Approx(0.5).epsilon(1e-3));

  // Directions equidistant in angle from two boresights see equal gains.
  const Vec3 b0 = g.beams[0].boresight_direction, b1 = g.beams[1].boresight_direction;
  const Vec3 m = b0 + b1, n = b0.cross(b1).normalized();
  for (double t : {-0.02, -0.005, 0.0, 0.01}) {
    const auto hit = geometry::ray_sphere_intersection(g.sat_position, (m.normalized() + t * n).normalized());
    REQUIRE(hit);
    const auto gp = geometry::from_ecef(*hit);
    CHECK(std::abs(beam_gain_at(g, 0, gp, p) - beam_gain_at(g, 1, gp, p)) < 1e-9);
  }

  const geometry::GroundPoint far{deg2rad(60.0), 0.0};
  CHECK_THROWS_AS(beam_gain_at(g, 0, far, p), DomainError);
}

TEST_CASE("user drops") {
  const auto g = s_grid();
  const auto p = s_pattern();
  CHECK(drop_users(g, 0.0, 1, p).users.empty());
  CHECK_THROWS_AS(drop_users(g, -1.0, 1, p), ConfigError);

  const auto a = drop_users(g, 3.0, 42, p);
  const auto b = drop_users(g, 3.0, 42, p);
  REQUIRE(a.users.size() == b.users.size());
  for (std::size_t i = 0; i < a.users.size(); ++i) {
    CHECK(a.users[i].ecef == b.users[i].ecef);
    CHECK(a.users[i].serving_beam == b.users[i].serving_beam);
  }

  for (const auto& u : a.users) {
    const auto gains = beam_gains(g, u.ecef, p);
    for (double x : gains) CHECK(gains[u.serving_beam] >= x);
    CHECK(nearest_center(g, u.ecef) == u.drop_cell);
  }
}

// Beams half an HPBW apart overlap at -3 dB, so neighbours carry a large
// share of the summed gain even at a beam centre.
TEST_CASE("gain sum at the central beam centre") {
  const auto g = s_grid();
  const auto p = s_pattern();
  auto gains = beam_gains(g, g.beams[0].ground_ecef, p);
  double oracle = 0.0;
  for (const auto& b : g.beams)
    oracle += antenna::pattern_gain(p, std::asin(std::hypot(b.uv_center.u, b.uv_center.v)));
  const double total = std::accumulate(gains.begin(), gains.end(), 0.0);
  CHECK(total == doctest::Approx(oracle).epsilon(1e-9));
  std::sort(gains.rbegin(), gains.rend());
  const double top3 = (gains[0] + gains[1] + gains[2]) / total;
  CHECK(top3 == doctest::Approx(2.0 / oracle).epsilon(1e-3));
  CHECK(top3 < 0.6);

  const auto d = drop_users(g, 20.0, 5, p);
  for (const auto& u : d.users) {
    const auto gu = beam_gains(g, u.ecef, p);
    const double t = std::accumulate(gu.begin(), gu.end(), 0.0);
    CHECK(std::isfinite(t));
    CHECK(t < 19.0);
  }
}

TEST_CASE("per-cell counts are Poisson") {
  const auto g = s_grid();
  const auto p = s_pattern();
  const double mean = 10.0;
  const int drops = 400;
  std::vector<int> counts;
  long total = 0;
  for (int d = 0; d < drops; ++d) {
    std::vector<int> per(19, 0);
    for (const auto& u : drop_users(g, mean, 1000 + d, p).users) ++per[u.drop_cell];
    counts.insert(counts.end(), per.begin(), per.end());
    total += std::accumulate(per.begin(), per.end(), 0L);
  }
  CHECK(static_cast<double>(total) / drops == doctest::Approx(190.0).epsilon(0.03));

  // Bins: <=4, 5 .. 15, >=16.
  const boost::math::poisson_distribution<> pois(mean);
  std::vector<double> observed(13, 0.0), expected(13, 0.0);
  const auto bin = [](int k) { return std::clamp(k - 4, 0, 12); };
  for (int k : counts) observed[bin(k)] += 1.0;
  const double n = static_cast<double>(counts.size());
  expected[0] = n * boost::math::cdf(pois, 4);
  for (int k = 5; k <= 15; ++k) expected[bin(k)] = n * boost::math::pdf(pois, k);
  expected[12] = n * boost::math::cdf(boost::math::complement(pois, 15));
  double chi2 = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i)
    chi2 += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  const boost::math::chi_squared_distribution<> dist(observed.size() - 1);
  CHECK(chi2 < boost::math::quantile(dist, 0.99));
}

TEST_CASE("gain map") {
  const auto g = s_grid();
  const auto m = gain_map(g, s_pattern(), 21);
  CHECK(m.size() == 21 * 21);
  double best = -1e9;
  for (const auto& s : m) {
    CHECK(s.normalized_gain_db <= 1e-12);
    best = std::max(best, s.normalized_gain_db);
  }
  CHECK(best == doctest::Approx(0.0).epsilon(1e-6));
  CHECK_THROWS_AS(gain_map(g, s_pattern(), 1), ConfigError);
}
