#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "ntn/errors.hpp"
#include "ntn/scenario.hpp"

using namespace ntn;
using namespace ntn::scenario;

namespace {

std::string preset_file(const std::string& name) {
  return std::string(NTN_PRESET_DIR) + "/" + name + ".ini";
}

}  // namespace

TEST_CASE("shipped preset files equal the built-ins") {
  for (const auto& name : preset_names()) {
    const auto file = load(preset_file(name));
    CHECK(to_ini(file) == to_ini(preset(name)));
  }
}

TEST_CASE("to_ini round trip") {
  for (const auto& name : preset_names()) {
    const auto s = preset(name);
    CHECK(to_ini(parse(to_ini(s))) == to_ini(s));
  }
  auto s = preset("ka-vsat");
  s.snapshot.drops = 17;
  s.snapshot.seed = 18446744073709551615ULL;
  s.snapshot.densities = {0.3, 7.5};
  s.capacity.se_dl_ka = 0.123456789;
  const auto back = parse(to_ini(s));
  CHECK(back.snapshot.drops == 17);
  CHECK(back.snapshot.seed == 18446744073709551615ULL);
  CHECK(back.snapshot.densities == std::vector<double>{0.3, 7.5});
  CHECK(back.capacity.se_dl_ka == 0.123456789);
}

TEST_CASE("missing keys come from the base preset") {
  const auto s = parse("[scenario]\nbase = ka-vsat\n[snapshot]\ndrops = 5\n");
  CHECK(s.snapshot.drops == 5);
  CHECK(s.snapshot.band.name == link::Band::Ka);
  CHECK(s.snapshot.terminal.kind == link::TerminalKind::Vsat);

  // Without a base the band name picks it.
  CHECK(parse("[band]\nname = Ka\n").snapshot.terminal.kind == link::TerminalKind::Vsat);
  CHECK(parse("").snapshot.band.name == link::Band::S);
  CHECK(parse("# comment\n; other\n[band]\n").snapshot.band.name == link::Band::S);
}

TEST_CASE("shell settings reach the snapshot geometry") {
  const auto s = parse("[shell]\naltitude_km = 550\nmin_elevation_deg = 40\n");
  CHECK(s.shell.altitude_km == 550.0);
  CHECK(s.snapshot.geom.altitude_km == 550.0);
  CHECK(s.snapshot.geom.min_elevation_rad == doctest::Approx(geometry::deg2rad(40.0)));
}

TEST_CASE("invalid scenarios are rejected") {
  CHECK_THROWS_AS(parse("[band]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[bogus]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("stray = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[scenario]\nbase = nowhere\n"), ConfigError);
  CHECK_THROWS_AS(parse("[scenario]\nother = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[band]\nname = X\n"), ConfigError);
  CHECK_THROWS_AS(parse("[terminal]\nkind = phone\n"), ConfigError);
  CHECK_THROWS_AS(parse("[shell]\naltitude_km = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("[shell]\naltitude_km = 600km\n"), ConfigError);
  CHECK_THROWS_AS(parse("[shell]\nplanes = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[shell]\naltitude_km = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[snapshot]\ndrops = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[snapshot]\nseed = -3\n"), ConfigError);
  CHECK_THROWS_AS(parse("[snapshot]\nseed = +3\n"), ConfigError);
  CHECK_THROWS_AS(parse("[snapshot]\ndensities = 1,,2\n"), ConfigError);
  CHECK_THROWS_AS(parse("[capacity]\nstep_deg = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[band\n"), ConfigError);
  CHECK_THROWS_AS(load("/nonexistent/scenario.ini"), ConfigError);
  CHECK_THROWS_AS(preset("nowhere"), ConfigError);
}

TEST_CASE("number lists") {
  CHECK(parse_number_list("0.1, 0.2,10") == std::vector<double>{0.1, 0.2, 10.0});
  CHECK(parse_number_list("5") == std::vector<double>{5.0});
  CHECK_THROWS_AS(parse_number_list(""), ConfigError);
  CHECK_THROWS_AS(parse_number_list("1,"), ConfigError);
  CHECK_THROWS_AS(parse_number_list("1,-2"), ConfigError);
  CHECK_THROWS_AS(parse_number_list("1,0"), ConfigError);
  CHECK_THROWS_AS(parse_number_list("1,x"), ConfigError);
}

TEST_CASE("capacity settings map to per-band inputs") {
  const auto s = preset("kuiper");
  const auto dl = s.capacity.inputs(link::Band::S, link::Direction::Downlink);
  CHECK(dl.bandwidth_hz == 30e6);
  CHECK(dl.mean_se_bps_hz == 0.52);
  CHECK(dl.n_beams == 19);
  CHECK(dl.polarizations == 2);
  CHECK(s.capacity.inputs(link::Band::Ka, link::Direction::Uplink).mean_se_bps_hz == 0.5);
  CHECK(s.capacity.hpbw(link::Band::Ka) == doctest::Approx(geometry::deg2rad(1.76)));
}
