#include "ntn/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ntn/errors.hpp"

namespace ntn::scenario {

namespace {

using link::Band;
using link::Direction;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': not a number: '" + text + "'");
  }
  if (used != text.size())
    throw ConfigError("key '" + key + "': trailing characters in '" + text + "'");
  return v;
}

long to_long(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != static_cast<double>(static_cast<long>(v)))
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  return static_cast<long>(v);
}

struct Field {
  std::function<void(Scenario&, const std::string&)> set;
  std::function<std::string(const Scenario&)> get;
};

using FieldTable = std::vector<std::pair<std::string, Field>>;  // "section.key"

// Binds a double member, optionally stored in radians but written in degrees.
template <typename Access>
Field real(Access access, bool degrees = false) {
  return {[=](Scenario& s, const std::string& t) {
            const double v = to_double("", t);
            access(s) = degrees ? geometry::deg2rad(v) : v;
          },
          [=](const Scenario& s) {
            const double v = access(const_cast<Scenario&>(s));
            return fmt(degrees ? geometry::rad2deg(v) : v);
          }};
}

template <typename Access>
Field integer(Access access) {
  return {[=](Scenario& s, const std::string& t) {
            access(s) = static_cast<std::remove_reference_t<decltype(access(s))>>(
                to_long("", t));
          },
          [=](const Scenario& s) {
            return std::to_string(access(const_cast<Scenario&>(s)));
          }};
}

const FieldTable& fields() {
  static const FieldTable table = [] {
    FieldTable t;
    // [band]
    t.push_back({"band.name",
                 {[](Scenario& s, const std::string& v) {
                    if (v == "S") s.snapshot.band.name = Band::S;
                    else if (v == "Ka") s.snapshot.band.name = Band::Ka;
                    else throw ConfigError("band.name must be S or Ka");
                  },
                  [](const Scenario& s) { return link::to_string(s.snapshot.band.name); }}});
    t.push_back({"band.dl_freq_hz", real([](Scenario& s) -> double& { return s.snapshot.band.dl_freq_hz; })});
    t.push_back({"band.ul_freq_hz", real([](Scenario& s) -> double& { return s.snapshot.band.ul_freq_hz; })});
    t.push_back({"band.bandwidth_hz", real([](Scenario& s) -> double& { return s.snapshot.band.bandwidth_hz; })});
    t.push_back({"band.subcarrier_spacing_hz", real([](Scenario& s) -> double& { return s.snapshot.band.subcarrier_spacing_hz; })});
    t.push_back({"band.eirp_density_dbw_per_mhz", real([](Scenario& s) -> double& { return s.snapshot.band.sat_eirp_density_dbw_per_mhz; })});
    t.push_back({"band.gt_dbk", real([](Scenario& s) -> double& { return s.snapshot.band.sat_gt_dbk; })});
    t.push_back({"band.hpbw_deg", real([](Scenario& s) -> double& { return s.snapshot.band.sat_hpbw_rad; }, true)});
    t.push_back({"band.atmospheric_loss_db", real([](Scenario& s) -> double& { return s.snapshot.band.atmospheric_loss_db; })});
    // [terminal]
    t.push_back({"terminal.kind",
                 {[](Scenario& s, const std::string& v) {
                    auto& term = s.snapshot.terminal;
                    if (v == "handheld") {
                      term.kind = link::TerminalKind::Handheld;
                      term.rx_pattern = antenna::IsotropicPattern{};
                    } else if (v == "vsat") {
                      term.kind = link::TerminalKind::Vsat;
                      if (!std::holds_alternative<antenna::VsatAntenna>(term.rx_pattern))
                        term.rx_pattern = antenna::VsatAntenna{};
                    } else {
                      throw ConfigError("terminal.kind must be handheld or vsat");
                    }
                  },
                  [](const Scenario& s) { return link::to_string(s.snapshot.terminal.kind); }}});
    t.push_back({"terminal.tx_power_dbm", real([](Scenario& s) -> double& { return s.snapshot.terminal.tx_power_dbm; })});
    t.push_back({"terminal.tx_gain_dbi", real([](Scenario& s) -> double& { return s.snapshot.terminal.tx_gain_dbi; })});
    t.push_back({"terminal.rx_gain_dbi", real([](Scenario& s) -> double& { return s.snapshot.terminal.rx_gain_dbi; })});
    t.push_back({"terminal.gt_dbk", real([](Scenario& s) -> double& { return s.snapshot.terminal.gt_dbk; })});
    t.push_back({"terminal.excess_loss_db", real([](Scenario& s) -> double& { return s.snapshot.terminal.excess_loss_db; })});
    t.push_back({"terminal.aperture_radius_m",
                 {[](Scenario& s, const std::string& v) {
                    auto& term = s.snapshot.terminal;
                    if (!std::holds_alternative<antenna::VsatAntenna>(term.rx_pattern))
                      term.rx_pattern = antenna::VsatAntenna{};
                    std::get<antenna::VsatAntenna>(term.rx_pattern).aperture_radius_m =
                        to_double("terminal.aperture_radius_m", v);
                  },
                  [](const Scenario& s) {
                    const auto* v = std::get_if<antenna::VsatAntenna>(&s.snapshot.terminal.rx_pattern);
                    return fmt(v ? v->aperture_radius_m : 0.0);
                  }}});
    // [shell]
    t.push_back({"shell.planes", integer([](Scenario& s) -> int& { return s.shell.planes; })});
    t.push_back({"shell.sats_per_plane", integer([](Scenario& s) -> int& { return s.shell.sats_per_plane; })});
    t.push_back({"shell.altitude_km", real([](Scenario& s) -> double& { return s.shell.altitude_km; })});
    t.push_back({"shell.inclination_deg", real([](Scenario& s) -> double& { return s.shell.inclination_rad; }, true)});
    t.push_back({"shell.min_elevation_deg", real([](Scenario& s) -> double& { return s.shell.min_elevation_rad; }, true)});
    t.push_back({"shell.phasing", integer([](Scenario& s) -> int& { return s.shell.phasing; })});
    // [snapshot]
    t.push_back({"snapshot.center_elevation_deg", real([](Scenario& s) -> double& { return s.snapshot.center_elevation_rad; }, true)});
    t.push_back({"snapshot.densities",
                 {[](Scenario& s, const std::string& v) { s.snapshot.densities = parse_number_list(v); },
                  [](const Scenario& s) {
                    std::string out;
                    for (double d : s.snapshot.densities) out += (out.empty() ? "" : ",") + fmt(d);
                    return out;
                  }}});
    t.push_back({"snapshot.drops", integer([](Scenario& s) -> int& { return s.snapshot.drops; })});
    t.push_back({"snapshot.ul_target_snr_db", real([](Scenario& s) -> double& { return s.snapshot.ul_target_snr_db; })});
    t.push_back({"snapshot.shadowing_sigma_db", real([](Scenario& s) -> double& { return s.snapshot.shadowing_sigma_db; })});
    t.push_back({"snapshot.stats_cells", integer([](Scenario& s) -> int& { return s.snapshot.stats_cells; })});
    t.push_back({"snapshot.seed",
                 {[](Scenario& s, const std::string& v) {
                    try {
                      std::size_t used = 0;
                      // stoull accepts a sign and wraps negatives.
                      if (v.empty() || !std::isdigit(static_cast<unsigned char>(v[0])))
                        throw std::invalid_argument(v);
                      s.snapshot.seed = std::stoull(v, &used);
                      if (used != v.size()) throw std::invalid_argument(v);
                    } catch (const std::exception&) {
                      throw ConfigError("snapshot.seed must be an unsigned integer");
                    }
                  },
                  [](const Scenario& s) { return std::to_string(s.snapshot.seed); }}});
    // [se]
    t.push_back({"se.attenuation_factor", real([](Scenario& s) -> double& { return s.snapshot.se_map.attenuation_factor; })});
    t.push_back({"se.max_se_bps_hz", real([](Scenario& s) -> double& { return s.snapshot.se_map.max_se_bps_hz; })});
    t.push_back({"se.min_sinr_db", real([](Scenario& s) -> double& { return s.snapshot.se_map.min_sinr_db; })});
    // [capacity]
    t.push_back({"capacity.n_beams", integer([](Scenario& s) -> int& { return s.capacity.n_beams; })});
    t.push_back({"capacity.polarizations", integer([](Scenario& s) -> int& { return s.capacity.polarizations; })});
    t.push_back({"capacity.s_bandwidth_hz", real([](Scenario& s) -> double& { return s.capacity.s_bandwidth_hz; })});
    t.push_back({"capacity.s_hpbw_deg", real([](Scenario& s) -> double& { return s.capacity.s_hpbw_rad; }, true)});
    t.push_back({"capacity.ka_bandwidth_hz", real([](Scenario& s) -> double& { return s.capacity.ka_bandwidth_hz; })});
    t.push_back({"capacity.ka_hpbw_deg", real([](Scenario& s) -> double& { return s.capacity.ka_hpbw_rad; }, true)});
    t.push_back({"capacity.se_dl_s", real([](Scenario& s) -> double& { return s.capacity.se_dl_s; })});
    t.push_back({"capacity.se_ul_s", real([](Scenario& s) -> double& { return s.capacity.se_ul_s; })});
    t.push_back({"capacity.se_dl_ka", real([](Scenario& s) -> double& { return s.capacity.se_dl_ka; })});
    t.push_back({"capacity.se_ul_ka", real([](Scenario& s) -> double& { return s.capacity.se_ul_ka; })});
    t.push_back({"capacity.min_visible_for_service", real([](Scenario& s) -> double& { return s.capacity.min_visible_for_service; })});
    t.push_back({"capacity.step_deg", real([](Scenario& s) -> double& { return s.capacity.step_rad; }, true)});
    return t;
  }();
  return table;
}

const Field* find_field(const std::string& dotted) {
  for (const auto& [name, f] : fields())
    if (name == dotted) return &f;
  return nullptr;
}

}  // namespace

constellation::CapacityInputs CapacitySettings::inputs(Band band, Direction dir) const {
  constellation::CapacityInputs in;
  in.n_beams = n_beams;
  in.polarizations = polarizations;
  const bool dl = dir == Direction::Downlink;
  if (band == Band::S) {
    in.bandwidth_hz = s_bandwidth_hz;
    in.mean_se_bps_hz = dl ? se_dl_s : se_ul_s;
  } else {
    in.bandwidth_hz = ka_bandwidth_hz;
    in.mean_se_bps_hz = dl ? se_dl_ka : se_ul_ka;
  }
  return in;
}

double CapacitySettings::hpbw(Band band) const {
  return band == Band::S ? s_hpbw_rad : ka_hpbw_rad;
}

void Scenario::finalize() {
  snapshot.geom.altitude_km = shell.altitude_km;
  snapshot.geom.min_elevation_rad = shell.min_elevation_rad;
  auto& term = snapshot.terminal;
  if (auto* v = std::get_if<antenna::VsatAntenna>(&term.rx_pattern)) {
    v->tx_freq_hz = snapshot.band.ul_freq_hz;
    v->rx_freq_hz = snapshot.band.dl_freq_hz;
    v->tx_gain_dbi = term.tx_gain_dbi;
    v->rx_gain_dbi = term.rx_gain_dbi;
    if (!(v->aperture_radius_m > 0.0))
      throw ConfigError("terminal.aperture_radius_m must be positive");
  }
  snapshot.validate();
  shell.validate();
  for (auto band : {Band::S, Band::Ka}) {
    for (auto dir : {Direction::Downlink, Direction::Uplink}) capacity.inputs(band, dir).validate();
    if (!(capacity.hpbw(band) > 0.0)) throw ConfigError("capacity HPBW must be positive");
  }
  if (!(capacity.min_visible_for_service > 0.0))
    throw ConfigError("capacity.min_visible_for_service must be positive");
  if (!(capacity.step_rad > 0.0)) throw ConfigError("capacity.step_deg must be positive");
}

std::vector<std::string> preset_names() { return {"s-handheld", "ka-vsat", "kuiper"}; }

Scenario preset(const std::string& name) {
  Scenario s;
  s.base = name;
  if (name == "s-handheld" || name == "kuiper") {
    s.snapshot.band = link::BandSystem::s_band();
    s.snapshot.terminal = link::Terminal::handheld();
  } else if (name == "ka-vsat") {
    s.snapshot.band = link::BandSystem::ka_band();
    s.snapshot.terminal = link::Terminal::vsat();
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  s.shell = constellation::ConstellationShell::kuiper();
  s.finalize();
  return s;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  const auto last = text.find_last_not_of(" \t");
  if (last != std::string::npos && text[last] == ',')
    throw ConfigError("empty entry in list '" + text + "'");
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty entry in list '" + text + "'");
    const double v = to_double("list", item.substr(b, e - b + 1));
    if (!(v > 0.0)) throw ConfigError("list entries must be positive: '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

Scenario parse(const std::string& text) {
  // Boost's INI reader only knows ';' comments; drop '#' lines as well.
  std::stringstream cleaned;
  {
    std::stringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      const auto b = line.find_first_not_of(" \t");
      if (b != std::string::npos && line[b] == '#') continue;
      cleaned << line << '\n';
    }
  }
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(cleaned, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("scenario syntax error: ") + e.what());
  }

  std::string base;
  if (auto sc = tree.get_child_optional("scenario")) {
    for (const auto& [key, node] : *sc) {
      if (key != "base") throw ConfigError("unknown key 'scenario." + key + "'");
      base = node.data();
    }
  }
  if (base.empty()) {
    const auto name = tree.get_optional<std::string>("band.name");
    base = (name && *name == "Ka") ? "ka-vsat" : "s-handheld";
  }
  Scenario s = preset(base);

  for (const auto& [section, node] : tree) {
    if (section == "scenario") continue;
    if (node.empty() && !node.data().empty())
      throw ConfigError("key '" + section + "' must be inside a section");
    const bool known = std::any_of(fields().begin(), fields().end(), [&](const auto& f) {
      return f.first.compare(0, section.size() + 1, section + ".") == 0;
    });
    if (!known) throw ConfigError("unknown section '" + section + "'");
    for (const auto& [key, value] : node) {
      const std::string dotted = section + "." + key;
      const Field* f = find_field(dotted);
      if (!f) throw ConfigError("unknown key '" + dotted + "'");
      try {
        f->set(s, value.data());
      } catch (const ConfigError& e) {
        throw ConfigError(dotted + ": " + e.what());
      }
    }
  }
  s.finalize();
  return s;
}

Scenario load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string to_ini(const Scenario& s) {
  std::ostringstream os;
  os << "[scenario]\nbase = " << s.base << "\n";
  std::string current;
  const bool vsat = s.snapshot.terminal.kind == link::TerminalKind::Vsat;
  for (const auto& [name, f] : fields()) {
    if (name == "terminal.aperture_radius_m" && !vsat) continue;
    const auto dot = name.find('.');
    const std::string section = name.substr(0, dot);
    if (section != current) {
      os << "\n[" << section << "]\n";
      current = section;
    }
    os << name.substr(dot + 1) << " = " << f.get(s) << "\n";
  }
  return os.str();
}

}  // namespace ntn::scenario
