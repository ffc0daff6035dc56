#pragma once

// Circular-aperture reflector pattern g(theta) = [2 J1(k a sin theta) /
// (k a sin theta)]^2, normalised to 1 on boresight.

#include <optional>
#include <utility>

namespace ntn::antenna {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Bessel function of the first kind, order one.
double bessel_j1(double x);

/// First positive zero of J1 (3.8317...).
double j1_first_zero();

/// Dimensionless argument x in (0, j1_first_zero()) where the normalised
/// pattern [2 J1(x)/x]^2 drops to one half.
double half_power_argument();

struct AperturePattern {
  double aperture_radius_m = 1.0;
  double carrier_freq_hz = 2e9;
  std::optional<double> peak_gain_dbi;  // pattern is 0 dBi-normalised if empty

  void validate() const;
  double wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }
  /// k * a, the electrical size of the aperture.
  double electrical_radius() const;
};

struct IsotropicPattern {
  double gain_dbi = 0.0;
};

/// Normalised linear gain in [0, 1] at off-boresight angle theta.
double pattern_gain(const AperturePattern& p, double theta);

/// Gain in dBi: configured peak gain (0 if absent) plus the normalised
/// roll-off. Returns -inf exactly on a null.
double gain_dbi(const AperturePattern& p, double theta);

/// Off-boresight angle of the first pattern null, or nullopt when the
/// aperture is too small for the null to exist before 90 deg.
std::optional<double> first_null_angle(const AperturePattern& p);

/// Full half-power beamwidth (rad). Throws ConfigError if the -3 dB point
/// does not lie inside the visible main lobe.
double solve_hpbw(const AperturePattern& p);

/// Aperture radius (m) giving the requested HPBW at the carrier frequency.
double aperture_for_hpbw(double hpbw_rad, double carrier_freq_hz);

/// Ideal uniform-illumination area gain 20 log10(2 pi a / lambda).
double ideal_aperture_gain_db(const AperturePattern& p);

/// Dish terminal: one aperture, separate transmit and receive carriers with
/// configured (measured) peak gains.
struct VsatAntenna {
  double aperture_radius_m = 0.30;
  double tx_freq_hz = 30e9;
  double rx_freq_hz = 20e9;
  double tx_gain_dbi = 43.2;
  double rx_gain_dbi = 39.7;

  AperturePattern tx_pattern() const;
  AperturePattern rx_pattern() const;
};

/// {tx_gain_dbi, rx_gain_dbi} boresight gains.
std::pair<double, double> vsat_gains(const VsatAntenna& vsat);

}  // namespace ntn::antenna
