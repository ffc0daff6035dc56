#include "ntn/antenna.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ntn/errors.hpp"

namespace ntn::antenna {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesLimit = 20.0;

// Power series sum_k (-1)^k (x/2)^(2k+1) / (k! (k+1)!), in long double to
// absorb cancellation up to kSeriesLimit.
double j1_series(double x) {
  const long double half = 0.5L * x;
  const long double q = -half * half;
  long double term = half;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * (k + 1));
    sum += term;
    if (std::fabs(term) < 1e-21L * std::fabs(sum) && k > 2) break;
  }
  return static_cast<double>(sum);
}

// Hankel asymptotic expansion, summed until terms stop shrinking.
double j1_asymptotic(double x) {
  constexpr double mu = 4.0;  // 4 nu^2, nu = 1
  const double z = 8.0 * x;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * z);
    if (std::fabs(term) >= last) break;
    last = std::fabs(term);
    // Terms alternate between Q (odd k) and P (even k) with sign pattern
    // +, -, -, +, +, -, ... handled by the k mod 4 switch.
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (std::fabs(term) < 1e-18) break;
  }
  const double chi = x - 0.75 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// Normalised pattern [2 J1(x)/x]^2 with its x -> 0 limit.
double normalized(double x) {
  if (x < 1e-8) return 1.0 - x * x / 4.0;
  const double r = 2.0 * bessel_j1(x) / x;
  return r * r;
}

template <typename F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double bessel_j1(double x) {
  const double ax = std::fabs(x);
  const double v = ax <= kSeriesLimit ? j1_series(ax) : j1_asymptotic(ax);
  return x < 0.0 ? -v : v;
}

double j1_first_zero() {
  static const double zero = bisect([](double x) { return bessel_j1(x); },
                                    3.0, 4.5);
  return zero;
}

double half_power_argument() {
  static const double x = bisect(
      [](double v) { return normalized(v) - 0.5; }, 1e-3, j1_first_zero());
  return x;
}

void AperturePattern::validate() const {
  if (!(aperture_radius_m > 0.0))
    throw ConfigError("aperture radius must be positive");
  if (!(carrier_freq_hz > 0.0))
    throw ConfigError("carrier frequency must be positive");
}

double AperturePattern::electrical_radius() const {
  return 2.0 * kPi / wavelength_m() * aperture_radius_m;
}

double pattern_gain(const AperturePattern& p, double theta) {
  if (!(theta >= 0.0 && theta <= kPi / 2))
    throw DomainError("off-boresight angle must lie in [0, pi/2], got " +
                      std::to_string(theta));
  if (theta == 0.0) return 1.0;
  return normalized(p.electrical_radius() * std::sin(theta));
}

double gain_dbi(const AperturePattern& p, double theta) {
  const double g = pattern_gain(p, theta);
  const double peak = p.peak_gain_dbi.value_or(0.0);
  if (g <= 0.0) return -std::numeric_limits<double>::infinity();
  return peak + 10.0 * std::log10(g);
}

std::optional<double> first_null_angle(const AperturePattern& p) {
  p.validate();
  const double s = j1_first_zero() / p.electrical_radius();
  if (s > 1.0) return std::nullopt;
  return std::asin(s);
}

double solve_hpbw(const AperturePattern& p) {
  p.validate();
  const double ka = p.electrical_radius();
  if (half_power_argument() / ka >= 1.0)
    throw ConfigError("aperture too small: no -3 dB point in the main lobe");
  // Bisection in angle on (0, first null), where the main lobe is monotone.
  const double upper = first_null_angle(p).value_or(kPi / 2);
  const double half = bisect(
      [&](double th) { return pattern_gain(p, th) - 0.5; }, 0.0, upper);
  return 2.0 * half;
}

double aperture_for_hpbw(double hpbw_rad, double carrier_freq_hz) {
  if (!(hpbw_rad > 0.0 && hpbw_rad < kPi))
    throw ConfigError("HPBW must lie in (0, pi)");
  if (!(carrier_freq_hz > 0.0))
    throw ConfigError("carrier frequency must be positive");
  const double k = 2.0 * kPi * carrier_freq_hz / kSpeedOfLight;
  return half_power_argument() / (k * std::sin(hpbw_rad / 2.0));
}

double ideal_aperture_gain_db(const AperturePattern& p) {
  return 20.0 * std::log10(p.electrical_radius());
}

AperturePattern VsatAntenna::tx_pattern() const {
  return {aperture_radius_m, tx_freq_hz, tx_gain_dbi};
}

AperturePattern VsatAntenna::rx_pattern() const {
  return {aperture_radius_m, rx_freq_hz, rx_gain_dbi};
}

std::pair<double, double> vsat_gains(const VsatAntenna& vsat) {
  return {vsat.tx_gain_dbi, vsat.rx_gain_dbi};
}

}  // namespace ntn::antenna
