#pragma once

#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>

namespace qcasim::units {

// CODATA 2018
inline constexpr double kHbar = 1.054571817e-34;        // J s
inline constexpr double kSpeedOfLight = 299792458.0;    // m/s
inline constexpr double kPlanckTime = 5.391247e-44;     // s

class UnitsError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Conversion factors from event counts to SI: the topon (minimum distance
/// between gates), the chronon (minimum time between gates) and hbar.
struct PhysicalUnits {
  double topon = 1.0;    // m
  double chronon = 1.0;  // s
  double hbar = 1.0;     // J s

  /// Throws UnitsError unless all three factors are finite and positive.
  void validate() const;

  static PhysicalUnits natural() { return {1.0, 1.0, 1.0}; }
  /// SI units with the given chronon; the topon follows from c.
  static PhysicalUnits si(double chronon = kPlanckTime, double c = kSpeedOfLight,
                          double hbar = kHbar);
};

/// Informational mass: the left/right coupling frequency and its Compton
/// wavelength. A zero frequency is the massless value (infinite wavelength).
struct InformationalMass {
  double omega = 0.0;  // 1/s

  bool massless() const { return omega == 0.0; }
  double compton_lambda(const PhysicalUnits& u) const;
};

double causal_speed(const PhysicalUnits& u);
double mass_from_omega(double omega, const PhysicalUnits& u);
double omega_from_compton(double lambda, const PhysicalUnits& u);
double compton_from_omega(double omega, const PhysicalUnits& u);
double omega_from_mass(double mass, const PhysicalUnits& u);

/// Serialized form of a Compton wavelength: the decimal value, or the string
/// "massless" for an infinite wavelength.
std::string format_compton(double lambda);

/// Constants-file overrides. Recognized keys: hbar, c, chronon. Lines are
/// `key = value`; `#` starts a comment. Unknown keys are rejected.
struct Constants {
  double hbar = kHbar;
  double c = kSpeedOfLight;
  double chronon = kPlanckTime;

  PhysicalUnits units() const { return PhysicalUnits::si(chronon, c, hbar); }
};

Constants parse_constants(const std::string& text);
Constants load_constants(const std::filesystem::path& path);
/// Defaults, overridden by the file named in QCASIM_CONSTANTS when set.
Constants constants_from_environment();

}  // namespace qcasim::units
