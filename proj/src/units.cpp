#include "qcasim/units.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qcasim/descriptor.hpp"

namespace qcasim::units {

void PhysicalUnits::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(topon)) throw UnitsError("topon must be finite and positive");
  if (!positive(chronon)) throw UnitsError("chronon must be finite and positive");
  if (!positive(hbar)) throw UnitsError("hbar must be finite and positive");
  if (!positive(topon / chronon)) throw UnitsError("causal speed is not finite");
}

PhysicalUnits PhysicalUnits::si(double chronon, double c, double hbar) {
  PhysicalUnits u{c * chronon, chronon, hbar};
  u.validate();
  return u;
}

double InformationalMass::compton_lambda(const PhysicalUnits& u) const {
  return compton_from_omega(omega, u);
}

double causal_speed(const PhysicalUnits& u) { return u.topon / u.chronon; }

double mass_from_omega(double omega, const PhysicalUnits& u) {
  if (!(omega >= 0.0)) throw UnitsError("omega must be non-negative");
  // m = (tau^2 / a^2) hbar omega
  return (u.chronon * u.chronon) / (u.topon * u.topon) * u.hbar * omega;
}

double omega_from_mass(double mass, const PhysicalUnits& u) {
  if (!(mass >= 0.0)) throw UnitsError("mass must be non-negative");
  return mass * (u.topon * u.topon) / ((u.chronon * u.chronon) * u.hbar);
}

double omega_from_compton(double lambda, const PhysicalUnits& u) {
  if (std::isinf(lambda) && lambda > 0.0) return 0.0;
  if (!(lambda > 0.0)) throw UnitsError("invalid Compton wavelength (must be > 0)");
  return causal_speed(u) / lambda;
}

double compton_from_omega(double omega, const PhysicalUnits& u) {
  if (!(omega >= 0.0)) throw UnitsError("omega must be non-negative");
  if (omega == 0.0) return std::numeric_limits<double>::infinity();
  return causal_speed(u) / omega;
}

std::string format_compton(double lambda) {
  if (std::isinf(lambda)) return "massless";
  return format_double(lambda);
}

Constants parse_constants(const std::string& text) {
  Constants c;
  for (const auto& [key, value] : parse_key_values(text)) {
    double v = parse_double(key, value);
    if (key == "hbar")
      c.hbar = v;
    else if (key == "c")
      c.c = v;
    else if (key == "chronon")
      c.chronon = v;
    else
      throw UnitsError("unknown constant '" + key + "' (expected hbar, c, chronon)");
  }
  c.units().validate();
  return c;
}

Constants load_constants(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UnitsError("cannot read constants file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_constants(ss.str());
}

Constants constants_from_environment() {
  const char* path = std::getenv("QCASIM_CONSTANTS");
  if (path == nullptr || *path == '\0') return {};
  return load_constants(path);
}

}  // namespace qcasim::units
