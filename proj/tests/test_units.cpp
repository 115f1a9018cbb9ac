#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include "qcasim/units.hpp"

using namespace qcasim::units;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("causal speed is topon over chronon") {
  CHECK(causal_speed(PhysicalUnits::natural()) == 1.0);
  CHECK(causal_speed({2.99792458e8, 1.0, 1.0}) == 2.99792458e8);
  CHECK(rel(causal_speed({3e-9, 1e-17, 1.0}), 3e8) < 1e-15);
}

TEST_CASE("unit factors must be positive and finite") {
  CHECK_THROWS_AS((PhysicalUnits{0.0, 1.0, 1.0}.validate()), UnitsError);
  CHECK_THROWS_AS((PhysicalUnits{1.0, -1.0, 1.0}.validate()), UnitsError);
  CHECK_THROWS_AS((PhysicalUnits{1.0, 1.0, 0.0}.validate()), UnitsError);
  CHECK_THROWS_AS((PhysicalUnits{std::numeric_limits<double>::infinity(), 1.0, 1.0}.validate()),
                  UnitsError);
  CHECK_THROWS_AS((PhysicalUnits{1e300, 1e-300, 1.0}.validate()), UnitsError);
}

TEST_CASE("mass from frequency") {
  CHECK(mass_from_omega(0.0, PhysicalUnits::si()) == 0.0);
  CHECK(mass_from_omega(1.0, PhysicalUnits::natural()) == 1.0);
  // Independent evaluation of hbar omega / c^2.
  const double omega = 7.7634e20;
  const double expected = 1.054571817e-34 * omega / (299792458.0 * 299792458.0);
  CHECK(rel(mass_from_omega(omega, PhysicalUnits::si()), expected) < 1e-14);
  CHECK(rel(mass_from_omega(omega, PhysicalUnits::si()), 9.109e-31) < 1e-3);
  CHECK_THROWS_AS(mass_from_omega(-1.0, PhysicalUnits::si()), UnitsError);
}

TEST_CASE("frequency from Compton wavelength") {
  CHECK(omega_from_compton(1.0, PhysicalUnits::natural()) == 1.0);
  CHECK(omega_from_compton(std::numeric_limits<double>::infinity(), PhysicalUnits::si()) == 0.0);
  CHECK(rel(omega_from_compton(3.8616e-13, PhysicalUnits::si()), 7.7634e20) < 1e-4);
  CHECK_THROWS_AS(omega_from_compton(0.0, PhysicalUnits::si()), UnitsError);
  CHECK_THROWS_AS(omega_from_compton(-1.0, PhysicalUnits::si()), UnitsError);
  CHECK(std::isinf(compton_from_omega(0.0, PhysicalUnits::si())));
  CHECK(InformationalMass{0.0}.massless());
  CHECK(format_compton(compton_from_omega(0.0, PhysicalUnits::si())) == "massless");
  CHECK(format_compton(0.5) == "0.5");
}

TEST_CASE("round trip and linearity over many decades") {
  const auto u = PhysicalUnits::si();
  for (double omega = 1e-6; omega <= 1e30; omega *= 7.3) {
    const double m = mass_from_omega(omega, u);
    const double back = omega_from_compton(compton_from_omega(omega_from_mass(m, u), u), u);
    CHECK(rel(back, omega) < 1e-12);
    CHECK(mass_from_omega(2.0 * omega, u) == 2.0 * m);
    const double lambda = compton_from_omega(omega, u);
    CHECK(rel(mass_from_omega(causal_speed(u) / lambda, u) * causal_speed(u) * lambda, u.hbar) <
          1e-12);
  }
}

TEST_CASE("CODATA electron mass from its reduced Compton wavelength") {
  const auto u = PhysicalUnits::si();
  const double m = mass_from_omega(omega_from_compton(3.8615926796e-13, u), u);
  CHECK(rel(m, 9.1093837015e-31) < 1e-6);
}

TEST_CASE("constants files") {
  const Constants c = parse_constants("hbar = 1\nc = 2 # fast\n");
  CHECK(c.hbar == 1.0);
  CHECK(c.c == 2.0);
  CHECK(c.chronon == kPlanckTime);
  CHECK(causal_speed(c.units()) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(parse_constants("planck = 3\n"), UnitsError);
  CHECK_THROWS_AS(parse_constants("c = -1\n"), UnitsError);
  CHECK_THROWS_AS(load_constants("/nonexistent/constants.txt"), UnitsError);

  const auto path = std::filesystem::temp_directory_path() / "qcasim_constants_test.txt";
  std::ofstream(path) << "chronon = 2e-44\n";
  ::setenv("QCASIM_CONSTANTS", path.c_str(), 1);
  CHECK(constants_from_environment().chronon == 2e-44);
  ::unsetenv("QCASIM_CONSTANTS");
  CHECK(constants_from_environment().chronon == kPlanckTime);
  std::filesystem::remove(path);
}
