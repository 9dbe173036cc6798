#include <doctest.h>

#include <cmath>

#include "oems/errors.hpp"
#include "oems/params.hpp"

using namespace oems;

TEST_CASE("drive amplitude") {
  const auto p = default_params();
  CHECK(drive_amplitude(0.0, p.omega_c1, p.kappa1) == 0.0);

  // Hand evaluation of sqrt(2 kappa P / (hbar omega)) in long double.
  const long double two_pi = 6.283185307179586476925L;
  const long double hbar = 1.054571817e-34L;
  const long double expected =
      std::sqrt(2.0L * two_pi * 1e6L * 1.3e-3L / (hbar * two_pi * 4e14L));
  const double got = drive_amplitude(1.3e-3, hz(4e14), hz(1e6));
  CHECK(got == doctest::Approx(static_cast<double>(expected)).epsilon(1e-14));
  CHECK(got == doctest::Approx(2.48e11).epsilon(0.01));

  CHECK(drive_amplitude(4e-3, p.omega_c1, p.kappa1) ==
        doctest::Approx(2.0 * drive_amplitude(1e-3, p.omega_c1, p.kappa1)).epsilon(1e-15));

  CHECK_THROWS_AS(drive_amplitude(1.0, 0.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(drive_amplitude(1.0, 1.0, -1.0), InvalidParameter);
  CHECK_THROWS_AS(drive_amplitude(-1.0, 1.0, 1.0), InvalidParameter);
}

TEST_CASE("drive amplitude round trip") {
  const auto p = default_params();
  for (double power : {1e-12, 3.3e-6, 1.3e-3, 0.5, 17.0}) {
    for (auto [carrier, kappa] : {std::pair{p.omega_c1, p.kappa1}, std::pair{p.omega_c2, p.kappa2}}) {
      const double e = drive_amplitude(power, carrier, kappa);
      CHECK(std::abs(e * e * kHbar * carrier / (2.0 * kappa) - power) <= 1e-12 * power);
      CHECK(power_from_amplitude(e, carrier, kappa) == doctest::Approx(power).epsilon(1e-12));
    }
  }
}

TEST_CASE("coupling from geometry") {
  const double wm = hz(1e7), carrier = hz(4e14);
  const Geometry base{1e-3, 1e-12};
  const double g = coupling_from_geometry(carrier, base, wm);
  CHECK(coupling_from_geometry(carrier, {2e-3, 1e-12}, wm) == doctest::Approx(g / 2.0));
  CHECK(coupling_from_geometry(carrier, {1e-3, 4e-12}, wm) == doctest::Approx(g / 2.0));

  // Pick L so that g = 2 pi 50 Hz for m = 1 ng, then re-evaluate.
  const double mass = 1e-12;
  const double x_zpf = std::sqrt(kHbar / (2.0 * mass * wm));
  const double length = carrier * x_zpf / hz(50.0);
  CHECK(coupling_from_geometry(carrier, {length, mass}, wm) ==
        doctest::Approx(hz(50.0)).epsilon(1e-14));

  CHECK_THROWS_AS(coupling_from_geometry(carrier, {0.0, 1e-12}, wm), InvalidParameter);
  CHECK_THROWS_AS(coupling_from_geometry(carrier, {1e-3, 0.0}, wm), InvalidParameter);
}

TEST_CASE("cooperativity") {
  const auto p = default_params();
  CHECK(cooperativity(p.g1, 0.0, p.kappa1, p.gamma_m) == 0.0);
  const double c = cooperativity(p.g1, 1.5e7, p.kappa1, p.gamma_m);
  for (double s : {0.1, 2.0, 37.0}) {
    CHECK(cooperativity(s * p.g1, 1.5e7 / (s * s), p.kappa1, p.gamma_m) ==
          doctest::Approx(c).epsilon(1e-14));
  }
  CHECK_THROWS_AS(cooperativity(p.g1, 1.0, 0.0, p.gamma_m), InvalidParameter);
}

TEST_CASE("critical power") {
  auto p = default_params();
  const double pcr = critical_power(p, p.omega_c1);
  CHECK(std::abs(pcr - 16.6e-3) <= 0.03 * 16.6e-3);
  CHECK(critical_power(p, p.omega_c1) == pcr);

  auto doubled = p;
  doubled.g1 *= 2.0;
  CHECK(critical_power(doubled, p.omega_c1) == doctest::Approx(pcr / 4.0).epsilon(1e-14));

  auto collided = p;
  collided.gamma_m = 2.0 * p.kappa1;
  CHECK(critical_power(collided, p.omega_c1) == 0.0);
}

TEST_CASE("eit width") {
  const double gm = hz(1e3);
  CHECK(eit_width(0.0, gm) == gm / 2.0);
  CHECK(eit_width(40.0, gm) == 20.5 * gm);
  CHECK(eit_width(80.0, gm) == 40.5 * gm);
  CHECK(eit_width(40.0, gm) == eit_width(40.0, gm));
  CHECK_THROWS_AS(eit_width(-1.0, gm), InvalidParameter);
}

TEST_CASE("parameter validation") {
  auto p = default_params();
  CHECK_NOTHROW(validate(p));
  CHECK(resolved_sideband_ratio(p) == doctest::Approx(10.0));
  p.kappa2 = 0.0;
  CHECK_THROWS_AS(validate(p), InvalidParameter);
  p = default_params();
  p.omega_m = -1.0;
  CHECK_THROWS_AS(validate(p), InvalidParameter);
  CHECK_THROWS_AS(validate(DriveConfig{-1e-3, 0.0, 0.0}), InvalidParameter);
}
