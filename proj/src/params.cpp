#include "oems/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oems/errors.hpp"

namespace oems {

namespace {

void require_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw InvalidParameter(std::string(name) + " must be finite and > 0, got " +
                           std::to_string(v));
  }
}

}  // namespace

SystemParams default_params() {
  SystemParams p;
  p.omega_c1 = hz(4e14);
  p.omega_c2 = hz(1e10);
  p.omega_m = hz(1e7);
  p.gamma_m = hz(1e3);
  p.kappa1 = hz(1e6);
  p.kappa2 = hz(1e2);
  p.g1 = hz(50.0);
  p.g2 = hz(5.0);
  p.delta_bare1 = p.omega_m;
  p.delta_bare2 = p.omega_m;
  return p;
}

void validate(const SystemParams& p) {
  require_positive(p.omega_c1, "omega_c1");
  require_positive(p.omega_c2, "omega_c2");
  require_positive(p.omega_m, "omega_m");
  require_positive(p.gamma_m, "gamma_m");
  require_positive(p.kappa1, "kappa1");
  require_positive(p.kappa2, "kappa2");
  if (!(std::isfinite(p.g1) && p.g1 >= 0.0) ||
      !(std::isfinite(p.g2) && p.g2 >= 0.0)) {
    throw InvalidParameter("couplings g1, g2 must be finite and >= 0");
  }
  if (!std::isfinite(p.delta_bare1) || !std::isfinite(p.delta_bare2)) {
    throw InvalidParameter("bare detunings must be finite");
  }
}

void validate(const DriveConfig& d) {
  for (double v : {d.p_c1, d.p_c2, d.p_p}) {
    if (!(std::isfinite(v) && v >= 0.0)) {
      throw InvalidParameter("powers must be finite and >= 0");
    }
  }
}

double resolved_sideband_ratio(const SystemParams& p) {
  return p.omega_m / std::max(p.kappa1, p.kappa2);
}

double drive_amplitude(double power, double carrier, double kappa) {
  require_positive(carrier, "carrier");
  require_positive(kappa, "kappa");
  if (!(power >= 0.0)) throw InvalidParameter("power must be >= 0");
  return std::sqrt(2.0 * kappa * power / (kHbar * carrier));
}

double power_from_amplitude(double amplitude, double carrier, double kappa) {
  require_positive(carrier, "carrier");
  require_positive(kappa, "kappa");
  return amplitude * amplitude * kHbar * carrier / (2.0 * kappa);
}

double coupling_from_geometry(double carrier, const Geometry& geometry,
                              double omega_m) {
  require_positive(carrier, "carrier");
  require_positive(geometry.cavity_length, "cavity_length");
  require_positive(geometry.effective_mass, "effective_mass");
  require_positive(omega_m, "omega_m");
  const double x_zpf =
      std::sqrt(kHbar / (2.0 * geometry.effective_mass * omega_m));
  return carrier / geometry.cavity_length * x_zpf;
}

double cooperativity(double g, double photon_number, double kappa,
                     double gamma_m) {
  require_positive(kappa, "kappa");
  require_positive(gamma_m, "gamma_m");
  if (!(photon_number >= 0.0)) {
    throw InvalidParameter("photon number must be >= 0");
  }
  return g * g * photon_number / (kappa * gamma_m);
}

double critical_power(const SystemParams& p, double carrier) {
  const double split = p.gamma_m / 2.0 - p.kappa1;
  return kHbar * carrier / (4.0 * p.g1 * p.g1 * p.kappa1) *
         (p.kappa1 * p.kappa1 + p.omega_m * p.omega_m) * split * split;
}

double eit_width(double c1, double gamma_m) {
  if (!(c1 >= 0.0)) throw InvalidParameter("C1 must be >= 0");
  return (1.0 + c1) * gamma_m / 2.0;
}

}  // namespace oems
