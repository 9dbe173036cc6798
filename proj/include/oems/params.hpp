#ifndef OEMS_PARAMS_HPP_
#define OEMS_PARAMS_HPP_

#include "oems/constants.hpp"

namespace oems {

// All frequencies and rates are angular, in rad/s. Configuration files quote
// them in Hz; use hz() to apply the 2*pi.

/// Hardware rates of the double-cavity system. Cavity frequencies are stored
/// as detunings from their coupling lasers so that no ~1e15 rad/s carrier
/// ever enters a subtraction; the carriers are kept only for photon-energy
/// conversions.
struct SystemParams {
  double omega_c1 = 0.0;     ///< optical coupling-laser carrier
  double omega_c2 = 0.0;     ///< microwave coupling-laser carrier
  double delta_bare1 = 0.0;  ///< omega_1 - omega_c1
  double delta_bare2 = 0.0;  ///< omega_2 - omega_c2
  double omega_m = 0.0;
  double gamma_m = 0.0;  ///< mechanical energy damping rate
  double kappa1 = 0.0;   ///< cavity amplitude decay rates
  double kappa2 = 0.0;
  double g1 = 0.0;  ///< single-photon optomechanical couplings
  double g2 = 0.0;
};

/// Coupling-laser and probe input powers [W].
struct DriveConfig {
  double p_c1 = 0.0;
  double p_c2 = 0.0;
  double p_p = 0.0;
};

struct Geometry {
  double cavity_length = 0.0;   ///< [m]
  double effective_mass = 0.0;  ///< [kg]
};

/// The reference device: 400 THz optical and 10 GHz microwave cavities
/// sharing a 10 MHz mechanical mode, both lasers red-detuned by omega_m.
SystemParams default_params();

/// Throws InvalidParameter unless every rate is finite and strictly positive.
void validate(const SystemParams& p);
void validate(const DriveConfig& d);

/// omega_m / max(kappa1, kappa2); >> 1 in the resolved-sideband regime.
double resolved_sideband_ratio(const SystemParams& p);

/// Intracavity drive rate sqrt(2 kappa P / (hbar carrier)) [sqrt(photons)/s].
double drive_amplitude(double power, double carrier, double kappa);

/// Inverse of drive_amplitude.
double power_from_amplitude(double amplitude, double carrier, double kappa);

/// g = (carrier / L) * x_zpf with x_zpf = sqrt(hbar / (2 m omega_m)).
double coupling_from_geometry(double carrier, const Geometry& geometry,
                              double omega_m);

/// C = g^2 n / (kappa gamma_m).
double cooperativity(double g, double photon_number, double kappa,
                     double gamma_m);

/// Coupling power above which the two cavity-1 poles of the single-cavity
/// response acquire real parts (normal-mode splitting). Assumes the coupling
/// laser sits omega_m below the cavity.
double critical_power(const SystemParams& p, double carrier);

/// Half-width (1 + C1) gamma_m / 2 of the transparency window.
double eit_width(double c1, double gamma_m);

}  // namespace oems

#endif  // OEMS_PARAMS_HPP_
