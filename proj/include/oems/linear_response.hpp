#ifndef OEMS_LINEAR_RESPONSE_HPP_
#define OEMS_LINEAR_RESPONSE_HPP_

#include <vector>

#include "oems/constants.hpp"
#include "oems/params.hpp"
#include "oems/working_point.hpp"

namespace oems {

/// First-order sideband amplitudes per unit probe drive E_p. Fields are
/// expanded as A = A0 + A+ e^{-i delta t} + A- e^{+i delta t}; Q- = conj(Q+).
struct SidebandSolution {
  cdouble a1_plus;
  cdouble a1_minus;
  cdouble a2_plus;
  cdouble a2_minus;
  cdouble q_plus;
  double delta = 0.0;  ///< omega_p - omega_c1
  bool rwa = false;
  /// ||A z - b|| / (||A|| ||z|| + ||b||) of the solved system.
  double residual = 0.0;
};

/// Solves the harmonic-balance system around `wp` at probe detuning `delta`.
///
/// Full model unknowns (a1+, conj a1-, a2+, conj a2-, Q+):
///   (kappa_i + i(Delta_i - delta)) a_i+  -/+ i g_i a_i0 Q+       = E_p [i=1]
///   (kappa_i - i(Delta_i + delta)) conj(a_i-) +/- i g_i conj(a_i0) Q+ = 0
///   (omega_m^2 - delta^2 - i delta gamma_m) Q+
///       = omega_m [g1 (conj(a10) a1+ + a10 conj(a1-))
///                - g2 (conj(a20) a2+ + a20 conj(a2-))]
/// With rwa the lower sidebands are dropped and the mechanical
/// susceptibility becomes 2 omega_m (omega_m - delta - i gamma_m / 2), which
/// is the system behind the closed-form continued fraction.
///
/// Throws SingularSystem if the system has no finite solution.
SidebandSolution solve_sidebands(const WorkingPoint& wp,
                                 const SystemParams& params, double delta,
                                 bool rwa);

struct ProbeResponse {
  double x = 0.0;  ///< delta - omega_m
  cdouble e_l;     ///< 2 kappa1 a1+ / E_p
  cdouble e_r;     ///< 2 kappa2 a2+ / E_p
  double reflect_flux = 0.0;     ///< |E_L - 1|^2
  double abs_er_sq = 0.0;        ///< |E_R|^2
  double transmit_flux = 0.0;    ///< (kappa1 / kappa2) |E_R|^2
  double mech_intensity = 0.0;   ///< |Q+|^2 / |E_p|^2
  double mech_bath_flux = 0.0;
  double lower_flux1 = 0.0;      ///< 4 kappa1^2 |a1-|^2
  double lower_flux2 = 0.0;      ///< 4 kappa1 kappa2 |a2-|^2
  double flux_budget = 0.0;
  double transduced_frequency = 0.0;  ///< omega_c2 + delta
};

/// Output fields and the normalized photon-flux ledger. All fluxes are
/// relative to the probe input flux E_p^2 / (2 kappa1). The mechanical bath
/// takes 4 kappa1 gamma_m |Q+|^2 (phonon amplitude sqrt(2) Q+), weighted by
/// delta / omega_m outside the RWA to count quanta at the drive frequency.
ProbeResponse probe_outputs(const SidebandSolution& sol,
                            const WorkingPoint& wp, const SystemParams& params);

/// Uniform grid of n_points from x_min to x_max inclusive.
std::vector<double> uniform_grid(double x_min, double x_max, int n_points);

/// Probe sweep around a fixed working point, ordered by x.
std::vector<ProbeResponse> sweep_probe(const WorkingPoint& wp,
                                       const SystemParams& params,
                                       double x_min, double x_max,
                                       int n_points, bool rwa);

std::vector<ProbeResponse> sweep_probe(const SystemParams& params,
                                       const DriveConfig& drives,
                                       double x_min, double x_max,
                                       int n_points, bool rwa,
                                       const WorkingPointOptions& options = {});

}  // namespace oems

#endif  // OEMS_LINEAR_RESPONSE_HPP_
