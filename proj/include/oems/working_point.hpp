#ifndef OEMS_WORKING_POINT_HPP_
#define OEMS_WORKING_POINT_HPP_

#include <optional>

#include "oems/constants.hpp"
#include "oems/params.hpp"

namespace oems {

/// Probe-off steady state of the mean-field equations
///   da1/dt = -(i delta_bare1 + kappa1) a1 + i g1 a1 Q + E_c1
///   da2/dt = -(i delta_bare2 + kappa2) a2 - i g2 a2 Q + E_c2
///   omega_m Q = g1 |a1|^2 - g2 |a2|^2          (static force balance)
struct WorkingPoint {
  cdouble a10;
  cdouble a20;
  double q0 = 0.0;
  double delta1 = 0.0;  ///< effective detuning delta_bare1 - g1 q0
  double delta2 = 0.0;  ///< effective detuning delta_bare2 + g2 q0
  double n1 = 0.0;
  double n2 = 0.0;
  /// Bare detunings actually used; differ from SystemParams in effective mode.
  double delta_bare1 = 0.0;
  double delta_bare2 = 0.0;
  double drive1 = 0.0;  ///< E_c1
  double drive2 = 0.0;  ///< E_c2
  /// Number of distinct static solutions found; > 1 means multistable.
  int solution_count = 1;
  bool multistable() const { return solution_count > 1; }
};

enum class DetuningMode {
  bare,      ///< hold delta_bare_i fixed and solve for q0
  effective  ///< shift delta_bare_i so the effective detunings hit targets
};

struct WorkingPointOptions {
  DetuningMode mode = DetuningMode::effective;
  /// Targets for effective mode; omega_m when unset.
  std::optional<double> target_delta1;
  std::optional<double> target_delta2;
  double tolerance = 1e-10;
  int max_iterations = 200;
};

/// Solves for the working point. In bare mode the static displacement is
/// found by damped fixed-point iteration on q0, and all real roots of the
/// force balance are enumerated through its polynomial form so that
/// multistability can be flagged; the root with smallest |q0| is returned.
/// Throws ConvergenceError if no root meets the tolerance or two roots tie.
WorkingPoint solve_working_point(const SystemParams& params,
                                 const DriveConfig& drives,
                                 const WorkingPointOptions& options = {});

struct WorkingPointResidual {
  double cavity1 = 0.0;  ///< |a10 (kappa1 + i delta1) - E_c1| / E_c1
  double cavity2 = 0.0;
  double force = 0.0;    ///< |omega_m q0 - g1 n1 + g2 n2| / scale
};

WorkingPointResidual residual(const WorkingPoint& wp,
                              const SystemParams& params);

}  // namespace oems

#endif  // OEMS_WORKING_POINT_HPP_
