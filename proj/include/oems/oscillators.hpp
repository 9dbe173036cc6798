#ifndef OEMS_OSCILLATORS_HPP_
#define OEMS_OSCILLATORS_HPP_

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <complex>
#include <vector>

#include "oems/errors.hpp"
#include "oems/params.hpp"
#include "oems/working_point.hpp"

namespace oems {

/// Three coupled damped oscillators in the rotating-wave picture:
///
///   du/dt = -i Delta1 u - i G1 w - kappa1 u + E_p e^{-i delta t}
///   dv/dt = -i Delta2 v - i G2 w - kappa2 v
///   dw/dt = -i omega_m w - i G1 u - i G2 v - (gamma_m / 2) w
///
/// u and v are the two cavity modes, w the mechanical mode.
template <typename Scalar>
struct OscillatorModel {
  Scalar delta1{};
  Scalar delta2{};
  Scalar omega_m{};
  Scalar kappa1{};
  Scalar kappa2{};
  Scalar gamma_m_half{};
  Scalar g_eff1{};
  Scalar g_eff2{};
};

template <typename Scalar>
using State3 = Eigen::Matrix<std::complex<Scalar>, 3, 1>;
template <typename Scalar>
using Matrix3c = Eigen::Matrix<std::complex<Scalar>, 3, 3>;

/// Whether kappa1 >> gamma_m >> kappa2, with ">>" read as a factor >= 5.
struct HierarchyReport {
  double kappa1_over_gamma_m = 0.0;
  double gamma_m_over_kappa2 = 0.0;
  bool satisfied = false;
};

template <typename Scalar>
HierarchyReport hierarchy(const OscillatorModel<Scalar>& m) {
  HierarchyReport r;
  const double gamma_m = 2.0 * static_cast<double>(m.gamma_m_half);
  r.kappa1_over_gamma_m = static_cast<double>(m.kappa1) / gamma_m;
  r.gamma_m_over_kappa2 = gamma_m / static_cast<double>(m.kappa2);
  r.satisfied = r.kappa1_over_gamma_m >= 5.0 && r.gamma_m_over_kappa2 >= 5.0;
  return r;
}

/// Effective couplings G_i = g_i |a_i0| / sqrt(2), so that G_i^2 equals the
/// continued-fraction coefficient s_i.
template <typename Scalar = double>
OscillatorModel<Scalar> from_working_point(const WorkingPoint& wp,
                                           const SystemParams& params) {
  OscillatorModel<Scalar> m;
  m.delta1 = static_cast<Scalar>(wp.delta1);
  m.delta2 = static_cast<Scalar>(wp.delta2);
  m.omega_m = static_cast<Scalar>(params.omega_m);
  m.kappa1 = static_cast<Scalar>(params.kappa1);
  m.kappa2 = static_cast<Scalar>(params.kappa2);
  m.gamma_m_half = static_cast<Scalar>(params.gamma_m / 2.0);
  m.g_eff1 = static_cast<Scalar>(params.g1 * std::sqrt(wp.n1 / 2.0));
  m.g_eff2 = static_cast<Scalar>(params.g2 * std::sqrt(wp.n2 / 2.0));
  return m;
}

/// Homogeneous part M of dz/dt = M z + drive.
template <typename Scalar>
Matrix3c<Scalar> system_matrix(const OscillatorModel<Scalar>& m) {
  using C = std::complex<Scalar>;
  const C i(0, 1);
  Matrix3c<Scalar> a;
  a << C(-m.kappa1, -m.delta1), C(0), -i * m.g_eff1,
      C(0), C(-m.kappa2, -m.delta2), -i * m.g_eff2,
      -i * m.g_eff1, -i * m.g_eff2, C(-m.gamma_m_half, -m.omega_m);
  return a;
}

/// Generator of the envelope dynamics in the frame rotating at delta:
/// d(z e^{i delta t})/dt = (M + i delta) (z e^{i delta t}) + (E_p, 0, 0).
template <typename Scalar>
Matrix3c<Scalar> rotating_generator(const OscillatorModel<Scalar>& m,
                                    Scalar delta) {
  using C = std::complex<Scalar>;
  return system_matrix(m) + C(0, delta) * Matrix3c<Scalar>::Identity();
}

/// Periodic steady state z(t) = Z e^{-i delta t}; returns Z = (u, v, w).
template <typename Scalar>
State3<Scalar> harmonic_steady_state(const OscillatorModel<Scalar>& m,
                                     Scalar delta, Scalar probe_amp) {
  const Matrix3c<Scalar> a = rotating_generator(m, delta);
  Eigen::FullPivLU<Matrix3c<Scalar>> lu(a);
  if (!lu.isInvertible()) {
    throw SingularSystem("oscillator system is singular",
                         static_cast<double>(delta));
  }
  State3<Scalar> drive = State3<Scalar>::Zero();
  drive(0) = probe_amp;
  return -lu.solve(drive);
}

enum class Integrator { exact_propagator, rk4 };

/// Samples in the frame co-rotating with the probe, starting from rest.
template <typename Scalar>
struct Trajectory {
  std::vector<Scalar> time;
  std::vector<State3<Scalar>> state;
};

template <typename Scalar>
Scalar spectral_radius(const Matrix3c<Scalar>& a) {
  Eigen::ComplexEigenSolver<Matrix3c<Scalar>> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Largest stable RK4 step accepted by propagate().
template <typename Scalar>
Scalar rk4_max_step(const OscillatorModel<Scalar>& m, Scalar delta) {
  return Scalar(0.1) / spectral_radius(rotating_generator(m, delta));
}

/// Integrates from z = 0 and returns n_samples points uniformly spaced on
/// [0, t_final]. The exact propagator diagonalizes the constant generator
/// and falls back to a Pade matrix exponential per sample when the
/// eigenvector basis is ill-conditioned. RK4 steps are shrunk to land on
/// each sample time and must satisfy dt <= rk4_max_step().
template <typename Scalar>
Trajectory<Scalar> propagate(const OscillatorModel<Scalar>& m, Scalar probe_amp,
                             Scalar delta, Scalar t_final, Integrator method,
                             Scalar dt = 0, int n_samples = 201) {
  using C = std::complex<Scalar>;
  if (!(t_final > 0)) throw InvalidParameter("t_final must be > 0");
  if (n_samples < 2) throw InvalidParameter("n_samples must be >= 2");

  const Matrix3c<Scalar> a = rotating_generator(m, delta);
  State3<Scalar> drive = State3<Scalar>::Zero();
  drive(0) = probe_amp;

  Trajectory<Scalar> traj;
  traj.time.resize(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    traj.time[k] = t_final * Scalar(k) / Scalar(n_samples - 1);
  }
  traj.time.back() = t_final;
  traj.state.reserve(n_samples);

  if (method == Integrator::exact_propagator) {
    const State3<Scalar> steady = harmonic_steady_state(m, delta, probe_amp);
    Eigen::ComplexEigenSolver<Matrix3c<Scalar>> es(a);
    const Matrix3c<Scalar> v = es.eigenvectors();
    Eigen::FullPivLU<Matrix3c<Scalar>> vlu(v);
    const Scalar rcond = vlu.rcond();
    const bool diagonalizable =
        es.info() == Eigen::Success && vlu.isInvertible() && rcond > Scalar(1e-10);
    // z(t) = steady + exp(A t) (z0 - steady) with z0 = 0.
    if (diagonalizable) {
      const State3<Scalar> coeffs = vlu.solve(-steady);
      for (Scalar t : traj.time) {
        State3<Scalar> modal;
        for (int k = 0; k < 3; ++k) modal(k) = std::exp(es.eigenvalues()(k) * t) * coeffs(k);
        traj.state.push_back(steady + v * modal);
      }
    } else {
      for (Scalar t : traj.time) {
        const Matrix3c<Scalar> at = a * C(t);
        const Matrix3c<Scalar> expm = at.exp();
        traj.state.push_back(steady - expm * steady);
      }
    }
    return traj;
  }

  if (!(dt > 0)) throw InvalidParameter("rk4 requires dt > 0");
  if (dt > rk4_max_step(m, delta)) {
    throw InvalidParameter("rk4 step exceeds stability guard 0.1 / max rate");
  }
  auto rhs = [&](const State3<Scalar>& z) -> State3<Scalar> { return a * z + drive; };
  State3<Scalar> z = State3<Scalar>::Zero();
  traj.state.push_back(z);
  for (int k = 1; k < n_samples; ++k) {
    const Scalar span = traj.time[k] - traj.time[k - 1];
    const long steps = static_cast<long>(std::ceil(span / dt));
    const Scalar h = span / Scalar(steps);
    for (long s = 0; s < steps; ++s) {
      const State3<Scalar> k1 = rhs(z);
      const State3<Scalar> k2 = rhs(z + (h / 2) * k1);
      const State3<Scalar> k3 = rhs(z + (h / 2) * k2);
      const State3<Scalar> k4 = rhs(z + h * k3);
      z += (h / 6) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
    }
    traj.state.push_back(z);
  }
  return traj;
}

}  // namespace oems

#endif  // OEMS_OSCILLATORS_HPP_
