#include "oems/linear_response.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "oems/errors.hpp"

namespace oems {

namespace {

constexpr cdouble kI(0.0, 1.0);

template <int N>
Eigen::Matrix<cdouble, N, 1> solve_checked(
    const Eigen::Matrix<cdouble, N, N>& a,
    const Eigen::Matrix<cdouble, N, 1>& b, double delta, double& residual) {
  Eigen::FullPivLU<Eigen::Matrix<cdouble, N, N>> lu(a);
  if (!lu.isInvertible()) {
    throw SingularSystem("sideband system is singular at delta = " +
                             std::to_string(delta) + " rad/s",
                         delta);
  }
  Eigen::Matrix<cdouble, N, 1> z = lu.solve(b);
  if (!z.allFinite()) {
    throw SingularSystem("sideband solution is not finite at delta = " +
                             std::to_string(delta) + " rad/s",
                         delta);
  }
  const double denom = a.norm() * z.norm() + b.norm();
  residual = (a * z - b).norm() / denom;
  return z;
}

}  // namespace

SidebandSolution solve_sidebands(const WorkingPoint& wp,
                                 const SystemParams& params, double delta,
                                 bool rwa) {
  const double k1 = params.kappa1, k2 = params.kappa2;
  const double g1 = params.g1, g2 = params.g2;
  const double wm = params.omega_m;
  const cdouble a10 = wp.a10, a20 = wp.a20;

  SidebandSolution sol;
  sol.delta = delta;
  sol.rwa = rwa;

  // The mechanical row is divided through by 2 omega_m to keep all rows of
  // comparable magnitude.
  if (rwa) {
    Eigen::Matrix<cdouble, 3, 3> a = Eigen::Matrix<cdouble, 3, 3>::Zero();
    Eigen::Matrix<cdouble, 3, 1> b(1.0, 0.0, 0.0);
    a(0, 0) = cdouble(k1, wp.delta1 - delta);
    a(0, 2) = -kI * g1 * a10;
    a(1, 1) = cdouble(k2, wp.delta2 - delta);
    a(1, 2) = kI * g2 * a20;
    a(2, 2) = cdouble(wm - delta, -params.gamma_m / 2.0);
    a(2, 0) = -0.5 * g1 * std::conj(a10);
    a(2, 1) = 0.5 * g2 * std::conj(a20);
    const auto z = solve_checked<3>(a, b, delta, sol.residual);
    sol.a1_plus = z(0);
    sol.a2_plus = z(1);
    sol.q_plus = z(2);
  } else {
    Eigen::Matrix<cdouble, 5, 5> a = Eigen::Matrix<cdouble, 5, 5>::Zero();
    Eigen::Matrix<cdouble, 5, 1> b = Eigen::Matrix<cdouble, 5, 1>::Zero();
    b(0) = 1.0;
    a(0, 0) = cdouble(k1, wp.delta1 - delta);
    a(0, 4) = -kI * g1 * a10;
    a(1, 1) = cdouble(k1, -(wp.delta1 + delta));
    a(1, 4) = kI * g1 * std::conj(a10);
    a(2, 2) = cdouble(k2, wp.delta2 - delta);
    a(2, 4) = kI * g2 * a20;
    a(3, 3) = cdouble(k2, -(wp.delta2 + delta));
    a(3, 4) = -kI * g2 * std::conj(a20);
    a(4, 4) = cdouble(wm * wm - delta * delta, -delta * params.gamma_m) /
              (2.0 * wm);
    a(4, 0) = -0.5 * g1 * std::conj(a10);
    a(4, 1) = -0.5 * g1 * a10;
    a(4, 2) = 0.5 * g2 * std::conj(a20);
    a(4, 3) = 0.5 * g2 * a20;
    const auto z = solve_checked<5>(a, b, delta, sol.residual);
    sol.a1_plus = z(0);
    sol.a1_minus = std::conj(z(1));
    sol.a2_plus = z(2);
    sol.a2_minus = std::conj(z(3));
    sol.q_plus = z(4);
  }
  return sol;
}

ProbeResponse probe_outputs(const SidebandSolution& sol,
                            const WorkingPoint& /*wp*/,
                            const SystemParams& params) {
  const double k1 = params.kappa1, k2 = params.kappa2;
  ProbeResponse r;
  r.x = sol.delta - params.omega_m;
  r.e_l = 2.0 * k1 * sol.a1_plus;
  r.e_r = 2.0 * k2 * sol.a2_plus;
  r.reflect_flux = std::norm(r.e_l - 1.0);
  r.abs_er_sq = std::norm(r.e_r);
  r.transmit_flux = k1 / k2 * r.abs_er_sq;
  r.mech_intensity = std::norm(sol.q_plus);
  const double weight = sol.rwa ? 1.0 : sol.delta / params.omega_m;
  r.mech_bath_flux =
      4.0 * k1 * params.gamma_m * weight * r.mech_intensity;
  r.lower_flux1 = 4.0 * k1 * k1 * std::norm(sol.a1_minus);
  r.lower_flux2 = 4.0 * k1 * k2 * std::norm(sol.a2_minus);
  r.flux_budget = r.reflect_flux + r.transmit_flux + r.mech_bath_flux +
                  r.lower_flux1 + r.lower_flux2;
  r.transduced_frequency = params.omega_c2 + sol.delta;
  return r;
}

std::vector<double> uniform_grid(double x_min, double x_max, int n_points) {
  if (n_points < 2) throw InvalidParameter("n_points must be >= 2");
  if (!(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max)) {
    throw InvalidParameter("grid requires finite x_min < x_max");
  }
  std::vector<double> grid(static_cast<std::size_t>(n_points));
  const double step = (x_max - x_min) / (n_points - 1);
  for (int k = 0; k < n_points; ++k) grid[k] = x_min + k * step;
  grid.back() = x_max;
  return grid;
}

std::vector<ProbeResponse> sweep_probe(const WorkingPoint& wp,
                                       const SystemParams& params,
                                       double x_min, double x_max,
                                       int n_points, bool rwa) {
  const std::vector<double> grid = uniform_grid(x_min, x_max, n_points);
  std::vector<ProbeResponse> rows;
  rows.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    try {
      const auto sol =
          solve_sidebands(wp, params, params.omega_m + grid[k], rwa);
      rows.push_back(probe_outputs(sol, wp, params));
    } catch (const SingularSystem& e) {
      throw SingularSystem("row " + std::to_string(k) + ": " + e.what(),
                           e.detuning());
    }
  }
  return rows;
}

std::vector<ProbeResponse> sweep_probe(const SystemParams& params,
                                       const DriveConfig& drives,
                                       double x_min, double x_max,
                                       int n_points, bool rwa,
                                       const WorkingPointOptions& options) {
  const WorkingPoint wp = solve_working_point(params, drives, options);
  return sweep_probe(wp, params, x_min, x_max, n_points, rwa);
}

}  // namespace oems
