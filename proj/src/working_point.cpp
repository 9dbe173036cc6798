#include "oems/working_point.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "oems/errors.hpp"
#include "oems/polynomial.hpp"

namespace oems {

namespace {

// Static force balance F(q) = omega_m q - g1 n1(q) + g2 n2(q) at fixed bare
// detunings.
struct ForceBalance {
  double omega_m, g1, g2, kappa1, kappa2, d1, d2, e1sq, e2sq;

  double n1(double q) const {
    const double det = d1 - g1 * q;
    return e1sq / (kappa1 * kappa1 + det * det);
  }
  double n2(double q) const {
    const double det = d2 + g2 * q;
    return e2sq / (kappa2 * kappa2 + det * det);
  }
  double operator()(double q) const {
    return omega_m * q - g1 * n1(q) + g2 * n2(q);
  }
  double derivative(double q) const {
    const double det1 = d1 - g1 * q;
    const double a = kappa1 * kappa1 + det1 * det1;
    const double det2 = d2 + g2 * q;
    const double b = kappa2 * kappa2 + det2 * det2;
    const double dn1 = 2.0 * g1 * e1sq * det1 / (a * a);
    const double dn2 = -2.0 * g2 * e2sq * det2 / (b * b);
    return omega_m - g1 * dn1 + g2 * dn2;
  }
  double scale(double q) const {
    return std::max({omega_m * std::abs(q), g1 * n1(q) + g2 * n2(q),
                     std::numeric_limits<double>::min()});
  }
  double relative_residual(double q) const {
    return std::abs((*this)(q)) / scale(q);
  }
  /// Upper bound on |q0| over all solutions.
  double bound() const {
    return (g1 * e1sq / (kappa1 * kappa1) + g2 * e2sq / (kappa2 * kappa2)) /
           omega_m;
  }
};

std::vector<double> poly_mul(const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Newton on F, falling back to bisection whenever a step leaves the current
// sign-change bracket (when one is known).
std::optional<double> polish_root(const ForceBalance& f, double q,
                                  double tolerance, int max_iterations) {
  for (int it = 0; it < max_iterations; ++it) {
    const double value = f(q);
    if (f.relative_residual(q) <= 0.1 * tolerance) return q;
    const double slope = f.derivative(q);
    if (slope == 0.0 || !std::isfinite(slope)) return std::nullopt;
    const double next = q - value / slope;
    if (!std::isfinite(next)) return std::nullopt;
    if (next == q) break;
    q = next;
  }
  if (f.relative_residual(q) <= tolerance) return q;
  return std::nullopt;
}

std::vector<double> polynomial_candidates(const ForceBalance& f) {
  // Clearing denominators gives
  //   omega_m q A(q) B(q) - g1 E1^2 B(q) + g2 E2^2 A(q) = 0,
  // solved in y = q / bound so that all physical roots have |y| <= 1.
  const double s = f.bound();
  const std::vector<double> a = {
      f.kappa1 * f.kappa1 + f.d1 * f.d1, -2.0 * f.d1 * f.g1 * s,
      f.g1 * f.g1 * s * s};
  const std::vector<double> b = {
      f.kappa2 * f.kappa2 + f.d2 * f.d2, 2.0 * f.d2 * f.g2 * s,
      f.g2 * f.g2 * s * s};
  std::vector<double> p = poly_mul({0.0, f.omega_m * s}, poly_mul(a, b));
  const std::vector<double> tb = poly_mul({-f.g1 * f.e1sq}, b);
  const std::vector<double> ta = poly_mul({f.g2 * f.e2sq}, a);
  for (std::size_t k = 0; k < tb.size(); ++k) p[k] += tb[k] + ta[k];

  double cmax = 0.0;
  for (double c : p) cmax = std::max(cmax, std::abs(c));
  if (cmax == 0.0) return {};
  while (p.size() > 1 && std::abs(p.back()) <= 1e-300 * cmax) p.pop_back();
  if (p.size() < 2) return {};

  Eigen::VectorXd coeffs(static_cast<Eigen::Index>(p.size()));
  for (std::size_t k = 0; k < p.size(); ++k) coeffs(k) = p[k] / cmax;
  std::vector<double> out;
  try {
    const CVector<double> roots = polynomial_roots(coeffs, 2);
    for (const auto& r : roots) {
      if (std::abs(r.imag()) <= 1e-4 * std::max(1.0, std::abs(r.real())) &&
          std::abs(r.real()) <= 1.0 + 1e-6) {
        out.push_back(r.real() * s);
      }
    }
  } catch (const ConvergenceError&) {
  }
  return out;
}

}  // namespace

WorkingPoint solve_working_point(const SystemParams& params,
                                 const DriveConfig& drives,
                                 const WorkingPointOptions& options) {
  validate(params);
  validate(drives);

  WorkingPoint wp;
  wp.drive1 = drive_amplitude(drives.p_c1, params.omega_c1, params.kappa1);
  wp.drive2 = drive_amplitude(drives.p_c2, params.omega_c2, params.kappa2);
  const double e1sq = wp.drive1 * wp.drive1;
  const double e2sq = wp.drive2 * wp.drive2;

  if (options.mode == DetuningMode::effective) {
    wp.delta1 = options.target_delta1.value_or(params.omega_m);
    wp.delta2 = options.target_delta2.value_or(params.omega_m);
    wp.n1 = e1sq / (params.kappa1 * params.kappa1 + wp.delta1 * wp.delta1);
    wp.n2 = e2sq / (params.kappa2 * params.kappa2 + wp.delta2 * wp.delta2);
    wp.q0 = (params.g1 * wp.n1 - params.g2 * wp.n2) / params.omega_m;
    wp.delta_bare1 = wp.delta1 + params.g1 * wp.q0;
    wp.delta_bare2 = wp.delta2 - params.g2 * wp.q0;
  } else {
    const ForceBalance f{params.omega_m, params.g1,     params.g2,
                         params.kappa1,  params.kappa2, params.delta_bare1,
                         params.delta_bare2, e1sq,      e2sq};
    std::vector<double> roots;
    if (f.bound() == 0.0) {
      roots.push_back(0.0);
    } else {
      // Damped fixed point q <- (g1 n1(q) - g2 n2(q)) / omega_m.
      double q = 0.0;
      for (int it = 0; it < options.max_iterations; ++it) {
        const double target = (f.g1 * f.n1(q) - f.g2 * f.n2(q)) / f.omega_m;
        q = 0.5 * q + 0.5 * target;
        if (f.relative_residual(q) <= options.tolerance) break;
      }
      std::vector<double> candidates = polynomial_candidates(f);
      candidates.push_back(q);
      for (double c : candidates) {
        auto r = polish_root(f, c, options.tolerance, options.max_iterations);
        if (!r) continue;
        const bool seen = std::any_of(roots.begin(), roots.end(), [&](double x) {
          return std::abs(x - *r) <=
                 1e-7 * std::max(std::abs(x), std::abs(*r)) + 1e-9 * f.bound();
        });
        if (!seen) roots.push_back(*r);
      }
      if (roots.empty()) {
        throw ConvergenceError("working point did not converge",
                               f.relative_residual(q));
      }
    }
    std::sort(roots.begin(), roots.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (roots.size() > 1 &&
        std::abs(std::abs(roots[0]) - std::abs(roots[1])) <=
            1e-12 * std::abs(roots[0])) {
      throw ConvergenceError("ambiguous working point: two roots tie in |q0|",
                             0.0);
    }
    wp.solution_count = static_cast<int>(roots.size());
    wp.q0 = roots.front();
    wp.delta_bare1 = params.delta_bare1;
    wp.delta_bare2 = params.delta_bare2;
    wp.delta1 = params.delta_bare1 - params.g1 * wp.q0;
    wp.delta2 = params.delta_bare2 + params.g2 * wp.q0;
    wp.n1 = f.n1(wp.q0);
    wp.n2 = f.n2(wp.q0);
  }

  wp.a10 = wp.drive1 / cdouble(params.kappa1, wp.delta1);
  wp.a20 = wp.drive2 / cdouble(params.kappa2, wp.delta2);
  return wp;
}

WorkingPointResidual residual(const WorkingPoint& wp,
                              const SystemParams& params) {
  WorkingPointResidual r;
  auto cavity = [](cdouble a, double kappa, double delta, double drive) {
    const double err = std::abs(a * cdouble(kappa, delta) - drive);
    return drive == 0.0 ? err : err / drive;
  };
  r.cavity1 = cavity(wp.a10, params.kappa1, wp.delta1, wp.drive1);
  r.cavity2 = cavity(wp.a20, params.kappa2, wp.delta2, wp.drive2);
  const double n1 = std::norm(wp.a10);
  const double n2 = std::norm(wp.a20);
  const double scale = std::max({params.omega_m * std::abs(wp.q0),
                                 params.g1 * n1 + params.g2 * n2,
                                 std::numeric_limits<double>::min()});
  r.force =
      std::abs(params.omega_m * wp.q0 - params.g1 * n1 + params.g2 * n2) /
      scale;
  return r;
}

}  // namespace oems
