#ifndef OEMS_ANALYTIC_HPP_
#define OEMS_ANALYTIC_HPP_

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "oems/errors.hpp"
#include "oems/polynomial.hpp"

namespace oems {

/// Coefficients of the rotating-wave probe response
///
///   E_L(x) = 2i kappa1 / ((x + i kappa1)
///                         - s1 / ((x + i gamma_m/2) - s2 / (x + i kappa2)))
///
/// with s_i = g_i^2 |a_i0|^2 / 2 and x = delta - omega_m.
template <typename Scalar>
struct RwaCoefficients {
  Scalar kappa1{};
  Scalar kappa2{};
  Scalar gamma_m{};
  Scalar s1{};
  Scalar s2{};

  static RwaCoefficients from_cooperativities(Scalar c1, Scalar c2,
                                              Scalar kappa1, Scalar kappa2,
                                              Scalar gamma_m) {
    return {kappa1, kappa2, gamma_m, c1 * kappa1 * gamma_m / 2,
            c2 * kappa2 * gamma_m / 2};
  }
  Scalar c1() const { return 2 * s1 / (kappa1 * gamma_m); }
  Scalar c2() const { return 2 * s2 / (kappa2 * gamma_m); }
};

template <typename Scalar>
std::complex<Scalar> response_rwa(Scalar x, const RwaCoefficients<Scalar>& c) {
  using C = std::complex<Scalar>;
  const C inner_pole(x, c.kappa2);
  if (inner_pole == C(0) && c.s2 != 0) {
    throw SingularSystem("response pole at x", static_cast<double>(x));
  }
  const C mech = C(x, c.gamma_m / 2) - (c.s2 == 0 ? C(0) : c.s2 / inner_pole);
  if (mech == C(0) && c.s1 != 0) {
    throw SingularSystem("response pole at x", static_cast<double>(x));
  }
  const C denom = C(x, c.kappa1) - (c.s1 == 0 ? C(0) : c.s1 / mech);
  if (denom == C(0)) {
    throw SingularSystem("response pole at x", static_cast<double>(x));
  }
  return C(0, 2 * c.kappa1) / denom;
}

/// Ascending coefficients of the cleared denominator
///   (x + i k1)(x + i g/2)(x + i k2) - s1 (x + i k2) - s2 (x + i k1)
/// in the variable x / gamma_m.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 1> denominator_coefficients(
    const RwaCoefficients<Scalar>& c) {
  using C = std::complex<Scalar>;
  const Scalar k1 = c.kappa1 / c.gamma_m;
  const Scalar k2 = c.kappa2 / c.gamma_m;
  const Scalar h = Scalar(1) / 2;
  const Scalar t1 = c.s1 / (c.gamma_m * c.gamma_m);
  const Scalar t2 = c.s2 / (c.gamma_m * c.gamma_m);
  Eigen::Matrix<C, 4, 1> p;
  p(0) = C(0, -(k1 * h * k2 + t1 * k2 + t2 * k1));
  p(1) = C(-(k1 * h + h * k2 + k1 * k2) - t1 - t2, 0);
  p(2) = C(0, k1 + h + k2);
  p(3) = C(1, 0);
  return p;
}

enum class PoleRegime {
  eit,                   ///< all poles purely imaginary
  normal_mode_splitting  ///< some pole has a real part
};

template <typename Scalar>
struct PoleSet {
  /// Poles in x [rad/s], ascending |Im| unless produced by root tracking.
  std::array<std::complex<Scalar>, 3> roots;
  PoleRegime regime = PoleRegime::eit;
};

/// |Re| <= 1e-6 max(|Im|, gamma_m) counts as purely imaginary.
template <typename Scalar>
PoleRegime classify(const std::array<std::complex<Scalar>, 3>& roots,
                    Scalar gamma_m) {
  for (const auto& r : roots) {
    if (std::abs(r.real()) > Scalar(1e-6) * std::max(std::abs(r.imag()), gamma_m))
      return PoleRegime::normal_mode_splitting;
  }
  return PoleRegime::eit;
}

/// Companion-matrix eigenvalues of the normalized cubic, one Newton polish
/// each, rescaled to rad/s.
template <typename Scalar>
PoleSet<Scalar> denominator_roots(const RwaCoefficients<Scalar>& c) {
  const auto coeffs = denominator_coefficients(c);
  const CVector<Scalar> r = polynomial_roots(coeffs, 1);
  PoleSet<Scalar> out;
  for (int k = 0; k < 3; ++k) out.roots[k] = r(k) * c.gamma_m;
  std::sort(out.roots.begin(), out.roots.end(), [](const auto& a, const auto& b) {
    return std::abs(a.imag()) < std::abs(b.imag());
  });
  out.regime = classify(out.roots, c.gamma_m);
  return out;
}

/// Largest relative deviation from the three Vieta relations of the cubic.
template <typename Scalar>
Scalar vieta_residual(const PoleSet<Scalar>& p, const RwaCoefficients<Scalar>& c) {
  using C = std::complex<Scalar>;
  const auto q = denominator_coefficients(c);
  const auto& r = p.roots;
  const C z0 = r[0] / c.gamma_m, z1 = r[1] / c.gamma_m, z2 = r[2] / c.gamma_m;
  auto rel = [](C got, C want) {
    const Scalar scale = std::abs(want);
    return scale == 0 ? std::abs(got) : std::abs(got - want) / scale;
  };
  return std::max({rel(z0 + z1 + z2, -q(2)), rel(z0 * z1 + z1 * z2 + z0 * z2, q(1)),
                   rel(z0 * z1 * z2, -q(0))});
}

/// E_L rebuilt from its poles by partial fractions.
template <typename Scalar>
std::complex<Scalar> response_from_poles(Scalar x, const PoleSet<Scalar>& p,
                                         const RwaCoefficients<Scalar>& c) {
  using C = std::complex<Scalar>;
  auto numerator = [&](C z) {
    return C(0, 2 * c.kappa1) *
           ((z + C(0, c.gamma_m / 2)) * (z + C(0, c.kappa2)) - c.s2);
  };
  C sum(0);
  for (int k = 0; k < 3; ++k) {
    C dp(1);
    for (int j = 0; j < 3; ++j)
      if (j != k) dp *= p.roots[k] - p.roots[j];
    sum += numerator(p.roots[k]) / (dp * (C(x) - p.roots[k]));
  }
  return sum;
}

/// Reorders `next` to minimize the summed distance to `prev` over all six
/// assignments.
template <typename Scalar>
std::array<std::complex<Scalar>, 3> match_roots(
    const std::array<std::complex<Scalar>, 3>& prev,
    std::array<std::complex<Scalar>, 3> next) {
  std::array<int, 3> perm{0, 1, 2};
  std::array<int, 3> best = perm;
  Scalar best_cost = std::numeric_limits<Scalar>::infinity();
  do {
    Scalar cost = 0;
    for (int k = 0; k < 3; ++k) cost += std::abs(prev[k] - next[perm[k]]);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {next[best[0]], next[best[1]], next[best[2]]};
}

/// Roots along a coefficient path, continued by nearest-neighbour matching.
/// Trajectory k starts at the k-th smallest |Im| root of the first point.
template <typename Scalar>
std::vector<PoleSet<Scalar>> track_roots(
    const std::vector<RwaCoefficients<Scalar>>& path) {
  std::vector<PoleSet<Scalar>> out;
  out.reserve(path.size());
  for (const auto& c : path) {
    PoleSet<Scalar> p = denominator_roots(c);
    if (!out.empty()) p.roots = match_roots(out.back().roots, p.roots);
    out.push_back(p);
  }
  return out;
}

template <typename Scalar>
struct EiaSplitting {
  std::complex<Scalar> gamma_plus;
  std::complex<Scalar> gamma_minus;
  Scalar gamma_eia_approx{};  ///< kappa2 + s2 / Gamma_EIT
  Scalar validity_ratio{};    ///< 4 s2 / Gamma_EIT^2
  bool approx_valid = false;  ///< validity_ratio < 0.1
};

/// Splitting of the transparency pole by the second coupling field. All
/// Gamma values are half-widths (pole |Im|).
template <typename Scalar>
EiaSplitting<Scalar> eia_splitting(Scalar gamma_eit, Scalar s2, Scalar kappa2) {
  if (!(gamma_eit > 0)) throw InvalidParameter("gamma_eit must be > 0");
  using C = std::complex<Scalar>;
  EiaSplitting<Scalar> out;
  const C root = std::sqrt(C(gamma_eit * gamma_eit - 4 * s2));
  out.gamma_plus = C(gamma_eit / 2) + root / Scalar(2);
  out.gamma_minus = C(gamma_eit / 2) - root / Scalar(2);
  out.gamma_eia_approx = kappa2 + s2 / gamma_eit;
  out.validity_ratio = 4 * s2 / (gamma_eit * gamma_eit);
  out.approx_valid = out.validity_ratio < Scalar(0.1);
  return out;
}

template <typename Scalar>
struct PeakHeight {
  Scalar exact{};                 ///< 2 (1 + C2) / (1 + C1 + C2)
  std::optional<Scalar> approx;   ///< 2 / (1 + C1 / C2), needs C2 > 0
};

/// Line-center value of E_L.
template <typename Scalar>
PeakHeight<Scalar> peak_height(Scalar c1, Scalar c2) {
  if (!(c1 >= 0 && c2 >= 0)) throw InvalidParameter("cooperativities must be >= 0");
  PeakHeight<Scalar> h;
  h.exact = 2 * (1 + c2) / (1 + c1 + c2);
  if (c2 > 0) h.approx = 2 / (1 + c1 / c2);
  return h;
}

}  // namespace oems

#endif  // OEMS_ANALYTIC_HPP_
