#ifndef OEMS_POLYNOMIAL_HPP_
#define OEMS_POLYNOMIAL_HPP_

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>

#include "oems/errors.hpp"

namespace oems {

template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Horner evaluation of c[0] + c[1] z + ... + c[n] z^n and its derivative.
template <typename Derived, typename T>
void horner(const Eigen::MatrixBase<Derived>& c, const T& z, T& value,
            T& derivative) {
  value = T(0);
  derivative = T(0);
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) {
    derivative = derivative * z + value;
    value = value * z + T(c(k));
  }
}

template <typename Derived, typename T>
T horner(const Eigen::MatrixBase<Derived>& c, const T& z) {
  T v, d;
  horner(c, z, v, d);
  return v;
}

/// Roots of the polynomial with ascending coefficients c (c(n) != 0) as the
/// eigenvalues of its companion matrix, each refined by `polish_steps`
/// Newton iterations. A Newton step is kept only if it lowers |p(z)|.
template <typename Derived>
CVector<typename Eigen::NumTraits<typename Derived::Scalar>::Real>
polynomial_roots(const Eigen::MatrixBase<Derived>& c, int polish_steps = 1) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using C = std::complex<Real>;
  const Eigen::Index n = c.size() - 1;
  if (n < 1) throw InvalidParameter("polynomial must have degree >= 1");
  const C lead = C(c(n));
  if (lead == C(0)) throw InvalidParameter("leading coefficient is zero");

  Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> companion =
      Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = C(1);
  for (Eigen::Index i = 0; i < n; ++i) companion(i, n - 1) = -C(c(i)) / lead;

  Eigen::ComplexEigenSolver<Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>>
      solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("companion eigenvalue iteration failed", 0.0);
  }
  CVector<Real> roots = solver.eigenvalues();

  for (Eigen::Index k = 0; k < n; ++k) {
    for (int step = 0; step < polish_steps; ++step) {
      C value, deriv;
      horner(c, roots(k), value, deriv);
      if (deriv == C(0)) break;
      const C candidate = roots(k) - value / deriv;
      if (std::abs(horner(c, candidate)) < std::abs(value)) {
        roots(k) = candidate;
      } else {
        break;
      }
    }
  }
  return roots;
}

}  // namespace oems

#endif  // OEMS_POLYNOMIAL_HPP_
