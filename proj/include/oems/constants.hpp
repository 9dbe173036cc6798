#ifndef OEMS_CONSTANTS_HPP_
#define OEMS_CONSTANTS_HPP_

#include <complex>
#include <numbers>

namespace oems {

/// Reduced Planck constant [J s].
inline constexpr double kHbar = 1.054571817e-34;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Convert a frequency quoted in Hz to an angular frequency in rad/s.
constexpr double hz(double f) { return kTwoPi * f; }

template <typename Scalar>
using Complex = std::complex<Scalar>;

using cdouble = std::complex<double>;

}  // namespace oems

#endif  // OEMS_CONSTANTS_HPP_
