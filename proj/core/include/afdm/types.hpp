// types.hpp - shared scalar and linear-algebra aliases

#pragma once

#include <complex>
#include <Eigen/Dense>

namespace afdm {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// e^{j*phase_turns*2*pi} from a phase expressed in whole turns.
inline Complex cis_turns(double turns) {
  return std::polar(1.0, kTwoPi * turns);
}

}  // namespace afdm
