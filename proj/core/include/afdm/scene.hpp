// scene.hpp - array geometry, targets, steering vectors
//
// Receive array: symmetric ULA of G = 2*gx + 1 antennas indexed
// g = -gx..gx with the reference element at g = 0. A finite target range
// puts the quadratic (g^2) phase term into the response; range = +inf is
// the pure far-field limit. The same expression serves both regimes.

#pragma once

#include <limits>
#include <vector>

#include "afdm/config.hpp"
#include "afdm/types.hpp"

namespace afdm {

inline constexpr double kFarField = std::numeric_limits<double>::infinity();

/// One scatterer. Angles in radians, range in meters (+inf encodes pure
/// far field), delay in seconds, Doppler in Hz.
struct Target {
  double theta = 0.0;   // AoA at the receive array
  double phi = 0.0;     // AoD at the transmit array
  double range = kFarField;  // distance to the reference antenna
  double tau = 0.0;     // delay, seconds
  double f_d = 0.0;     // Doppler shift, Hz
  Complex gamma = Complex(1.0, 0.0);  // scattering coefficient
};

struct SceneConfig {
  double fc = 60.0e9;    // carrier, Hz
  double delta_f = 1.0e6;  // subcarrier spacing, Hz
  int k_tx = 8;          // K transmit antennas
  int gx = 50;           // half aperture index; G = 2*gx + 1
  double d_rx = 0.0;     // receive spacing, meters; 0 -> lambda/4 default
  double d_tx = 0.0;     // transmit spacing, meters; 0 -> lambda/2 default
  std::vector<Target> targets;

  double wavelength() const { return kSpeedOfLight / fc; }
  double rx_spacing() const { return d_rx > 0.0 ? d_rx : wavelength() / 4.0; }
  double tx_spacing() const { return d_tx > 0.0 ? d_tx : wavelength() / 2.0; }
  int g_rx() const { return 2 * gx + 1; }
  double aperture() const { return 2.0 * gx * rx_spacing(); }
};

/// 2*D^2/lambda; targets at or below it are near field.
double rayleigh_distance(const SceneConfig& scene);

/// 0.62*sqrt(D^3/lambda), lower validity limit of the quadratic phase model.
double fresnel_limit(const SceneConfig& scene);

bool is_near_field(const Target& t, const SceneConfig& scene);

/// Linear phase rate rho = -(2*pi*d/lambda)*sin(theta).
double steering_rho(double theta, const SceneConfig& scene);

/// Quadratic phase rate xi = (pi*d^2/(lambda*r0^2))*cos(theta); 0 for +inf.
double steering_xi(double theta, double range, const SceneConfig& scene);

/// Receive response, entry g in [-gx, gx]: exp(j*g*rho + j*g^2*xi).
CVec rx_steering(double theta, double range, const SceneConfig& scene);

/// Transmit response, entry k in [0, K): exp(-j*pi*k*sin(phi)).
/// Vandermonde with generator z = exp(-j*pi*sin(phi)).
CVec tx_steering(double phi, int k_tx);

Complex tx_generator(double phi);

/// beta = tau/T_s and nu = f_d/delta_f for the given frame config.
double normalized_delay(const Target& t, const AfdmConfig& cfg);
double normalized_doppler(const Target& t, const AfdmConfig& cfg);

/// Checks angles, range against the Fresnel limit and the delay/Doppler
/// budget of cfg; throws std::invalid_argument on violation.
void validate_target(const Target& t, const SceneConfig& scene, const AfdmConfig& cfg);
void validate_scene(const SceneConfig& scene, const AfdmConfig& cfg);

}  // namespace afdm
