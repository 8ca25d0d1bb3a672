#include "afdm/scene.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace afdm {

double rayleigh_distance(const SceneConfig& scene) {
  const double d = scene.aperture();
  return 2.0 * d * d / scene.wavelength();
}

double fresnel_limit(const SceneConfig& scene) {
  const double d = scene.aperture();
  return 0.62 * std::sqrt(d * d * d / scene.wavelength());
}

bool is_near_field(const Target& t, const SceneConfig& scene) {
  return std::isfinite(t.range) && t.range <= rayleigh_distance(scene);
}

double steering_rho(double theta, const SceneConfig& scene) {
  return -(kTwoPi * scene.rx_spacing() / scene.wavelength()) * std::sin(theta);
}

double steering_xi(double theta, double range, const SceneConfig& scene) {
  if (!std::isfinite(range)) return 0.0;
  const double d = scene.rx_spacing();
  return kPi * d * d * std::cos(theta) / (scene.wavelength() * range * range);
}

CVec rx_steering(double theta, double range, const SceneConfig& scene) {
  if (!(theta > -kPi / 2.0 && theta < kPi / 2.0))
    throw std::invalid_argument("rx_steering: theta out of (-pi/2, pi/2)");
  const double rho = steering_rho(theta, scene);
  const double xi = steering_xi(theta, range, scene);
  const int gx = scene.gx;
  CVec a(2 * gx + 1);
  for (int g = -gx; g <= gx; ++g) {
    const double gd = static_cast<double>(g);
    a[g + gx] = std::polar(1.0, gd * rho + gd * gd * xi);
  }
  return a;
}

CVec tx_steering(double phi, int k_tx) {
  CVec a(k_tx);
  const double s = std::sin(phi);
  for (int k = 0; k < k_tx; ++k) a[k] = std::polar(1.0, -kPi * k * s);
  return a;
}

Complex tx_generator(double phi) { return std::polar(1.0, -kPi * std::sin(phi)); }

double normalized_delay(const Target& t, const AfdmConfig& cfg) {
  return t.tau / cfg.sample_interval();
}

double normalized_doppler(const Target& t, const AfdmConfig& cfg) {
  return t.f_d / cfg.delta_f;
}

void validate_target(const Target& t, const SceneConfig& scene, const AfdmConfig& cfg) {
  if (!(t.theta > -kPi / 2.0 && t.theta < kPi / 2.0))
    throw std::invalid_argument("target: theta out of (-pi/2, pi/2)");
  if (!(t.phi > -kPi / 2.0 && t.phi < kPi / 2.0))
    throw std::invalid_argument("target: phi out of (-pi/2, pi/2)");
  if (std::isfinite(t.range) && t.range < fresnel_limit(scene))
    throw std::invalid_argument("target: range below the Fresnel limit " +
                                std::to_string(fresnel_limit(scene)));
  const double beta = normalized_delay(t, cfg);
  if (beta < 0.0 || beta > cfg.ell_max + 0.5)
    throw std::invalid_argument("target: normalized delay outside [0, ell_max + 1/2]");
  const double nu = normalized_doppler(t, cfg);
  if (std::abs(nu) > cfg.alpha_max + 0.5)
    throw std::invalid_argument("target: normalized Doppler outside +-(alpha_max + 1/2)");
}

void validate_scene(const SceneConfig& scene, const AfdmConfig& cfg) {
  if (scene.k_tx < 1) throw std::invalid_argument("scene: k_tx must be >= 1");
  if (scene.gx < 0) throw std::invalid_argument("scene: gx must be >= 0");
  if (scene.targets.empty()) throw std::invalid_argument("scene: empty target list");
  for (const Target& t : scene.targets) validate_target(t, scene, cfg);
}

}  // namespace afdm
