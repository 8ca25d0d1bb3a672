// estimators.hpp - parameter extraction from the recovered factor matrices
//
// AoD comes straight from the transmit Vandermonde generator. AoA uses the
// anti-diagonal Toeplitz trick that cancels the quadratic (range) phase, so
// near-field and far-field columns go through the same search. Delay and
// Doppler run the two-stage scheme: pulse compression for the integer
// lattice point, then alternating golden-section refinement of the
// fractional parts against the known transmit frame.

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "afdm/channel.hpp"
#include "afdm/config.hpp"
#include "afdm/cpd.hpp"
#include "afdm/scene.hpp"
#include "afdm/waveform.hpp"

namespace afdm {

struct AoaSearchConfig {
  double grid_step = deg2rad(0.1);  // search resolution over (-pi/2, pi/2)
  double d_over_lambda = 0.25;      // receive spacing in wavelengths
  bool refine = true;               // parabolic + bounded local polish
};

/// phi = arcsin(angle(z) / -pi) for a unit-modulus generator.
double estimate_aod(Complex generator);

/// (Gx+1) x (Gx+1) Toeplitz matrix from the anti-diagonal of a*a^H. For a
/// steering input the quadratic phase cancels pairwise and the result is
/// aa_R(theta) aa_R(theta)^H with aa_R(theta) = [1, e^{j2rho}, ...].
CMat aoa_toeplitz(const CVec& a_r_col);

/// Propagator-style projection search over the theta grid; G must be odd.
double estimate_aoa(const CVec& a_r_col, const AoaSearchConfig& cfg);

struct GoldenResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  double width = 0.0;
};

/// Derivative-free maximization on [lo, hi]; the bracket shrinks by the
/// golden ratio (sqrt(5)-1)/2 per iteration.
GoldenResult golden_max(const std::function<double(double)>& f, double lo,
                        double hi, double width_tol = 1e-4, int max_iter = 40);

struct PulseCompression {
  CVec u;          // matched profile
  RVec magnitude;  // |u|
  int peak_index = 0;  // global argmax, ties toward the smaller index
};

/// 1D pulse compression of a recovered DAF profile against the transmit
/// frame; the peak index estimates loc = (2*N*c1*beta - nu) mod N.
PulseCompression pulse_compress(const CVec& b_hat, const DafFrame& frame,
                                const AfdmConfig& cfg);

/// Nearest-lattice decode of a peak location into integer (ell, alpha);
/// ell clipped to [0, ell_max], alpha to +-(alpha_max + k_v).
std::pair<int, int> decode_integer(double loc_hat, const AfdmConfig& cfg);

struct DelayDopplerEstimate {
  double beta_hat = 0.0;
  double nu_hat = 0.0;
  double tau_hat = 0.0;  // beta_hat * T_s
  double fd_hat = 0.0;   // nu_hat * delta_f
  double loc_hat = 0.0;
  int iterations = 0;    // total inner golden-section iterations
  std::vector<std::pair<double, double>> rounds;  // (beta, nu) after each outer pass
};

/// Two-stage refinement: alternating golden-section maximization of the
/// time-domain matched filter |(Delta_g Pi^-l s)^H y|^2, one unit wide in
/// each coordinate around the integer initialization, t_outer passes.
DelayDopplerEstimate refine_delay_doppler(const CVec& b_hat, const DafFrame& frame,
                                          const AfdmConfig& cfg,
                                          std::pair<int, int> init, int t_outer = 3);

struct TargetEstimate {
  double theta = 0.0;
  double phi = 0.0;
  double beta = 0.0;
  double nu = 0.0;
  double tau = 0.0;
  double f_d = 0.0;
  Complex generator;
  DelayDopplerEstimate delay_doppler;
};

struct EstimationReport {
  std::vector<TargetEstimate> targets;  // generator-phase order
  int rank = 0;
  double cpd_fit = 0.0;  // relative residual of the truncated basis
};

/**
 * Full pipeline on a received cube: decomposition (structured CPD, model
 * order from MDL when rank == 0), then per-target AoD, AoA and
 * delay/Doppler. Throws DecompositionError when the cube does not support
 * the requested rank.
 */
EstimationReport estimate_all(const Tensor3& t, const DafFrame& frame,
                              const AfdmConfig& cfg, const SceneConfig& scene,
                              int rank = 0,
                              const AoaSearchConfig& aoa = AoaSearchConfig{},
                              int t_outer = 3,
                              const SmoothingPlan* plan = nullptr);

}  // namespace afdm
