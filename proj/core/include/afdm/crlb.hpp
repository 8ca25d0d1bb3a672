// crlb.hpp - Fisher information and Cramer-Rao bounds for the scene
// parameters Psi = [theta, r0, tau, f_d, phi, gamma] (R entries each)
//
// Physical units throughout: radians, meters, seconds, Hz; the chain rule
// through beta = tau/T_s and nu = f_d/delta_f is already applied, so the
// bounds compare directly against harness NMSE numerators.

#pragma once

#include <array>
#include <vector>

#include "afdm/channel.hpp"
#include "afdm/config.hpp"
#include "afdm/scene.hpp"
#include "afdm/waveform.hpp"

namespace afdm {

/// Entry g of d a_R / d theta: j*(g*drho + g^2*dxi) * a_R[g].
CVec d_ar_dtheta(const Target& t, const SceneConfig& scene);

/// Entry g of d a_R / d r0; identically zero for a far-field target.
CVec d_ar_dr0(const Target& t, const SceneConfig& scene);

/// d b / d tau = (1/T_s) * d b / d beta through the operator chain.
CVec d_b_dtau(const Target& t, const DafFrame& frame, const AfdmConfig& cfg);

/// d b / d f_d = (1/delta_f) * d b / d nu.
CVec d_b_dfd(const Target& t, const DafFrame& frame, const AfdmConfig& cfg);

/// Entry k of d a_T / d phi: -j*pi*k*cos(phi)*exp(-j*pi*k*sin(phi)).
CVec d_at_dphi(const Target& t, int k_tx);

/**
 * Cross-covariance of white DAF-domain noise between two mode
 * vectorizations: C_{wp,wq} = E{vec(W_(p)^H) vec(W_(q)^T)^T} = sigma2 * P
 * with P the permutation pairing identical (g, m, k) entries. Exposed as
 * an operator; dense() is intended for small validation dims only.
 */
struct NoiseCrossCov {
  int p = 1;
  int q = 2;
  std::array<int, 3> dims{};  // (G, N, K)
  double sigma2 = 1.0;

  long long size() const {
    return static_cast<long long>(dims[0]) * dims[1] * dims[2];
  }
  /// Flat index of (g, m, k) in the mode vectorization order.
  long long index(int mode, int g, int m, int k) const;
  /// rows of m are in mode-q order; returns sigma2-scaled rows in mode-p order.
  CMat apply(const CMat& m) const;
  CMat dense() const;
};

NoiseCrossCov noise_cross_cov(int p, int q, std::array<int, 3> dims, double sigma2);

enum class GammaConvention {
  kComplex,        // single-term complex-parameter blocks (as derived)
  kRealImagSplit,  // gamma split into two real parameters
};

struct FimInput {
  SceneConfig scene;
  AfdmConfig cfg;
  DafFrame frame;
  double sigma2 = 1.0;
  GammaConvention gamma_convention = GammaConvention::kComplex;
};

/// Assembles the full FIM (6R x 6R, or 7R x 7R under the split gamma
/// convention) from the analytic derivative factors; Hermitian by
/// construction and proportional to 1/sigma2.
CMat assemble_fim(const FimInput& input);

struct CrlbReport {
  RVec crlb_theta;
  RVec crlb_r0;    // +inf for far-field targets (excluded from inversion)
  RVec crlb_tau;
  RVec crlb_fd;
  RVec crlb_phi;
  RVec crlb_gamma;
  CMat fim;
  double condition_number = 0.0;
  bool singular = false;  // pseudo-inverse cutoff was hit
};

/**
 * CRB = pseudo-inverse of the FIM with relative eigenvalue cutoff 1e-12.
 * far_field[r] marks targets whose r0 row/column is null and skipped.
 */
CrlbReport crlb_bounds(const CMat& fim, const std::vector<bool>& far_field,
                       GammaConvention convention = GammaConvention::kComplex);

/// assemble_fim + crlb_bounds with the far-field mask taken from the scene.
CrlbReport compute_crlb(const FimInput& input);

}  // namespace afdm
