// channel.hpp - delay/Doppler operators and received-cube synthesis
//
// DAF-domain location convention: a path with integer normalized delay
// beta and Doppler nu concentrates its energy at
//     loc = (2*N*c1*beta - nu) mod N,
// i.e. |b[m]| = |x[(m - loc) mod N]| when both fractional parts vanish.
// Fractional shifts use the band-limited (spectral) interpolation of the
// same operators, which keeps the matched-filter surface of the refinement
// stage smooth and unimodal around the truth.
//
// transmit_waveform() additionally exposes the continuous-time segmented
// chirp (instantaneous frequency folding at the band edges with fold count
// q(u, m') = floor(2*c1*u + m'/N)); its integer samples coincide with
// idaft(frame) and it serves as the between-sample reference model in the
// test suite.

#pragma once

#include <cstdint>
#include <optional>

#include "afdm/config.hpp"
#include "afdm/scene.hpp"
#include "afdm/tensor.hpp"
#include "afdm/waveform.hpp"

namespace afdm {

/// diag entries of Delta_nu: exp(-j*2*pi*n*nu/N), n = 0..N-1.
CVec doppler_diag(double nu, int n_sub);

/// Spectrum of the cyclic delay Pi^beta = F^H diag(exp(-j*2*pi*n*beta/N)) F.
CVec delay_spectrum(double beta, int n_sub);

/// v <- Pi^beta v (band-limited shift). Integer beta is an exact cyclic
/// shift by beta samples.
CVec apply_delay(const CVec& v, double beta);

/// Continuous-time transmit waveform at sample offset u (in samples).
/// Integer u reproduces idaft(frame); u outside [0, N) is reached through
/// the chirp-periodic continuation.
Complex transmit_waveform(const DafFrame& frame, const AfdmConfig& cfg, double u);

/// Time-domain echo of one path: r[n] = exp(-j*2*pi*n*nu/N) * s[n + beta]
/// with the band-limited fractional shift.
CVec path_time_response(const DafFrame& frame, const AfdmConfig& cfg, double beta,
                        double nu);

/// DAF-domain profile b(beta, nu) of the transmitted frame.
CVec daf_response(double beta, double nu, const DafFrame& frame,
                  const AfdmConfig& cfg);
CVec daf_response(const Target& t, const DafFrame& frame, const AfdmConfig& cfg);

/// (2*N*c1*beta - nu) mod N, in [0, N).
double daf_path_location(double beta, double nu, const AfdmConfig& cfg);

struct SynthesisResult {
  Tensor3 noisy;
  Tensor3 clean;
  double sigma2 = 0.0;  // realized per-entry noise variance
};

/**
 * Builds the G x N x K received cube as a sum of gamma_r * a_R o b_r o a_T
 * outer products and, when snr_db is set, adds circular white Gaussian
 * noise rescaled so that ||clean||^2 / ||noise||^2 hits the requested SNR
 * exactly for this realization.
 */
SynthesisResult synthesize_tensor(const SceneConfig& scene, const DafFrame& frame,
                                  const AfdmConfig& cfg,
                                  std::optional<double> snr_db, std::uint64_t seed);

/// White circular complex Gaussian cube with unit per-entry variance.
Tensor3 gaussian_tensor(int g, int n, int k, std::uint64_t seed);

}  // namespace afdm
