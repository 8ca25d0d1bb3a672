#include "afdm/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "afdm/fft.hpp"

namespace afdm {
namespace {

// chirp-periodic continuation: folds u into [0, N) and accumulates the
// prefix phase rule in whole turns; exact zero turns at integer arguments
double fold_offset(double u, const AfdmConfig& cfg, double& turns) {
  const int n = cfg.n_sub;
  turns = 0.0;
  while (u >= n) {
    u -= n;
    // s(v + N) = s(v) * exp(+j*2*pi*c1*(N^2 + 2*N*v))
    turns += cfg.c1.frac_times(static_cast<long long>(n) * n) +
             static_cast<double>(cfg.daf_delay_stride()) * u;
  }
  while (u < 0.0) {
    turns -= cfg.c1.frac_times(static_cast<long long>(n) * n) +
             static_cast<double>(cfg.daf_delay_stride()) * u;
    u += n;
  }
  return u;
}

}  // namespace

CVec doppler_diag(double nu, int n_sub) {
  CVec d(n_sub);
  for (int n = 0; n < n_sub; ++n)
    d[n] = cis_turns(-std::fmod(static_cast<double>(n) * nu / n_sub, 1.0));
  return d;
}

CVec delay_spectrum(double beta, int n_sub) {
  CVec d(n_sub);
  for (int n = 0; n < n_sub; ++n)
    d[n] = cis_turns(-std::fmod(static_cast<double>(n) * beta / n_sub, 1.0));
  return d;
}

CVec apply_delay(const CVec& v, double beta) {
  CVec w = v;
  dft_unitary(w);
  w = w.cwiseProduct(delay_spectrum(beta, static_cast<int>(v.size())));
  idft_unitary(w);
  return w;
}

Complex transmit_waveform(const DafFrame& frame, const AfdmConfig& cfg, double u) {
  const int n = cfg.n_sub;
  if (frame.symbols.size() != n)
    throw std::invalid_argument("transmit_waveform: frame length != n_sub");
  double wrap_turns = 0.0;
  u = fold_offset(u, cfg, wrap_turns);
  const double c1 = cfg.c1.value();
  const double quad = c1 * u * u;
  Complex acc(0.0, 0.0);
  for (int m = 0; m < n; ++m) {
    const double f = 2.0 * c1 * u + static_cast<double>(m) / n;  // inst. frequency
    const double q = std::floor(f);                              // band-fold count
    const double turns = quad + cfg.c2 * static_cast<double>(m) * m +
                         u * static_cast<double>(m) / n - q * u;
    acc += frame.symbols[m] * cis_turns(std::fmod(turns, 1.0));
  }
  return acc * (cis_turns(std::fmod(wrap_turns, 1.0)) / std::sqrt(static_cast<double>(n)));
}

CVec path_time_response(const DafFrame& frame, const AfdmConfig& cfg, double beta,
                        double nu) {
  const int n = cfg.n_sub;
  const CVec s = idaft_vec(frame.symbols, cfg);
  return apply_delay(s, -beta).cwiseProduct(doppler_diag(nu, n));
}

CVec daf_response(double beta, double nu, const DafFrame& frame,
                  const AfdmConfig& cfg) {
  return daft_vec(path_time_response(frame, cfg, beta, nu), cfg);
}

CVec daf_response(const Target& t, const DafFrame& frame, const AfdmConfig& cfg) {
  return daf_response(normalized_delay(t, cfg), normalized_doppler(t, cfg), frame, cfg);
}

double daf_path_location(double beta, double nu, const AfdmConfig& cfg) {
  const double loc =
      std::fmod(static_cast<double>(cfg.daf_delay_stride()) * beta - nu, cfg.n_sub);
  return loc < 0.0 ? loc + cfg.n_sub : loc;
}

Tensor3 gaussian_tensor(int g, int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
  Tensor3 w(g, n, k);
  for (int kk = 0; kk < k; ++kk)
    for (int mm = 0; mm < n; ++mm)
      for (int gg = 0; gg < g; ++gg) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        w.at(gg, mm, kk) = Complex(re, im);
      }
  return w;
}

SynthesisResult synthesize_tensor(const SceneConfig& scene, const DafFrame& frame,
                                  const AfdmConfig& cfg,
                                  std::optional<double> snr_db, std::uint64_t seed) {
  validate_scene(scene, cfg);
  const int g = scene.g_rx();
  const int n = cfg.n_sub;
  const int k = scene.k_tx;
  const int rank = static_cast<int>(scene.targets.size());

  CMat a_r(g, rank), b_c(n, rank), a_t(k, rank);
  CVec gamma(rank);
  for (int r = 0; r < rank; ++r) {
    const Target& t = scene.targets[r];
    a_r.col(r) = rx_steering(t.theta, t.range, scene);
    b_c.col(r) = daf_response(t, frame, cfg);
    a_t.col(r) = tx_steering(t.phi, k);
    gamma[r] = t.gamma;
  }

  SynthesisResult out;
  out.clean = cp_reconstruct(gamma, a_r, b_c, a_t);
  if (!snr_db) {
    out.noisy = out.clean;
    out.sigma2 = 0.0;
    return out;
  }

  Tensor3 w = gaussian_tensor(g, n, k, seed);
  const double signal = out.clean.norm();
  const double target_noise = signal * std::pow(10.0, -(*snr_db) / 20.0);
  const double scale = target_noise / w.norm();
  w *= Complex(scale, 0.0);
  out.noisy = out.clean;
  out.noisy += w;
  out.sigma2 = target_noise * target_noise / static_cast<double>(out.clean.size());
  return out;
}

}  // namespace afdm
