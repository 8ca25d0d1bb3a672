#include "afdm/waveform.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "afdm/fft.hpp"

namespace afdm {

CVec chirp_diag(const Rational& c1, int n) {
  CVec d(n);
  for (int i = 0; i < n; ++i) {
    const double turns = c1.frac_times(static_cast<long long>(i) * i);
    d[i] = cis_turns(-turns);
  }
  return d;
}

CVec chirp_diag(double c2, int n) {
  CVec d(n);
  for (int i = 0; i < n; ++i) {
    const double turns = std::fmod(c2 * static_cast<double>(i) * i, 1.0);
    d[i] = cis_turns(-turns);
  }
  return d;
}

CVec idaft_vec(const CVec& x, const AfdmConfig& cfg) {
  if (x.size() != cfg.n_sub)
    throw std::invalid_argument("idaft: frame length != n_sub");
  CVec v = x.cwiseProduct(chirp_diag(cfg.c2, cfg.n_sub).conjugate());
  idft_unitary(v);
  v = v.cwiseProduct(chirp_diag(cfg.c1, cfg.n_sub).conjugate());
  return v;
}

CVec daft_vec(const CVec& s, const AfdmConfig& cfg) {
  if (s.size() != cfg.n_sub)
    throw std::invalid_argument("daft: time length != n_sub (remove the prefix first)");
  CVec v = s.cwiseProduct(chirp_diag(cfg.c1, cfg.n_sub));
  dft_unitary(v);
  v = v.cwiseProduct(chirp_diag(cfg.c2, cfg.n_sub));
  return v;
}

TimeFrame idaft(const DafFrame& frame, const AfdmConfig& cfg) {
  return TimeFrame{idaft_vec(frame.symbols, cfg)};
}

DafFrame daft(const TimeFrame& time, const AfdmConfig& cfg) {
  return DafFrame{daft_vec(time.samples, cfg)};
}

TimeFrame append_cpp(const TimeFrame& time, const AfdmConfig& cfg) {
  const int n = cfg.n_sub;
  const int l = cfg.l_cpp;
  if (time.samples.size() != n)
    throw std::invalid_argument("append_cpp: time length != n_sub");
  CVec out(n + l);
  out.tail(n) = time.samples;
  for (int i = 0; i < l; ++i) {
    const long long nn = static_cast<long long>(i) - l;  // n in [-l, -1]
    // s[n] = s[N+n] * exp(-j*2*pi*c1*(N^2 + 2*N*n)); exact phase reduction
    const double turns =
        cfg.c1.frac_times(static_cast<long long>(n) * n + 2LL * n * nn);
    out[i] = time.samples[static_cast<int>(n + nn)] * cis_turns(-turns);
  }
  return TimeFrame{out};
}

TimeFrame remove_cpp(const TimeFrame& time, const AfdmConfig& cfg) {
  if (time.samples.size() != cfg.n_sub + cfg.l_cpp)
    throw std::invalid_argument("remove_cpp: unexpected frame length");
  return TimeFrame{time.samples.tail(cfg.n_sub)};
}

DafFrame gen_qam_frame(int order, std::uint64_t seed, int n_sub) {
  int side = 0;
  switch (order) {
    case 4: side = 2; break;
    case 16: side = 4; break;
    case 64: side = 8; break;
    default:
      throw std::invalid_argument("gen_qam_frame: unsupported QAM order");
  }
  // E{|x|^2} over the unnormalized grid is 2*(order-1)/3
  const double scale = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(0, side - 1);
  CVec sym(n_sub);
  for (int i = 0; i < n_sub; ++i) {
    const double re = 2.0 * level(rng) - (side - 1);
    const double im = 2.0 * level(rng) - (side - 1);
    sym[i] = Complex(re, im) * scale;
  }
  return DafFrame{sym};
}

}  // namespace afdm
