// waveform.hpp - DAF-domain frames, the DAFT/IDAFT pair and prefix handling
//
// Conventions (matrix form, F = unitary DFT):
//   idaft: s = Lc1^H F^H Lc2^H x       with Lc = diag(exp(-j*2*pi*c*n^2))
//   daft : x = Lc2 F Lc1 s
// Both are unitary, so energy is preserved and daft(idaft(x)) = x.

#pragma once

#include <cstdint>

#include "afdm/config.hpp"
#include "afdm/types.hpp"

namespace afdm {

/// Symbol vector in the DAF domain, length n_sub, unit average power for
/// QAM-filled frames.
struct DafFrame {
  CVec symbols;
};

/// Time-domain samples; length n_sub, or n_sub + l_cpp with the prefix on.
struct TimeFrame {
  CVec samples;
};

/// diag entries of Lc1 = exp(-j*2*pi*c1*n^2), phase reduced exactly mod 1.
CVec chirp_diag(const Rational& c1, int n);

/// diag entries of Lc2 = exp(-j*2*pi*c2*n^2).
CVec chirp_diag(double c2, int n);

TimeFrame idaft(const DafFrame& frame, const AfdmConfig& cfg);
DafFrame daft(const TimeFrame& time, const AfdmConfig& cfg);

/// Same transforms on bare vectors (used on per-path profiles).
CVec idaft_vec(const CVec& x, const AfdmConfig& cfg);
CVec daft_vec(const CVec& s, const AfdmConfig& cfg);

/// Prepends the chirp-periodic prefix of length l_cpp. Under the config
/// invariants the prefix phase factor is exactly one, i.e. a cyclic prefix.
TimeFrame append_cpp(const TimeFrame& time, const AfdmConfig& cfg);

/// Drops the first l_cpp samples.
TimeFrame remove_cpp(const TimeFrame& time, const AfdmConfig& cfg);

/// Deterministic square-QAM frame (order 4, 16 or 64), unit average power.
DafFrame gen_qam_frame(int order, std::uint64_t seed, int n_sub);

}  // namespace afdm
