// fft.hpp - unitary DFT used inside the DAFT sandwich
//
// Radix-2 in place for power-of-two lengths, direct O(N^2) evaluation
// otherwise. Frame sizes in this library are a few hundred samples, so the
// fallback is cheap and keeps every even n_sub usable.

#pragma once

#include "afdm/types.hpp"

namespace afdm {

/// v <- F v with F[m,n] = exp(-j*2*pi*m*n/N)/sqrt(N).
void dft_unitary(CVec& v);

/// v <- F^H v.
void idft_unitary(CVec& v);

CVec dft_unitary_copy(const CVec& v);
CVec idft_unitary_copy(const CVec& v);

}  // namespace afdm
