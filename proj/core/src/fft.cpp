#include "afdm/fft.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace afdm {
namespace {

bool is_pow2(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2, sign = -1 forward, +1 inverse. Unnormalized.
void fft_radix2(CVec& v, int sign) {
  const Eigen::Index n = v.size();
  // bit-reversal permutation
  for (Eigen::Index i = 1, j = 0; i < n; ++i) {
    Eigen::Index bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }
  for (Eigen::Index len = 2; len <= n; len <<= 1) {
    const double ang = sign * kTwoPi / static_cast<double>(len);
    const Complex wl(std::cos(ang), std::sin(ang));
    for (Eigen::Index i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (Eigen::Index k = 0; k < len / 2; ++k) {
        const Complex u = v[i + k];
        const Complex t = v[i + k + len / 2] * w;
        v[i + k] = u + t;
        v[i + k + len / 2] = u - t;
        w *= wl;
      }
    }
  }
}

void dft_direct(CVec& v, int sign) {
  const Eigen::Index n = v.size();
  CVec out(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    Complex acc(0.0, 0.0);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double turns = static_cast<double>((m * k) % n) / static_cast<double>(n);
      acc += v[k] * std::polar(1.0, sign * kTwoPi * turns);
    }
    out[m] = acc;
  }
  v = std::move(out);
}

void transform(CVec& v, int sign) {
  if (v.size() == 0) return;
  if (is_pow2(v.size()))
    fft_radix2(v, sign);
  else
    dft_direct(v, sign);
  v *= 1.0 / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

void dft_unitary(CVec& v) { transform(v, -1); }
void idft_unitary(CVec& v) { transform(v, +1); }

CVec dft_unitary_copy(const CVec& v) {
  CVec out = v;
  dft_unitary(out);
  return out;
}

CVec idft_unitary_copy(const CVec& v) {
  CVec out = v;
  idft_unitary(out);
  return out;
}

}  // namespace afdm
