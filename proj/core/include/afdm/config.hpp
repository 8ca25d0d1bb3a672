// config.hpp - AFDM frame configuration and chirp-parameter arithmetic
//
// The first chirp parameter c1 is kept as an exact rational so that
// integrality conditions (2*N*c1 integer, prefix phase exactly one) are
// decided in integer arithmetic instead of floating-point comparisons.

#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace afdm {

/// Exact rational number, always stored in reduced form with den > 0.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }

  /// Fractional part of (this * k) in [0, 1), computed exactly.
  double frac_times(long long k) const {
    long long m = ((num % den) * (k % den)) % den;
    if (m < 0) m += den;
    return static_cast<double>(m) / static_cast<double>(den);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

/// Chirp parameter of Eq. driving the delay stride in the DAF domain:
/// c1 = (2*(alpha_max + k_v) + 1) / (2*n_sub).
Rational compute_c1(int alpha_max, int k_v, int n_sub);

/**
 * Frame-level AFDM configuration.
 *
 * Invariants (enforced by validate()):
 *  - n_sub even, so together with integer 2*N*c1 the chirp-periodic prefix
 *    phase factor is exactly one and the prefix degenerates to a cyclic one;
 *  - the delay/Doppler budget satisfies the diversity inequality
 *    2*(alpha_max+k_v) + ell_max + 2*(alpha_max+k_v)*ell_max < n_sub;
 *  - l_cpp >= ell_max.
 */
struct AfdmConfig {
  int n_sub = 256;       // N_c, number of chirp subcarriers
  int alpha_max = 1;     // max integer normalized Doppler
  int k_v = 3;           // Doppler spread guard
  int ell_max = 12;      // max integer normalized delay
  int l_cpp = 12;        // chirp-periodic prefix length, samples
  Rational c1;           // first chirp parameter (exact)
  double c2 = 0.0;       // second chirp parameter
  double delta_f = 1.0e6;  // subcarrier spacing, Hz
  double fc = 60.0e9;      // carrier, Hz

  static AfdmConfig make(int n_sub, int alpha_max, int k_v, int ell_max,
                         int l_cpp, double c2 = 0.0, double delta_f = 1.0e6,
                         double fc = 60.0e9);

  void validate() const;

  /// 2*N*c1, integer by construction of c1; DAF-bin stride per unit delay.
  long long daf_delay_stride() const;

  double frame_duration() const { return 1.0 / delta_f; }
  double sample_interval() const { return 1.0 / (n_sub * delta_f); }
  double wavelength() const;
};

/// Diversity-order inequality on the delay/Doppler budget.
bool check_diversity(const AfdmConfig& cfg);

}  // namespace afdm
