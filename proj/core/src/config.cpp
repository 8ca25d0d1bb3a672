#include "afdm/config.hpp"

#include "afdm/types.hpp"

namespace afdm {

Rational compute_c1(int alpha_max, int k_v, int n_sub) {
  if (n_sub <= 0) throw std::invalid_argument("compute_c1: n_sub must be positive");
  if (alpha_max < 0 || k_v < 0)
    throw std::invalid_argument("compute_c1: alpha_max and k_v must be non-negative");
  return Rational(2LL * (alpha_max + k_v) + 1, 2LL * n_sub);
}

AfdmConfig AfdmConfig::make(int n_sub, int alpha_max, int k_v, int ell_max,
                            int l_cpp, double c2, double delta_f, double fc) {
  AfdmConfig cfg;
  cfg.n_sub = n_sub;
  cfg.alpha_max = alpha_max;
  cfg.k_v = k_v;
  cfg.ell_max = ell_max;
  cfg.l_cpp = l_cpp;
  cfg.c1 = compute_c1(alpha_max, k_v, n_sub);
  cfg.c2 = c2;
  cfg.delta_f = delta_f;
  cfg.fc = fc;
  cfg.validate();
  return cfg;
}

void AfdmConfig::validate() const {
  if (n_sub <= 0) throw std::invalid_argument("AfdmConfig: n_sub must be positive");
  if (n_sub % 2 != 0) throw std::invalid_argument("AfdmConfig: n_sub must be even");
  if (ell_max < 0 || l_cpp < 0 || alpha_max < 0 || k_v < 0)
    throw std::invalid_argument("AfdmConfig: negative budget field");
  if (!(c1 == compute_c1(alpha_max, k_v, n_sub)))
    throw std::invalid_argument("AfdmConfig: c1 inconsistent with alpha_max, k_v, n_sub");
  // integer 2*N*c1 comes for free from the c1 formula; re-check anyway
  if ((2LL * n_sub * c1.num) % c1.den != 0)
    throw std::invalid_argument("AfdmConfig: 2*n_sub*c1 is not an integer");
  if (!check_diversity(*this))
    throw std::invalid_argument("AfdmConfig: diversity inequality violated");
  if (l_cpp < ell_max)
    throw std::invalid_argument("AfdmConfig: l_cpp must cover ell_max");
  if (delta_f <= 0.0 || fc <= 0.0)
    throw std::invalid_argument("AfdmConfig: delta_f and fc must be positive");
}

long long AfdmConfig::daf_delay_stride() const {
  return 2LL * n_sub * c1.num / c1.den;
}

double AfdmConfig::wavelength() const { return kSpeedOfLight / fc; }

bool check_diversity(const AfdmConfig& cfg) {
  const long long a = 2LL * (cfg.alpha_max + cfg.k_v);
  const long long lhs = a + cfg.ell_max + a * cfg.ell_max;
  return lhs < cfg.n_sub;
}

}  // namespace afdm
