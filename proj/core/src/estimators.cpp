#include "afdm/estimators.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "afdm/fft.hpp"

namespace afdm {
namespace {

constexpr double kGolden = 0.61803398874989484820;  // (sqrt(5)-1)/2
constexpr double kPropagatorFloor = 1e-30;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

double estimate_aod(Complex generator) {
  return std::asin(std::arg(generator) / -kPi);
}

CMat aoa_toeplitz(const CVec& a_r_col) {
  const int g = static_cast<int>(a_r_col.size());
  if (g % 2 == 0) throw std::invalid_argument("aoa_toeplitz: G must be odd");
  const int gx = (g - 1) / 2;
  // anti-diagonal of a*a^H: entry (a, 2gx+2-a) pairs antenna g with -g,
  // so the quadratic range phase cancels and only e^{j2g rho} survives
  CVec c(g);
  for (int a = 1; a <= g; ++a)
    c[a - 1] = a_r_col[a - 1] * std::conj(a_r_col[g - a]);
  CMat t(gx + 1, gx + 1);
  for (int p = 0; p <= gx; ++p)
    for (int q = 0; q <= gx; ++q) t(p, q) = c[gx + p - q];
  return t;
}

double estimate_aoa(const CVec& a_r_col, const AoaSearchConfig& cfg) {
  const int g = static_cast<int>(a_r_col.size());
  if (g % 2 == 0 || g < 5)
    throw std::invalid_argument("estimate_aoa: need odd G with Gx >= 2");
  const int gx = (g - 1) / 2;

  const CMat t = aoa_toeplitz(a_r_col);
  const CMat t1 = t.topRows(1);
  const CMat t2 = t.bottomRows(gx);
  const double t11 = t1.squaredNorm();
  if (t11 < kPropagatorFloor)
    throw std::invalid_argument("estimate_aoa: degenerate input column");
  const CMat p = (t1 * t2.adjoint()) / t11;  // 1 x Gx

  CMat q(gx + 1, gx);
  q.topRows(1) = p;
  q.bottomRows(gx) = -CMat::Identity(gx, gx);
  const CMat w = (q.adjoint() * q).llt().solve(q.adjoint());
  const CMat proj = q * w;  // projector onto span(Q)

  // search vector over the doubled phase grid: [1, e^{j2rho}, ..., e^{j2Gx rho}]
  const auto objective = [&](double theta) {
    const double two_rho = -2.0 * kTwoPi * cfg.d_over_lambda * std::sin(theta);
    CVec a(gx + 1);
    for (int i = 0; i <= gx; ++i) a[i] = std::polar(1.0, i * two_rho);
    return std::real(a.dot(proj * a));
  };

  const double half = kPi / 2.0;
  const double step = cfg.grid_step;
  int best_i = 0;
  double best_f = std::numeric_limits<double>::infinity();
  std::vector<double> vals;
  std::vector<double> grid;
  for (double theta = -half + step / 2.0; theta < half; theta += step) {
    grid.push_back(theta);
    vals.push_back(objective(theta));
    if (vals.back() < best_f) {
      best_f = vals.back();
      best_i = static_cast<int>(vals.size()) - 1;
    }
  }
  double theta_hat = grid[best_i];
  if (!cfg.refine) return theta_hat;

  // 3-point parabolic vertex, then a bounded golden polish of the minimum
  if (best_i > 0 && best_i + 1 < static_cast<int>(grid.size())) {
    const double fm = vals[best_i - 1], f0 = vals[best_i], fp = vals[best_i + 1];
    const double denom = fm - 2.0 * f0 + fp;
    if (std::abs(denom) > 0.0) {
      const double delta = clamp(0.5 * (fm - fp) / denom, -0.5, 0.5);
      theta_hat += delta * step;
    }
  }
  const double lo = std::max(-half, grid[best_i] - step);
  const double hi = std::min(half, grid[best_i] + step);
  const GoldenResult res =
      golden_max([&](double th) { return -objective(th); }, lo, hi, 1e-10, 80);
  return res.x;
}

GoldenResult golden_max(const std::function<double(double)>& f, double lo,
                        double hi, double width_tol, int max_iter) {
  if (!(hi > lo)) return {lo, f(lo), 0, 0.0};
  double g1 = hi - kGolden * (hi - lo);
  double g2 = lo + kGolden * (hi - lo);
  double f1 = f(g1);
  double f2 = f(g2);
  int it = 0;
  while (hi - lo > width_tol && it < max_iter) {
    if (f1 <= f2) {
      lo = g1;
      g1 = g2;
      f1 = f2;
      g2 = lo + kGolden * (hi - lo);
      f2 = f(g2);
    } else {
      hi = g2;
      g2 = g1;
      f2 = f1;
      g1 = hi - kGolden * (hi - lo);
      f1 = f(g1);
    }
    ++it;
  }
  GoldenResult res;
  res.x = 0.5 * (lo + hi);
  res.fx = std::max(f1, f2);
  res.iterations = it;
  res.width = hi - lo;
  return res;
}

PulseCompression pulse_compress(const CVec& b_hat, const DafFrame& frame,
                                const AfdmConfig& cfg) {
  const int n = cfg.n_sub;
  if (b_hat.size() != n || frame.symbols.size() != n)
    throw std::invalid_argument("pulse_compress: length mismatch");
  const double stride = static_cast<double>(cfg.daf_delay_stride());
  PulseCompression out;
  out.u = CVec::Zero(n);
  out.magnitude = RVec::Zero(n);
  for (int p = 0; p < n; ++p) {
    // nearest delay hypothesis for this location; compensates the
    // e^{j*2*pi*beta*m'/N} phase the profile carries on its input index
    const double k_beta = std::round(static_cast<double>(p) / stride);
    Complex acc(0.0, 0.0);
    for (int m = 0; m < n; ++m) {
      const int mp = (m - p + n) % n;
      acc += std::conj(b_hat[m]) * frame.symbols[mp] *
             cis_turns(std::fmod(k_beta * mp / n, 1.0));
    }
    out.u[p] = acc;
    out.magnitude[p] = std::abs(acc);
    if (out.magnitude[p] > out.magnitude[out.peak_index]) out.peak_index = p;
  }
  return out;
}

std::pair<int, int> decode_integer(double loc_hat, const AfdmConfig& cfg) {
  const double stride = static_cast<double>(cfg.daf_delay_stride());
  int ell = static_cast<int>(std::lround(loc_hat / stride));
  ell = std::min(std::max(ell, 0), cfg.ell_max);
  int alpha = static_cast<int>(std::lround(stride * ell - loc_hat));
  const int bound = cfg.alpha_max + cfg.k_v;
  alpha = std::min(std::max(alpha, -bound), bound);
  return {ell, alpha};
}

DelayDopplerEstimate refine_delay_doppler(const CVec& b_hat, const DafFrame& frame,
                                          const AfdmConfig& cfg,
                                          std::pair<int, int> init, int t_outer) {
  if (t_outer < 1) throw std::invalid_argument("refine_delay_doppler: t_outer >= 1");
  const int n = cfg.n_sub;
  const CVec y = idaft_vec(b_hat, cfg);  // time-domain image of the profile

  const double beta_lo = 0.0, beta_hi = cfg.ell_max + 0.5;
  const double nu_hi = cfg.alpha_max + 0.5, nu_lo = -nu_hi;

  DelayDopplerEstimate est;
  double l_cur = clamp(static_cast<double>(init.first), beta_lo, beta_hi);
  double a_cur = clamp(static_cast<double>(init.second), nu_lo, nu_hi);
  for (int t = 0; t < t_outer; ++t) {
    // Doppler pass: the delayed echo is fixed, each probe is one
    // modulated inner product
    const CVec echo = path_time_response(frame, cfg, l_cur, 0.0);
    const CVec w = echo.conjugate().cwiseProduct(y);
    const auto f_nu = [&](double g) {
      Complex acc(0.0, 0.0);
      for (int i = 0; i < n; ++i)
        acc += w[i] * cis_turns(std::fmod(static_cast<double>(i) * g / n, 1.0));
      return std::norm(acc);
    };
    const GoldenResult rnu = golden_max(f_nu, std::max(nu_lo, a_cur - 1.0),
                                        std::min(nu_hi, a_cur + 1.0));
    a_cur = rnu.x;

    // delay pass against the Doppler-compensated profile
    const CVec z = y.cwiseProduct(doppler_diag(a_cur, n).conjugate());
    const auto f_l = [&](double l) {
      const CVec cand = path_time_response(frame, cfg, l, 0.0);
      return std::norm(cand.dot(z));
    };
    const GoldenResult rl = golden_max(f_l, std::max(beta_lo, l_cur - 1.0),
                                       std::min(beta_hi, l_cur + 1.0));
    l_cur = rl.x;
    est.iterations += rnu.iterations + rl.iterations;
    est.rounds.emplace_back(l_cur, a_cur);
  }
  est.beta_hat = l_cur;
  est.nu_hat = a_cur;
  est.tau_hat = l_cur * cfg.sample_interval();
  est.fd_hat = a_cur * cfg.delta_f;
  est.loc_hat = daf_path_location(l_cur, a_cur, cfg);
  return est;
}

EstimationReport estimate_all(const Tensor3& t, const DafFrame& frame,
                              const AfdmConfig& cfg, const SceneConfig& scene,
                              int rank, const AoaSearchConfig& aoa, int t_outer,
                              const SmoothingPlan* plan_in) {
  const SmoothingPlan plan =
      plan_in != nullptr ? *plan_in : SmoothingPlan::for_k(t.dim_k());
  int r = rank;
  if (r == 0) {
    const CMat ups = spatial_smooth(unfold(t, 2), plan, t.dim_g());
    const TruncatedSvd probe = truncated_svd(ups, 1);
    const int max_rank =
        std::min<int>(static_cast<int>(probe.spectrum.size()) - 1, 16);
    r = mdl_rank(probe.spectrum, plan.l3 * t.dim_n(), max_rank);
    if (r < 1) throw DecompositionError("model order selection found no targets");
  }

  const FactorEstimates f = structured_cpd(t, r, plan);
  AoaSearchConfig aoa_cfg = aoa;
  aoa_cfg.d_over_lambda = scene.rx_spacing() / scene.wavelength();

  EstimationReport report;
  report.rank = r;
  report.cpd_fit = f.fit;
  report.targets.resize(r);
  for (int i = 0; i < r; ++i) {
    TargetEstimate& te = report.targets[i];
    te.generator = f.generators[i];
    te.phi = estimate_aod(f.generators[i]);
    te.theta = estimate_aoa(f.a_r_hat.col(i), aoa_cfg);
    const PulseCompression pc = pulse_compress(f.b_c_hat.col(i), frame, cfg);
    const auto init = decode_integer(pc.peak_index, cfg);
    te.delay_doppler = refine_delay_doppler(f.b_c_hat.col(i), frame, cfg, init, t_outer);
    te.beta = te.delay_doppler.beta_hat;
    te.nu = te.delay_doppler.nu_hat;
    te.tau = te.delay_doppler.tau_hat;
    te.f_d = te.delay_doppler.fd_hat;
  }
  return report;
}

}  // namespace afdm
