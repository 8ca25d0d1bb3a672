#include "afdm/crlb.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "afdm/fft.hpp"

namespace afdm {
namespace {

constexpr double kEigCutoffRel = 1e-12;

CVec diag_j2pin_over_n(int n) {
  CVec d(n);
  for (int i = 0; i < n; ++i) d[i] = Complex(0.0, kTwoPi * i / n);
  return d;
}

}  // namespace

CVec d_ar_dtheta(const Target& t, const SceneConfig& scene) {
  const CVec a = rx_steering(t.theta, t.range, scene);
  const double d = scene.rx_spacing();
  const double lam = scene.wavelength();
  const double drho = -(kTwoPi * d / lam) * std::cos(t.theta);
  const double dxi = std::isfinite(t.range)
                         ? -(kPi * d * d / (lam * t.range * t.range)) * std::sin(t.theta)
                         : 0.0;
  const int gx = scene.gx;
  CVec out(a.size());
  for (int g = -gx; g <= gx; ++g) {
    const double gd = static_cast<double>(g);
    out[g + gx] = Complex(0.0, gd * drho + gd * gd * dxi) * a[g + gx];
  }
  return out;
}

CVec d_ar_dr0(const Target& t, const SceneConfig& scene) {
  if (!std::isfinite(t.range)) return CVec::Zero(scene.g_rx());
  const CVec a = rx_steering(t.theta, t.range, scene);
  const double d = scene.rx_spacing();
  const double lam = scene.wavelength();
  const double dxi = -2.0 * kPi * d * d * std::cos(t.theta) /
                     (lam * t.range * t.range * t.range);
  const int gx = scene.gx;
  CVec out(a.size());
  for (int g = -gx; g <= gx; ++g) {
    const double gd = static_cast<double>(g);
    out[g + gx] = Complex(0.0, gd * gd * dxi) * a[g + gx];
  }
  return out;
}

CVec d_b_dtau(const Target& t, const DafFrame& frame, const AfdmConfig& cfg) {
  const double beta = normalized_delay(t, cfg);
  const double nu = normalized_doppler(t, cfg);
  const int n = cfg.n_sub;
  // d/dbeta of the shift spectrum exp(+j*2*pi*k*beta/N), then Doppler
  CVec v = idaft_vec(frame.symbols, cfg);
  dft_unitary(v);
  v = v.cwiseProduct(delay_spectrum(-beta, n)).cwiseProduct(diag_j2pin_over_n(n));
  idft_unitary(v);
  v = v.cwiseProduct(doppler_diag(nu, n));
  return daft_vec(v, cfg) / cfg.sample_interval();
}

CVec d_b_dfd(const Target& t, const DafFrame& frame, const AfdmConfig& cfg) {
  const double beta = normalized_delay(t, cfg);
  const double nu = normalized_doppler(t, cfg);
  const int n = cfg.n_sub;
  CVec v = path_time_response(frame, cfg, beta, nu);
  v = v.cwiseProduct(-diag_j2pin_over_n(n));
  return daft_vec(v, cfg) / cfg.delta_f;
}

CVec d_at_dphi(const Target& t, int k_tx) {
  CVec out(k_tx);
  const double s = std::sin(t.phi);
  const double c = std::cos(t.phi);
  for (int k = 0; k < k_tx; ++k)
    out[k] = Complex(0.0, -kPi * k * c) * std::polar(1.0, -kPi * k * s);
  return out;
}

long long NoiseCrossCov::index(int mode, int g, int m, int k) const {
  const long long gg = g, mm = m, kk = k;
  const long long G = dims[0], N = dims[1], K = dims[2];
  switch (mode) {
    case 1: return gg * (N * K) + kk * N + mm;
    case 2: return mm * (K * G) + kk * G + gg;
    case 3: return kk * (N * G) + mm * G + gg;
    default: throw std::invalid_argument("NoiseCrossCov: mode must be 1, 2 or 3");
  }
}

CMat NoiseCrossCov::apply(const CMat& m) const {
  if (m.rows() != size())
    throw std::invalid_argument("NoiseCrossCov: row count != G*N*K");
  CMat out(m.rows(), m.cols());
  for (int k = 0; k < dims[2]; ++k)
    for (int mm = 0; mm < dims[1]; ++mm)
      for (int g = 0; g < dims[0]; ++g)
        out.row(index(p, g, mm, k)) = sigma2 * m.row(index(q, g, mm, k));
  return out;
}

CMat NoiseCrossCov::dense() const {
  CMat c = CMat::Zero(size(), size());
  for (int k = 0; k < dims[2]; ++k)
    for (int m = 0; m < dims[1]; ++m)
      for (int g = 0; g < dims[0]; ++g)
        c(index(p, g, m, k), index(q, g, m, k)) = sigma2;
  return c;
}

NoiseCrossCov noise_cross_cov(int p, int q, std::array<int, 3> dims, double sigma2) {
  if (p == q) throw std::invalid_argument("noise_cross_cov: modes must differ");
  if (p < 1 || p > 3 || q < 1 || q > 3)
    throw std::invalid_argument("noise_cross_cov: invalid mode");
  NoiseCrossCov c;
  c.p = p;
  c.q = q;
  c.dims = dims;
  c.sigma2 = sigma2;
  return c;
}

CMat assemble_fim(const FimInput& input) {
  if (!(input.sigma2 > 0.0))
    throw std::invalid_argument("assemble_fim: sigma2 must be positive");
  validate_scene(input.scene, input.cfg);
  const int rank = static_cast<int>(input.scene.targets.size());
  const int g = input.scene.g_rx();
  const int n = input.cfg.n_sub;
  const int k = input.scene.k_tx;

  // CP factors with gamma absorbed into the transmit factor
  CMat a(g, rank), b(n, rank), c(k, rank), at(k, rank);
  CMat d_th(g, rank), d_r0(g, rank), d_tau(n, rank), d_fd(n, rank), d_phi(k, rank);
  for (int r = 0; r < rank; ++r) {
    const Target& t = input.scene.targets[r];
    a.col(r) = rx_steering(t.theta, t.range, input.scene);
    b.col(r) = daf_response(t, input.frame, input.cfg);
    at.col(r) = tx_steering(t.phi, k);
    c.col(r) = t.gamma * at.col(r);
    d_th.col(r) = d_ar_dtheta(t, input.scene);
    d_r0.col(r) = d_ar_dr0(t, input.scene);
    d_tau.col(r) = d_b_dtau(t, input.frame, input.cfg);
    d_fd.col(r) = d_b_dfd(t, input.frame, input.cfg);
    d_phi.col(r) = t.gamma * d_at_dphi(t, k);
  }

  struct Param {
    int mode;
    const CMat* deriv;
    bool complex_block;
  };
  std::vector<Param> params = {
      {1, &d_th, false}, {1, &d_r0, false}, {2, &d_tau, false},
      {2, &d_fd, false}, {3, &d_phi, false},
  };
  CMat j_at;
  if (input.gamma_convention == GammaConvention::kComplex) {
    params.push_back({3, &at, true});
  } else {
    j_at = Complex(0.0, 1.0) * at;
    params.push_back({3, &at, false});
    params.push_back({3, &j_at, false});
  }

  const auto axis_factor = [&](const Param& p, int axis) -> const CMat& {
    if (p.mode == axis) return *p.deriv;
    return axis == 1 ? a : (axis == 2 ? b : c);
  };

  const int np = static_cast<int>(params.size());
  CMat fim = CMat::Zero(static_cast<Eigen::Index>(np) * rank,
                        static_cast<Eigen::Index>(np) * rank);
  for (int pi = 0; pi < np; ++pi) {
    for (int qi = pi; qi < np; ++qi) {
      CMat block(rank, rank);
      for (int r1 = 0; r1 < rank; ++r1) {
        for (int r2 = 0; r2 < rank; ++r2) {
          // (1/sigma2) <d x / d psi_p(r1), d x / d psi_q(r2)>, factored
          // over the three tensor axes of the rank-1 derivative terms
          Complex prod(1.0, 0.0);
          for (int axis = 1; axis <= 3; ++axis) {
            const CMat& fp = axis_factor(params[pi], axis);
            const CMat& fq = axis_factor(params[qi], axis);
            prod *= fq.col(r2).dot(fp.col(r1));
          }
          prod /= input.sigma2;
          block(r1, r2) = params[qi].complex_block ? std::conj(prod)
                                                   : Complex(2.0 * prod.real(), 0.0);
        }
      }
      fim.block(static_cast<Eigen::Index>(pi) * rank,
                static_cast<Eigen::Index>(qi) * rank, rank, rank) = block;
      if (qi != pi)
        fim.block(static_cast<Eigen::Index>(qi) * rank,
                  static_cast<Eigen::Index>(pi) * rank, rank, rank) = block.adjoint();
    }
  }
  return fim;
}

CrlbReport crlb_bounds(const CMat& fim, const std::vector<bool>& far_field,
                       GammaConvention convention) {
  if ((fim - fim.adjoint()).norm() > 1e-8 * std::max(1.0, fim.norm()))
    throw std::invalid_argument("crlb_bounds: FIM is not Hermitian");
  const int np = convention == GammaConvention::kComplex ? 6 : 7;
  if (fim.rows() % np != 0)
    throw std::invalid_argument("crlb_bounds: unexpected FIM dimension");
  const int rank = static_cast<int>(fim.rows()) / np;

  // active rows: drop the null r0 entries of far-field targets
  std::vector<int> active;
  for (int i = 0; i < fim.rows(); ++i) {
    const int param = i / rank;
    const int r = i % rank;
    if (param == 1 && r < static_cast<int>(far_field.size()) && far_field[r]) continue;
    active.push_back(i);
  }
  CMat sub(active.size(), active.size());
  for (size_t i = 0; i < active.size(); ++i)
    for (size_t j = 0; j < active.size(); ++j) sub(i, j) = fim(active[i], active[j]);

  Eigen::SelfAdjointEigenSolver<CMat> es(sub);
  const RVec& ev = es.eigenvalues();
  const double emax = ev.cwiseAbs().maxCoeff();
  const double cutoff = kEigCutoffRel * emax;
  RVec inv = RVec::Zero(ev.size());
  bool singular = false;
  double emin_active = emax;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > cutoff) {
      inv[i] = 1.0 / ev[i];
      emin_active = std::min(emin_active, ev[i]);
    } else {
      singular = true;
    }
  }
  const CMat crb_sub =
      es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();

  RVec diag = RVec::Constant(fim.rows(), std::numeric_limits<double>::infinity());
  for (size_t i = 0; i < active.size(); ++i)
    diag[active[i]] = crb_sub(i, i).real();

  CrlbReport rep;
  rep.fim = fim;
  rep.singular = singular;
  rep.condition_number = emin_active > 0.0 ? emax / emin_active
                                           : std::numeric_limits<double>::infinity();
  const auto slice = [&](int param) { return diag.segment(param * rank, rank); };
  rep.crlb_theta = slice(0);
  rep.crlb_r0 = slice(1);
  rep.crlb_tau = slice(2);
  rep.crlb_fd = slice(3);
  rep.crlb_phi = slice(4);
  if (convention == GammaConvention::kComplex) {
    rep.crlb_gamma = slice(5);
  } else {
    rep.crlb_gamma = slice(5) + slice(6);  // var(Re) + var(Im)
  }
  return rep;
}

CrlbReport compute_crlb(const FimInput& input) {
  const CMat fim = assemble_fim(input);
  std::vector<bool> ff(input.scene.targets.size());
  for (size_t r = 0; r < ff.size(); ++r)
    ff[r] = !std::isfinite(input.scene.targets[r].range);
  return crlb_bounds(fim, ff, input.gamma_convention);
}

}  // namespace afdm
