#include "afdm/cpd.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace afdm {
namespace {

constexpr double kPinvCutoffRel = 1e-10;

CMat pinv_with_cutoff(const CMat& m, double cutoff_rel) {
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0.0)
    throw DecompositionError("pseudo-inverse of a zero matrix");
  const double cutoff = cutoff_rel * s[0];
  RVec inv = RVec::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] < cutoff)
      throw DecompositionError("shift basis is rank deficient");
    inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

/// One joint permutation applied to all factor columns.
void permute_columns(FactorEstimates& f, const std::vector<int>& perm) {
  const auto apply = [&perm](CMat& m) {
    if (m.size() == 0) return;
    CMat out(m.rows(), m.cols());
    for (size_t i = 0; i < perm.size(); ++i) out.col(i) = m.col(perm[i]);
    m = out;
  };
  apply(f.a_r_hat);
  apply(f.b_c_hat);
  apply(f.a_t_hat);
  apply(f.mixing);
  apply(f.dual_mixing);
  CVec gens(f.generators.size());
  for (size_t i = 0; i < perm.size(); ++i) gens[i] = f.generators[perm[i]];
  f.generators = gens;
}

void sort_by_generator_phase(FactorEstimates& f) {
  std::vector<int> perm(f.generators.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&f](int a, int b) {
    return std::arg(f.generators[a]) < std::arg(f.generators[b]);
  });
  permute_columns(f, perm);
}

Complex dominant_generator(const CVec& col) {
  Complex acc(0.0, 0.0);
  for (Eigen::Index k = 0; k + 1 < col.size(); ++k)
    acc += std::conj(col[k]) * col[k + 1];
  const double mag = std::abs(acc);
  return mag > 0.0 ? acc / mag : Complex(1.0, 0.0);
}

}  // namespace

TruncatedSvd truncated_svd(const CMat& m, int rank) {
  if (rank < 1 || rank > std::min(m.rows(), m.cols()))
    throw DecompositionError("truncated_svd: rank outside [1, min(dims)]");
  Eigen::BDCSVD<CMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  TruncatedSvd out;
  out.spectrum = svd.singularValues();
  out.u = svd.matrixU().leftCols(rank);
  out.s = out.spectrum.head(rank);
  out.v = svd.matrixV().leftCols(rank);
  return out;
}

std::pair<CVec, CMat> esprit_generators(const CMat& u, int g, int k3) {
  if (k3 < 2) throw std::invalid_argument("esprit_generators: K3 must be >= 2");
  const Eigen::Index rows = static_cast<Eigen::Index>(k3) * g;
  if (u.rows() != rows)
    throw std::invalid_argument("esprit_generators: U rows != K3*G");
  const CMat u1 = u.topRows(rows - g);
  const CMat u2 = u.bottomRows(rows - g);
  const CMat w = pinv_with_cutoff(u1, kPinvCutoffRel) * u2;

  Eigen::ComplexEigenSolver<CMat> es(w);
  if (es.info() != Eigen::Success)
    throw DecompositionError("eigendecomposition failed");
  CVec gens = es.eigenvalues();
  for (Eigen::Index r = 0; r < gens.size(); ++r) {
    const double mag = std::abs(gens[r]);
    if (mag <= 0.0) throw DecompositionError("zero shift eigenvalue");
    gens[r] /= mag;
  }
  return {gens, es.eigenvectors()};
}

CMat rebuild_at(const CVec& generators, int k_tx) {
  CMat at(k_tx, generators.size());
  for (Eigen::Index r = 0; r < generators.size(); ++r) {
    Complex p(1.0, 0.0);
    for (int k = 0; k < k_tx; ++k) {
      at(k, r) = p;
      p *= generators[r];
    }
  }
  return at;
}

CMat rebuild_ar(const CMat& u, const CMat& mixing, const CMat& a_t_hat,
                const SmoothingPlan& plan, int g) {
  const Eigen::Index rank = mixing.cols();
  CMat ar(g, rank);
  for (Eigen::Index r = 0; r < rank; ++r) {
    const CVec w = u * mixing.col(r);  // (a_T^(K3) (x) a_R) up to scale
    CVec col = CVec::Zero(g);
    for (int i = 0; i < plan.k3; ++i)
      col += std::conj(a_t_hat(i, r)) * w.segment(static_cast<Eigen::Index>(i) * g, g);
    const Complex mid = col[(g - 1) / 2];
    if (std::abs(mid) <= 0.0)
      throw DecompositionError("receive factor has a vanishing reference entry");
    ar.col(r) = col / mid;
  }
  return ar;
}

CMat rebuild_bc(const CMat& v, const RVec& s, const CMat& dual_mixing,
                const CMat& a_t_hat, const SmoothingPlan& plan, int n_sub) {
  const Eigen::Index rank = dual_mixing.cols();
  CMat bc(n_sub, rank);
  for (Eigen::Index r = 0; r < rank; ++r) {
    const CVec w = v.conjugate() * (s.asDiagonal() * dual_mixing.col(r));
    const auto at_l3 = a_t_hat.col(r).head(plan.l3);
    const double denom = at_l3.squaredNorm();
    CVec col = CVec::Zero(n_sub);
    for (int i = 0; i < plan.l3; ++i)
      col += std::conj(a_t_hat(i, r)) *
             w.segment(static_cast<Eigen::Index>(i) * n_sub, n_sub);
    bc.col(r) = col / denom;
  }
  return bc;
}

FactorEstimates structured_cpd(const Tensor3& t, int rank, const SmoothingPlan& plan) {
  plan.validate(t.dim_k());
  const int g = t.dim_g();
  const CMat ups = spatial_smooth(unfold(t, 2), plan, g);
  TruncatedSvd svd = truncated_svd(ups, rank);

  FactorEstimates f;
  auto [gens, mixing] = esprit_generators(svd.u, g, plan.k3);
  f.generators = gens;
  f.mixing = mixing;
  f.dual_mixing = mixing.inverse().transpose();
  f.a_t_hat = rebuild_at(f.generators, t.dim_k());
  f.a_r_hat = rebuild_ar(svd.u, f.mixing, f.a_t_hat, plan, g);
  f.b_c_hat = rebuild_bc(svd.v, svd.s, f.dual_mixing, f.a_t_hat, plan, t.dim_n());

  const double total = svd.spectrum.squaredNorm();
  const double tail = total - svd.s.squaredNorm();
  f.fit = total > 0.0 ? std::sqrt(std::max(0.0, tail) / total) : 0.0;
  sort_by_generator_phase(f);
  return f;
}

FactorEstimates als_baseline(const Tensor3& t, int rank, int max_iter, double tol,
                             std::uint64_t seed, const FactorEstimates* init) {
  if (rank < 1) throw std::invalid_argument("als_baseline: rank must be >= 1");
  const int g = t.dim_g(), n = t.dim_n(), k = t.dim_k();

  const CMat y1 = unfold(t, 1);
  const CMat y2 = unfold(t, 2);
  const CMat y3 = unfold(t, 3);
  const double ynorm = y1.norm();

  CMat a(g, rank), b(n, rank), c(k, rank);
  if (init != nullptr) {
    a = init->a_r_hat;
    b = init->b_c_hat;
    c = init->a_t_hat;
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto fill = [&](CMat& m) {
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
          m(i, j) = Complex(gauss(rng), gauss(rng));
    };
    fill(a);
    fill(b);
    fill(c);
  }

  FactorEstimates f;
  f.converged = false;
  double fit_prev = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < max_iter; ++it) {
    a = (khatri_rao(c, b).colPivHouseholderQr().solve(y1.transpose())).transpose();
    b = (khatri_rao(c, a).colPivHouseholderQr().solve(y2.transpose())).transpose();
    c = (khatri_rao(b, a).colPivHouseholderQr().solve(y3.transpose())).transpose();
    // pull column scales into c to keep the subproblems balanced
    for (int r = 0; r < rank; ++r) {
      const double na = a.col(r).norm();
      const double nb = b.col(r).norm();
      if (na > 0.0) a.col(r) /= na;
      if (nb > 0.0) b.col(r) /= nb;
      c.col(r) *= na * nb;
    }
    const double fit = (y1 - a * khatri_rao(c, b).transpose()).norm() / ynorm;
    if (std::abs(fit_prev - fit) < tol) {
      f.converged = true;
      fit_prev = fit;
      ++it;
      break;
    }
    fit_prev = fit;
  }
  f.iterations = it;
  f.fit = fit_prev;
  f.a_r_hat = a;
  f.b_c_hat = b;
  f.a_t_hat = c;
  f.generators = CVec(rank);
  for (int r = 0; r < rank; ++r) f.generators[r] = dominant_generator(c.col(r));
  f.mixing = CMat::Identity(rank, rank);
  f.dual_mixing = CMat::Identity(rank, rank);
  sort_by_generator_phase(f);
  return f;
}

}  // namespace afdm
