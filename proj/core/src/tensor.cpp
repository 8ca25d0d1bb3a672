#include "afdm/tensor.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace afdm {

double Tensor3::norm() const {
  double acc = 0.0;
  for (const Complex& c : data_) acc += std::norm(c);
  return std::sqrt(acc);
}

Tensor3& Tensor3::operator+=(const Tensor3& o) {
  if (dims() != o.dims()) throw std::invalid_argument("Tensor3: dim mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& o) {
  if (dims() != o.dims()) throw std::invalid_argument("Tensor3: dim mismatch");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Tensor3& Tensor3::operator*=(Complex s) {
  for (Complex& c : data_) c *= s;
  return *this;
}

CMat unfold(const Tensor3& t, int mode) {
  const int g = t.dim_g(), n = t.dim_n(), k = t.dim_k();
  switch (mode) {
    case 1: {
      // straight reinterpret of the storage: columns already run (m, k)
      return Eigen::Map<const CMat>(t.data(), g, static_cast<Eigen::Index>(n) * k);
    }
    case 2: {
      CMat y(n, static_cast<Eigen::Index>(k) * g);
      for (int kk = 0; kk < k; ++kk)
        for (int gg = 0; gg < g; ++gg)
          for (int mm = 0; mm < n; ++mm)
            y(mm, static_cast<Eigen::Index>(kk) * g + gg) = t.at(gg, mm, kk);
      return y;
    }
    case 3: {
      CMat y(k, static_cast<Eigen::Index>(n) * g);
      for (int mm = 0; mm < n; ++mm)
        for (int gg = 0; gg < g; ++gg)
          for (int kk = 0; kk < k; ++kk)
            y(kk, static_cast<Eigen::Index>(mm) * g + gg) = t.at(gg, mm, kk);
      return y;
    }
    default:
      throw std::invalid_argument("unfold: mode must be 1, 2 or 3");
  }
}

Tensor3 refold(const CMat& m, int mode, int g, int n, int k) {
  Tensor3 t(g, n, k);
  for (int kk = 0; kk < k; ++kk)
    for (int mm = 0; mm < n; ++mm)
      for (int gg = 0; gg < g; ++gg) {
        Complex v;
        switch (mode) {
          case 1: v = m(gg, static_cast<Eigen::Index>(kk) * n + mm); break;
          case 2: v = m(mm, static_cast<Eigen::Index>(kk) * g + gg); break;
          case 3: v = m(kk, static_cast<Eigen::Index>(mm) * g + gg); break;
          default: throw std::invalid_argument("refold: mode must be 1, 2 or 3");
        }
        t.at(gg, mm, kk) = v;
      }
  return t;
}

CMat khatri_rao(const CMat& a, const CMat& b) {
  if (a.cols() != b.cols())
    throw std::invalid_argument("khatri_rao: column count mismatch");
  CMat out(a.rows() * b.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.cols(); ++r)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), r, b.rows(), 1) = a(i, r) * b.col(r);
  return out;
}

Tensor3 cp_reconstruct(const CVec& gamma, const CMat& a_r, const CMat& b_c,
                       const CMat& a_t) {
  const Eigen::Index rank = gamma.size();
  if (a_r.cols() != rank || b_c.cols() != rank || a_t.cols() != rank)
    throw std::invalid_argument("cp_reconstruct: factor column mismatch");
  Tensor3 t(static_cast<int>(a_r.rows()), static_cast<int>(b_c.rows()),
            static_cast<int>(a_t.rows()));
  for (Eigen::Index r = 0; r < rank; ++r) {
    const CVec a = gamma[r] * a_r.col(r);
    for (int k = 0; k < t.dim_k(); ++k)
      for (int m = 0; m < t.dim_n(); ++m) {
        const Complex bm_ck = b_c(m, r) * a_t(k, r);
        for (int g = 0; g < t.dim_g(); ++g) t.at(g, m, k) += a[g] * bm_ck;
      }
  }
  return t;
}

void SmoothingPlan::validate(int k_tx) const {
  if (k3 + l3 != k_tx + 1)
    throw std::invalid_argument("SmoothingPlan: K3 + L3 must equal K + 1");
  if (k3 < 2 || k3 > k_tx)
    throw std::invalid_argument("SmoothingPlan: K3 must lie in [2, K]");
}

SmoothingPlan SmoothingPlan::for_k(int k_tx) {
  SmoothingPlan p;
  p.k3 = std::max(2, k_tx / 2 + 1);
  p.l3 = k_tx + 1 - p.k3;
  p.validate(k_tx);
  return p;
}

CMat spatial_smooth(const CMat& y2, const SmoothingPlan& plan, int g) {
  const Eigen::Index n = y2.rows();
  if (y2.cols() % g != 0)
    throw std::invalid_argument("spatial_smooth: columns not a multiple of G");
  const int k = static_cast<int>(y2.cols() / g);
  plan.validate(k);
  const CMat yt = y2.transpose();  // (K*G) x N, rows ordered k*G + g
  CMat ups(static_cast<Eigen::Index>(plan.k3) * g,
           static_cast<Eigen::Index>(plan.l3) * n);
  for (int l3 = 1; l3 <= plan.l3; ++l3) {
    // the selection [0 | I_K3 | 0] (x) I_G picks contiguous antenna rows
    ups.middleCols(static_cast<Eigen::Index>(l3 - 1) * n, n) =
        yt.middleRows(static_cast<Eigen::Index>(l3 - 1) * g,
                      static_cast<Eigen::Index>(plan.k3) * g);
  }
  return ups;
}

bool kruskal_generic(int g, int n, int k, int rank) {
  if (g <= 0 || n <= 0 || k <= 0 || rank <= 0)
    throw std::invalid_argument("kruskal_generic: arguments must be positive");
  const int lhs = std::min(g, rank) + std::min(n, rank) + std::min(k, rank);
  return lhs >= 2 * rank + 2;
}

bool relaxed_unique(int g, int n, const SmoothingPlan& plan, int rank) {
  if (g <= 0 || n <= 0 || rank <= 0)
    throw std::invalid_argument("relaxed_unique: arguments must be positive");
  const long long lhs = std::min(static_cast<long long>(plan.k3 - 1) * g,
                                 static_cast<long long>(plan.l3) * n);
  return lhs >= rank;
}

int mdl_rank(const RVec& singular_values, int n_samples, int max_rank) {
  const int p = static_cast<int>(singular_values.size());
  if (p < 2) throw std::invalid_argument("mdl_rank: need at least two values");
  if (max_rank >= p) throw std::invalid_argument("mdl_rank: max_rank must be < count");
  for (int i = 1; i < p; ++i)
    if (singular_values[i] > singular_values[i - 1] + 1e-12)
      throw std::invalid_argument("mdl_rank: values must be sorted descending");

  // eigenvalues of the sample covariance built from the smoothed matrix
  RVec lam(p);
  for (int i = 0; i < p; ++i)
    lam[i] = singular_values[i] * singular_values[i] / n_samples;

  const double tiny = std::numeric_limits<double>::min();
  int best_k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= max_rank; ++k) {
    const int m = p - k;
    double log_gm = 0.0;
    double am = 0.0;
    bool zero_tail = false;
    for (int i = k; i < p; ++i) {
      am += lam[i];
      if (lam[i] <= tiny)
        zero_tail = true;
      else
        log_gm += std::log(lam[i]);
    }
    am /= m;
    double loglik;
    if (am <= tiny) {
      loglik = 0.0;  // all-zero tail: perfect fit
    } else if (zero_tail) {
      loglik = std::numeric_limits<double>::infinity();  // zero GM, nonzero AM
    } else {
      loglik = static_cast<double>(n_samples) * m * (std::log(am) - log_gm / m);
    }
    const double penalty = 0.5 * k * (2.0 * p - k) * std::log(static_cast<double>(n_samples));
    const double score = loglik + penalty;
    if (score < best) {
      best = score;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace afdm
