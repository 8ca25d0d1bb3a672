// tensor.hpp - dense third-order complex tensor with the unfoldings and
// Khatri-Rao algebra needed by the decomposition
//
// Storage layout (fixed): entry (g, m, k) lives at g + G*m + G*N*k, i.e.
// the receive index runs fastest. The mode unfoldings follow from it:
//   mode 1:  G  x (N*K), column k*N + m     -> A_R (A_T kr B_C)^T
//   mode 2:  N  x (K*G), column k*G + g     -> B_C (A_T kr A_R)^T
//   mode 3:  K  x (N*G), column m*G + g     -> A_T (B_C kr A_R)^T
// where "x kr y" is the column-wise Kronecker product with the first factor
// varying slowest, matching khatri_rao() below.

#pragma once

#include <array>
#include <vector>

#include "afdm/types.hpp"

namespace afdm {

class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int g, int n, int k)
      : g_(g), n_(n), k_(k), data_(static_cast<size_t>(g) * n * k, Complex(0, 0)) {}

  int dim_g() const { return g_; }
  int dim_n() const { return n_; }
  int dim_k() const { return k_; }
  std::array<int, 3> dims() const { return {g_, n_, k_}; }
  size_t size() const { return data_.size(); }

  Complex& at(int g, int m, int k) { return data_[idx(g, m, k)]; }
  const Complex& at(int g, int m, int k) const { return data_[idx(g, m, k)]; }

  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  double norm() const;

  Tensor3& operator+=(const Tensor3& o);
  Tensor3& operator-=(const Tensor3& o);
  Tensor3& operator*=(Complex s);

 private:
  size_t idx(int g, int m, int k) const {
    return static_cast<size_t>(g) + static_cast<size_t>(g_) * m +
           static_cast<size_t>(g_) * n_ * k;
  }
  int g_ = 0, n_ = 0, k_ = 0;
  std::vector<Complex> data_;
};

CMat unfold(const Tensor3& t, int mode);
Tensor3 refold(const CMat& m, int mode, int g, int n, int k);

/// Column-wise Kronecker product; column r is a(:,r) (x) b(:,r) with the
/// first argument varying slowest: row i_a*rows(b) + i_b.
CMat khatri_rao(const CMat& a, const CMat& b);

/// Sum of gamma_r * a_r o b_r o c_r outer products.
Tensor3 cp_reconstruct(const CVec& gamma, const CMat& a_r, const CMat& b_c,
                       const CMat& a_t);

/**
 * Spatial smoothing split of the transmit dimension, K3 + L3 = K + 1.
 * K3 >= 2 keeps one row shift available for the generator eigenproblem.
 */
struct SmoothingPlan {
  int k3 = 2;
  int l3 = 1;

  void validate(int k_tx) const;
  /// Default split: K3 = K/2 + 1 (the widest balanced choice).
  static SmoothingPlan for_k(int k_tx);
};

/// Stacks the L3 shifted row blocks of y2^T side by side:
/// (K3*G) x (L3*N) matrix equal to (A_T^(K3) kr A_R) diag(gamma)
/// (A_T^(L3) kr B_C)^T on noise-free CP input.
CMat spatial_smooth(const CMat& y2, const SmoothingPlan& plan, int g);

/// Generic Kruskal count: min(G,R) + min(N,R) + min(K,R) >= 2R + 2.
bool kruskal_generic(int g, int n, int k, int rank);

/// Relaxed condition under the Vandermonde factor and smoothing:
/// min((K3-1)*G, L3*N) >= R.
bool relaxed_unique(int g, int n, const SmoothingPlan& plan, int rank);

/**
 * Minimum-description-length model order from a descending singular-value
 * spectrum (Wax-Kailath form on sigma^2/n eigenvalues). Returns the number
 * of signal components in [0, max_rank].
 */
int mdl_rank(const RVec& singular_values, int n_samples, int max_rank);

}  // namespace afdm
