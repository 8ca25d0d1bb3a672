// cpd.hpp - structured CP decomposition of the received cube
//
// Pipeline: mode-2 unfolding -> spatial smoothing -> truncated SVD ->
// shift-invariance eigenproblem on the left singular basis -> factor
// reconstruction. Factor columns come back jointly permuted (generators
// sorted by phase) and carry an unavoidable per-column complex scale; the
// downstream estimators are scale invariant.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "afdm/tensor.hpp"

namespace afdm {

/// Raised when the decomposition cannot proceed (rank-deficient shift
/// basis, rank larger than the data supports).
class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FactorEstimates {
  CMat a_r_hat;       // G x R receive factor
  CMat b_c_hat;       // N x R DAF-profile factor
  CMat a_t_hat;       // K x R transmit factor (exact Vandermonde columns)
  CVec generators;    // R unit-modulus generators of a_t_hat
  CMat mixing;        // M from the eigenproblem
  CMat dual_mixing;   // P = M^{-T}
  bool converged = true;  // ALS only
  int iterations = 0;     // ALS only
  double fit = 0.0;       // relative reconstruction residual, when computed
};

struct TruncatedSvd {
  CMat u;              // cols = rank
  RVec s;              // rank leading singular values
  CMat v;              // cols = rank
  RVec spectrum;       // full singular spectrum (for model-order selection)
};

/// Best rank-R factors of a dense matrix; singular values descending.
TruncatedSvd truncated_svd(const CMat& m, int rank);

/**
 * Shift-invariance eigenproblem on the smoothed left singular basis:
 * U1 = rows [0, (K3-1)*G), U2 = rows [G, K3*G); eigenvalues of U1^+ U2
 * projected to the unit circle are the transmit Vandermonde generators.
 * Returns (generators, M) sorted by generator phase ascending.
 * Throws DecompositionError when U1 is rank deficient.
 */
std::pair<CVec, CMat> esprit_generators(const CMat& u, int g, int k3);

/// K x R Vandermonde matrix from unit-modulus generators.
CMat rebuild_at(const CVec& generators, int k_tx);

/// G x R receive factor via ((a_T^(K3))^H (x) I_G) U m_r, middle entry
/// normalized to one.
CMat rebuild_ar(const CMat& u, const CMat& mixing, const CMat& a_t_hat,
                const SmoothingPlan& plan, int g);

/// N x R DAF-profile factor via the dual relation on V* S P.
CMat rebuild_bc(const CMat& v, const RVec& s, const CMat& dual_mixing,
                const CMat& a_t_hat, const SmoothingPlan& plan, int n_sub);

/// Algorithm: full structured decomposition of a G x N x K cube.
FactorEstimates structured_cpd(const Tensor3& t, int rank, const SmoothingPlan& plan);

/**
 * Alternating least squares baseline. Random init from `seed` unless
 * `init` is given. Stops when the relative fit change drops below tol or
 * after max_iter sweeps (then converged = false). Columns are matched to
 * the same phase-sorted convention as structured_cpd.
 */
FactorEstimates als_baseline(const Tensor3& t, int rank, int max_iter, double tol,
                             std::uint64_t seed, const FactorEstimates* init = nullptr);

}  // namespace afdm
