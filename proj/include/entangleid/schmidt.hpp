#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "entangleid/rng.hpp"
#include "entangleid/types.hpp"

namespace entangleid {

// Canonical Schmidt spectrum: probabilities clamped to [0, 1], sorted
// nonincreasing, summing to one.  Construction always goes through a factory
// so an instance can be trusted downstream without re-validation.
template <typename Scalar>
class SchmidtVectorT {
 public:
  // Strict entry point: rejects inputs whose total weight strays from one by
  // more than normalization_tol.  Use normalize_and_sort to rescale arbitrary
  // nonnegative weights instead.
  static SchmidtVectorT from_probabilities(const VectorX<Scalar>& probs,
                                           const ToleranceConfigT<Scalar>& tol = {}) {
    tol.validate();
    check_entries(probs, tol);
    Scalar total = probs.sum();
    if (std::abs(total - Scalar(1)) > tol.normalization_tol)
      throw Error(Errc::NotNormalized,
                  "probabilities sum to " + std::to_string(static_cast<double>(total)));
    return SchmidtVectorT(canonicalize(probs));
  }

  Index dim() const { return probs_.size(); }
  const VectorX<Scalar>& probs() const { return probs_; }
  Scalar operator[](Index i) const { return probs_(i); }

  // Zero-padding to a common length is how spectra of unequal dimension are
  // compared everywhere in the library.
  VectorX<Scalar> padded(Index n) const {
    VectorX<Scalar> out = VectorX<Scalar>::Zero(n);
    out.head(probs_.size()) = probs_;
    return out;
  }

  bool approx_equal(const SchmidtVectorT& other, Scalar eq_tol) const {
    Index n = std::max(dim(), other.dim());
    return (padded(n) - other.padded(n)).cwiseAbs().maxCoeff() <= eq_tol;
  }

  template <typename S>
  friend SchmidtVectorT<S> normalize_and_sort(const VectorX<S>&, const ToleranceConfigT<S>&);

 private:
  explicit SchmidtVectorT(VectorX<Scalar> canonical) : probs_(std::move(canonical)) {}

  static void check_entries(const VectorX<Scalar>& v, const ToleranceConfigT<Scalar>& tol) {
    if (v.size() == 0) throw Error(Errc::EmptyInput, "spectrum has no entries");
    for (Index i = 0; i < v.size(); ++i)
      if (v(i) < -tol.eq_tol)
        throw Error(Errc::NegativeWeight,
                    "entry " + std::to_string(i) + " is " +
                        std::to_string(static_cast<double>(v(i))));
  }

  static VectorX<Scalar> canonicalize(VectorX<Scalar> v) {
    for (Index i = 0; i < v.size(); ++i) v(i) = std::clamp(v(i), Scalar(0), Scalar(1));
    std::stable_sort(v.begin(), v.end(), std::greater<Scalar>());
    v /= v.sum();
    return v;
  }

  VectorX<Scalar> probs_;
};

using SchmidtVector = SchmidtVectorT<double>;

// Lenient canonicalization: accepts any nonnegative weight vector with
// positive total and rescales it.  This is the one place unnormalized input
// is welcome.
template <typename Scalar>
SchmidtVectorT<Scalar> normalize_and_sort(const VectorX<Scalar>& weights,
                                          const ToleranceConfigT<Scalar>& tol = {}) {
  tol.validate();
  SchmidtVectorT<Scalar>::check_entries(weights, tol);
  VectorX<Scalar> v = weights.cwiseMax(Scalar(0));
  if (!(v.sum() > Scalar(0))) throw Error(Errc::ZeroSum, "total weight is zero");
  std::stable_sort(v.begin(), v.end(), std::greater<Scalar>());
  v /= v.sum();
  return SchmidtVectorT<Scalar>(std::move(v));
}

// Pure state of a bipartite system, stored as its amplitude matrix: rows
// index the first subsystem, columns the second, Frobenius norm one.
template <typename Scalar>
class BipartitePureStateT {
 public:
  static BipartitePureStateT from_amplitudes(MatrixXc<Scalar> amplitudes,
                                             const ToleranceConfigT<Scalar>& tol = {}) {
    tol.validate();
    if (amplitudes.size() == 0) throw Error(Errc::EmptyInput, "amplitude matrix is empty");
    Scalar norm = amplitudes.norm();
    if (std::abs(norm - Scalar(1)) > tol.normalization_tol)
      throw Error(Errc::NotNormalized,
                  "state norm is " + std::to_string(static_cast<double>(norm)));
    return BipartitePureStateT(std::move(amplitudes));
  }

  Index dim_a() const { return amplitudes_.rows(); }
  Index dim_b() const { return amplitudes_.cols(); }
  const MatrixXc<Scalar>& amplitudes() const { return amplitudes_; }

 private:
  explicit BipartitePureStateT(MatrixXc<Scalar> m) : amplitudes_(std::move(m)) {}

  MatrixXc<Scalar> amplitudes_;
};

using BipartitePureState = BipartitePureStateT<double>;

// Squared singular values of the amplitude matrix, renormalized so float
// noise cannot push the total off one.
template <typename Scalar>
SchmidtVectorT<Scalar> schmidt_spectrum(const BipartitePureStateT<Scalar>& state,
                                        const ToleranceConfigT<Scalar>& tol = {}) {
  Eigen::JacobiSVD<MatrixXc<Scalar>> svd(state.amplitudes());
  VectorX<Scalar> spec = svd.singularValues().array().square();
  return normalize_and_sort(spec, tol);
}

// Squared Bhattacharyya overlap (sum_i sqrt(p_i q_i))^2 of two spectra,
// zero-padded to a common length.  This is the ceiling on the fidelity any
// state with spectrum q can reach against a state with spectrum p.
template <typename Scalar>
Scalar bhattacharyya_sq(const SchmidtVectorT<Scalar>& p, const SchmidtVectorT<Scalar>& q) {
  Index n = std::max(p.dim(), q.dim());
  Scalar overlap = (p.padded(n).cwiseProduct(q.padded(n))).cwiseSqrt().sum();
  overlap = std::min(overlap, Scalar(1));
  return overlap * overlap;
}

// |<a|b>|^2 for two states on identical local dimensions.
template <typename Scalar>
Scalar fidelity_pure(const BipartitePureStateT<Scalar>& a, const BipartitePureStateT<Scalar>& b) {
  if (a.dim_a() != b.dim_a() || a.dim_b() != b.dim_b())
    throw Error(Errc::DimensionMismatch, "states live on different local dimensions");
  std::complex<Scalar> inner = a.amplitudes().conjugate().cwiseProduct(b.amplitudes()).sum();
  return std::norm(inner);
}

// Spectrum of the joint state |psi> (x) |phi>: all pairwise products, sorted.
template <typename Scalar>
SchmidtVectorT<Scalar> tensor(const SchmidtVectorT<Scalar>& a, const SchmidtVectorT<Scalar>& b,
                              const ToleranceConfigT<Scalar>& tol = {}) {
  VectorX<Scalar> prod(a.dim() * b.dim());
  Index n = 0;
  for (Index i = 0; i < a.dim(); ++i)
    for (Index j = 0; j < b.dim(); ++j) prod(n++) = a[i] * b[j];
  return normalize_and_sort(prod, tol);
}

// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
// R's diagonal folded into Q, which makes the factorization unique and the
// distribution exactly invariant.
template <typename Scalar>
MatrixXc<Scalar> haar_unitary(Index n, RngStream& rng) {
  if (n < 1) throw Error(Errc::DimensionTooSmall, "unitary dimension must be positive");
  MatrixXc<Scalar> g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      std::complex<double> z = rng.complex_gaussian();
      g(i, j) = std::complex<Scalar>(static_cast<Scalar>(z.real()),
                                     static_cast<Scalar>(z.imag()));
    }
  Eigen::HouseholderQR<MatrixXc<Scalar>> qr(g);
  MatrixXc<Scalar> q = qr.householderQ();
  MatrixXc<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    std::complex<Scalar> d = r(j, j);
    Scalar mag = std::abs(d);
    q.col(j) *= (mag > Scalar(0)) ? d / mag : std::complex<Scalar>(1, 0);
  }
  return q;
}

// Random pure state with the prescribed Schmidt spectrum: rotate the
// diagonal representative by independent Haar unitaries on each side.
template <typename Scalar>
BipartitePureStateT<Scalar> sample_state_with_spectrum(const SchmidtVectorT<Scalar>& spec,
                                                       Index dim_a, Index dim_b, RngStream& rng,
                                                       const ToleranceConfigT<Scalar>& tol = {}) {
  if (spec.dim() > std::min(dim_a, dim_b))
    throw Error(Errc::DimensionTooSmall, "spectrum does not fit the local dimensions");
  MatrixXc<Scalar> d = MatrixXc<Scalar>::Zero(dim_a, dim_b);
  for (Index i = 0; i < spec.dim(); ++i) d(i, i) = std::sqrt(spec[i]);
  MatrixXc<Scalar> u = haar_unitary<Scalar>(dim_a, rng);
  MatrixXc<Scalar> w = haar_unitary<Scalar>(dim_b, rng);
  MatrixXc<Scalar> m = u * d * w;
  m /= m.norm();
  return BipartitePureStateT<Scalar>::from_amplitudes(std::move(m), tol);
}

template <typename Scalar>
BipartitePureStateT<Scalar> sample_state_with_spectrum(const SchmidtVectorT<Scalar>& spec,
                                                       RngStream& rng,
                                                       const ToleranceConfigT<Scalar>& tol = {}) {
  return sample_state_with_spectrum(spec, spec.dim(), spec.dim(), rng, tol);
}

}  // namespace entangleid
