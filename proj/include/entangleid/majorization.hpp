#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "entangleid/schmidt.hpp"
#include "entangleid/types.hpp"

namespace entangleid {

// Prefix sums s_k and their complements e_k = 1 - s_k for k = 1..d.  The e_k
// are entanglement monotones: they never increase under local operations and
// classical communication, and they order spectra exactly when majorization
// does.
template <typename Scalar>
struct MonotoneProfileT {
  VectorX<Scalar> s;
  VectorX<Scalar> e;
};

using MonotoneProfile = MonotoneProfileT<double>;

template <typename Scalar>
MonotoneProfileT<Scalar> monotone_profile(const SchmidtVectorT<Scalar>& v) {
  MonotoneProfileT<Scalar> out;
  out.s.resize(v.dim());
  Scalar run = Scalar(0);
  for (Index k = 0; k < v.dim(); ++k) {
    run += v[k];
    out.s(k) = run;
  }
  out.e = VectorX<Scalar>::Ones(v.dim()) - out.s;
  return out;
}

// Does a majorize b?  True when every prefix sum of a dominates the matching
// prefix sum of b, with one-sided slack majorization_tol.  Spectra of unequal
// length are zero-padded first.  A spectrum that majorizes carries LESS
// entanglement, not more: majorization runs opposite to the entanglement
// order.
template <typename Scalar>
bool majorizes(const SchmidtVectorT<Scalar>& a, const SchmidtVectorT<Scalar>& b,
               const ToleranceConfigT<Scalar>& tol = {}) {
  Index n = std::max(a.dim(), b.dim());
  VectorX<Scalar> pa = a.padded(n), pb = b.padded(n);
  Scalar sa = Scalar(0), sb = Scalar(0);
  for (Index k = 0; k < n; ++k) {
    sa += pa(k);
    sb += pb(k);
    if (sa < sb - tol.majorization_tol) return false;
  }
  return true;
}

// A source state reaches a target deterministically by local operations and
// classical communication exactly when the target spectrum majorizes the
// source spectrum.
template <typename Scalar>
bool locc_convertible(const SchmidtVectorT<Scalar>& source, const SchmidtVectorT<Scalar>& target,
                      const ToleranceConfigT<Scalar>& tol = {}) {
  return majorizes(target, source, tol);
}

enum class EntanglementOrdering {
  LessEntangled,   // a's spectrum majorizes b's
  MoreEntangled,   // b's spectrum majorizes a's
  Equivalent,      // both, within tolerance
  Incommensurate,  // neither
};

inline const char* ordering_name(EntanglementOrdering o) {
  switch (o) {
    case EntanglementOrdering::LessEntangled: return "LessEntangled";
    case EntanglementOrdering::MoreEntangled: return "MoreEntangled";
    case EntanglementOrdering::Equivalent: return "Equivalent";
    case EntanglementOrdering::Incommensurate: return "Incommensurate";
  }
  return "Unknown";
}

template <typename Scalar>
EntanglementOrdering compare(const SchmidtVectorT<Scalar>& a, const SchmidtVectorT<Scalar>& b,
                             const ToleranceConfigT<Scalar>& tol = {}) {
  bool ab = majorizes(a, b, tol);
  bool ba = majorizes(b, a, tol);
  if (ab && ba) return EntanglementOrdering::Equivalent;
  if (ab) return EntanglementOrdering::LessEntangled;
  if (ba) return EntanglementOrdering::MoreEntangled;
  return EntanglementOrdering::Incommensurate;
}

// One Robin Hood transfer: entries i and j (0-based, i richer than j) are
// mixed as x_i' = (1-t) x_i + t x_j, x_j' = t x_i + (1-t) x_j with t in
// [0, 1/2], moving t (x_i - x_j) of mass downhill.
template <typename Scalar>
struct TTransformStepT {
  Index i;
  Index j;
  Scalar t;
};

template <typename Scalar>
struct TTransformChainT {
  std::vector<TTransformStepT<Scalar>> steps;
};

using TTransformStep = TTransformStepT<double>;
using TTransformChain = TTransformChainT<double>;

template <typename Scalar>
VectorX<Scalar> replay_chain(const TTransformChainT<Scalar>& chain, VectorX<Scalar> x) {
  for (const auto& step : chain.steps) {
    Scalar xi = x(step.i), xj = x(step.j);
    x(step.i) = (Scalar(1) - step.t) * xi + step.t * xj;
    x(step.j) = step.t * xi + (Scalar(1) - step.t) * xj;
  }
  return x;
}

template <typename Scalar>
VectorX<Scalar> replay_chain(const TTransformChainT<Scalar>& chain,
                             const SchmidtVectorT<Scalar>& from) {
  return replay_chain(chain, VectorX<Scalar>(from.probs()));
}

// Constructive form of the classical result that x majorizing y implies y is
// reachable from x by at most d-1 such transfers.  Each round takes the
// deepest index still holding surplus against the nearest deficit behind it;
// that choice pins at least one more coordinate to its target value per step
// and keeps every intermediate vector majorizing y.
template <typename Scalar>
TTransformChainT<Scalar> t_transform_chain(const SchmidtVectorT<Scalar>& from,
                                           const SchmidtVectorT<Scalar>& to,
                                           const ToleranceConfigT<Scalar>& tol = {}) {
  if (!majorizes(from, to, tol))
    throw Error(Errc::NotMajorized, "start spectrum does not majorize the end spectrum");

  Index n = std::max(from.dim(), to.dim());
  VectorX<Scalar> x = from.padded(n);
  VectorX<Scalar> y = to.padded(n);
  const Scalar settle = Scalar(1e-13);

  TTransformChainT<Scalar> chain;
  for (Index round = 0; round < n; ++round) {
    Index i = -1;
    for (Index k = n - 1; k >= 0; --k)
      if (x(k) - y(k) > settle) {
        i = k;
        break;
      }
    if (i < 0) break;
    Index j = -1;
    for (Index k = i + 1; k < n; ++k)
      if (y(k) - x(k) > settle) {
        j = k;
        break;
      }
    if (j < 0) break;

    Scalar delta = std::min(x(i) - y(i), y(j) - x(j));
    Scalar t = delta / (x(i) - x(j));
    chain.steps.push_back({i, j, t});
    x(i) -= delta;
    x(j) += delta;
  }

  if ((x - y).cwiseAbs().maxCoeff() > Scalar(1e-10))
    throw Error(Errc::NotMajorized, "transfer chain failed to settle on the end spectrum");
  return chain;
}

}  // namespace entangleid
