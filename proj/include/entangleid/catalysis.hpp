#pragma once

#include <optional>
#include <vector>

#include "entangleid/detail/compositions.hpp"
#include "entangleid/majorization.hpp"
#include "entangleid/schmidt.hpp"
#include "entangleid/types.hpp"

namespace entangleid {

// Outcome of lending a catalyst spectrum c to an otherwise impossible
// conversion.  The conversion with the catalyst attached succeeds exactly
// when tensor(target, c) majorizes tensor(source, c); the catalyst comes back
// untouched afterwards.
template <typename Scalar>
struct CatalysisReportT {
  bool catalyzed = false;
  // Prefix indices k (1-based) where the bare pair fails majorization.
  std::vector<Index> violated_prefixes_without;
  // Per-prefix verdicts for the tensored pair, k = 1..dim(source)*dim(c).
  std::vector<bool> satisfied_with;
};

using CatalysisReport = CatalysisReportT<double>;

template <typename Scalar>
CatalysisReportT<Scalar> verify_catalyst(const SchmidtVectorT<Scalar>& source,
                                         const SchmidtVectorT<Scalar>& target,
                                         const SchmidtVectorT<Scalar>& catalyst,
                                         const ToleranceConfigT<Scalar>& tol = {}) {
  CatalysisReportT<Scalar> report;

  Index n = std::max(source.dim(), target.dim());
  VectorX<Scalar> s = source.padded(n), t = target.padded(n);
  Scalar ss = Scalar(0), st = Scalar(0);
  for (Index k = 0; k < n; ++k) {
    ss += s(k);
    st += t(k);
    if (st < ss - tol.majorization_tol) report.violated_prefixes_without.push_back(k + 1);
  }

  SchmidtVectorT<Scalar> ts = tensor(source, catalyst, tol);
  SchmidtVectorT<Scalar> tt = tensor(target, catalyst, tol);
  Index m = std::max(ts.dim(), tt.dim());
  VectorX<Scalar> ps = ts.padded(m), pt = tt.padded(m);
  ss = Scalar(0), st = Scalar(0);
  report.catalyzed = true;
  for (Index k = 0; k < m; ++k) {
    ss += ps(k);
    st += pt(k);
    bool ok = st >= ss - tol.majorization_tol;
    report.satisfied_with.push_back(ok);
    if (!ok) report.catalyzed = false;
  }
  return report;
}

inline constexpr int max_catalyst_dim = 6;
inline constexpr int max_search_resolution = 60;

// Grid search for a working catalyst: candidate spectra are the nonincreasing
// rational points with denominator `resolution`, tried from the most uniform
// downwards, so the first hit is the flattest catalyst on the grid.  Only
// meaningful when the bare conversion is impossible.
template <typename Scalar>
std::optional<SchmidtVectorT<Scalar>> search_catalyst(const SchmidtVectorT<Scalar>& source,
                                                      const SchmidtVectorT<Scalar>& target,
                                                      int catalyst_dim, int resolution,
                                                      const ToleranceConfigT<Scalar>& tol = {}) {
  if (catalyst_dim < 1 || resolution < 1)
    throw Error(Errc::DomainError, "catalyst dimension and resolution must be positive");
  if (catalyst_dim > max_catalyst_dim)
    throw Error(Errc::TooLarge,
                "catalyst dimension is capped at " + std::to_string(max_catalyst_dim));
  if (resolution > max_search_resolution)
    throw Error(Errc::TooLarge,
                "search resolution is capped at " + std::to_string(max_search_resolution));
  if (locc_convertible(source, target, tol))
    throw Error(Errc::AlreadyConvertible, "conversion needs no catalyst");

  std::optional<SchmidtVectorT<Scalar>> found;
  detail::for_each_descending_composition(resolution, catalyst_dim, [&](const std::vector<int>& c) {
    VectorX<Scalar> w(catalyst_dim);
    for (int i = 0; i < catalyst_dim; ++i) w(i) = Scalar(c[static_cast<std::size_t>(i)]);
    // Trailing zeros would re-test lower-dimensional candidates; they are
    // still valid spectra after canonicalization, so keep them.
    SchmidtVectorT<Scalar> candidate = normalize_and_sort(w, tol);
    if (verify_catalyst(source, target, candidate, tol).catalyzed) {
      found = candidate;
      return true;
    }
    return false;
  });
  return found;
}

}  // namespace entangleid
