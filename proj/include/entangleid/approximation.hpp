#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "entangleid/detail/compositions.hpp"
#include "entangleid/majorization.hpp"
#include "entangleid/schmidt.hpp"
#include "entangleid/types.hpp"

namespace entangleid {

// The optimization solved here: an impostor holding a state with spectrum r
// may move to any spectrum q that majorizes r.  The best cheat against a
// verifier expecting spectrum p maximizes the overlap ceiling
// bhattacharyya_sq(p, q), so the per-round escape probability is
//
//   p_error = max (sum_i sqrt(p_i q_i))^2
//             s.t. sum_{i<=k} q_i >= zeta_k for k = 1..d-1, sum q = 1, q >= 0
//
// with zeta_k the prefix sums of r.

// Prefix-sum floor per k = 1..d; the last entry is pinned to exactly one so
// block masses always add up to the full unit.
template <typename Scalar>
struct ConstraintSpecT {
  VectorX<Scalar> zeta;

  static ConstraintSpecT from_source(const SchmidtVectorT<Scalar>& r, Index d) {
    ConstraintSpecT spec;
    VectorX<Scalar> rp = r.padded(d);
    spec.zeta.resize(d);
    Scalar run = Scalar(0);
    for (Index k = 0; k < d; ++k) {
      run += rp(k);
      spec.zeta(k) = run;
    }
    spec.zeta(d - 1) = Scalar(1);
    return spec;
  }
};

using ConstraintSpec = ConstraintSpecT<double>;

enum class SolveMethod { ClosedForm, ActiveSet, BruteForce };

inline const char* method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::ClosedForm: return "ClosedForm";
    case SolveMethod::ActiveSet: return "ActiveSet";
    case SolveMethod::BruteForce: return "BruteForce";
  }
  return "Unknown";
}

template <typename Scalar>
struct OptimizationResultT {
  SchmidtVectorT<Scalar> q_star;
  Scalar p_error = Scalar(0);
  // Binding prefix constraints, 1-based k, ascending.
  std::vector<Index> active_set;
  // lambda(k-1) is the multiplier of prefix k = 1..d-1, zero when slack.  A
  // constraint that pins the entire unit mass (zeta_k = 1) is reported with
  // zero multiplier; its dual weight is indistinguishable from mu on the
  // support of q_star.
  VectorX<Scalar> lambda;
  Scalar mu = Scalar(0);
  Scalar kkt_residual = Scalar(0);
  SolveMethod method = SolveMethod::ClosedForm;
};

using OptimizationResult = OptimizationResultT<double>;

template <typename Scalar>
struct SingleConstraintResultT {
  Scalar bound;
  SchmidtVectorT<Scalar> q;
};

template <typename Scalar>
struct MinOverKResultT {
  Index k_star;
  Scalar bound;
};

namespace detail {

// Exact maximizer once the binding prefixes are fixed: between consecutive
// binding prefixes the mass is pinned, and within such a block the overlap
// sum is maximized by splitting the block mass proportionally to p.
template <typename Scalar>
VectorX<Scalar> block_allocation(const VectorX<Scalar>& p, const VectorX<Scalar>& zeta,
                                 const std::vector<Index>& active) {
  Index d = p.size();
  VectorX<Scalar> q = VectorX<Scalar>::Zero(d);
  Index lo = 0;
  Scalar mass_done = Scalar(0);
  std::vector<Index> bounds(active.begin(), active.end());
  bounds.push_back(d);
  for (Index hi : bounds) {
    Scalar mass = zeta(hi - 1) - mass_done;
    Scalar psum = p.segment(lo, hi - lo).sum();
    if (psum > Scalar(0)) {
      q.segment(lo, hi - lo) = p.segment(lo, hi - lo) * (mass / psum);
    } else if (mass > Scalar(0)) {
      // Mass forced onto indices the verifier never accepts; reachable only
      // through non-canonical inputs, so refuse rather than pick arbitrarily.
      throw Error(Errc::DegenerateTarget,
                  "constraints force mass onto zero-probability targets");
    }
    mass_done = zeta(hi - 1);
    lo = hi;
  }
  return q;
}

template <typename Scalar>
struct MultiplierFit {
  VectorX<Scalar> lambda;  // full length d-1
  Scalar mu = Scalar(0);
  Scalar residual = Scalar(0);
};

// Least-squares reconstruction of the multipliers from stationarity
//   (1/2) sqrt(p_i / q_i) = mu - sum_{k in active, k >= i} lambda_k
// over the support of q.  Constraints with zeta_k = 1 are excluded as
// unknowns (gauged to zero) because on the support of q they act exactly
// like the normalization constraint.  The returned residual folds in primal
// feasibility, activeness of the reported set, and multiplier negativity, so
// a small value certifies the whole first-order system.
template <typename Scalar>
MultiplierFit<Scalar> fit_multipliers(const VectorX<Scalar>& p, const VectorX<Scalar>& q,
                                      const VectorX<Scalar>& zeta,
                                      const std::vector<Index>& active, Scalar eq_tol) {
  Index d = p.size();
  MultiplierFit<Scalar> fit;
  fit.lambda = VectorX<Scalar>::Zero(d > 1 ? d - 1 : 0);

  std::vector<Index> unknowns;  // active k with zeta_k < 1, 1-based
  for (Index k : active)
    if (zeta(k - 1) < Scalar(1) - eq_tol) unknowns.push_back(k);

  std::vector<Index> rows;
  for (Index i = 0; i < d; ++i)
    if (q(i) > Scalar(0)) rows.push_back(i);

  Scalar stationarity = Scalar(0);
  if (!rows.empty()) {
    Index nu = static_cast<Index>(unknowns.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a(rows.size(), nu + 1);
    VectorX<Scalar> b(rows.size());
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
      Index i = rows[ri];
      for (Index c = 0; c < nu; ++c)
        a(static_cast<Index>(ri), c) = (unknowns[static_cast<std::size_t>(c)] >= i + 1)
                                           ? Scalar(-1)
                                           : Scalar(0);
      a(static_cast<Index>(ri), nu) = Scalar(1);
      b(static_cast<Index>(ri)) = Scalar(0.5) * std::sqrt(p(i) / q(i));
    }
    VectorX<Scalar> x = a.completeOrthogonalDecomposition().solve(b);
    stationarity = (a * x - b).cwiseAbs().maxCoeff();
    for (Index c = 0; c < nu; ++c)
      fit.lambda(unknowns[static_cast<std::size_t>(c)] - 1) = x(c);
    fit.mu = x(nu);
  }

  Scalar worst = stationarity;
  // Multiplier sign, then clamp so the reported values honor lambda >= 0.
  if (fit.lambda.size() > 0) {
    worst = std::max(worst, -fit.lambda.minCoeff());
    fit.lambda = fit.lambda.cwiseMax(Scalar(0));
  }

  Scalar run = Scalar(0);
  std::size_t ai = 0;
  for (Index k = 1; k <= d; ++k) {
    run += q(k - 1);
    if (k < d) worst = std::max(worst, zeta(k - 1) - run);
    if (ai < active.size() && active[ai] == k) {
      worst = std::max(worst, std::abs(run - zeta(k - 1)));
      ++ai;
    }
  }
  worst = std::max(worst, std::abs(run - Scalar(1)));
  fit.residual = worst;
  return fit;
}

}  // namespace detail

// Relaxation keeping a single prefix constraint sum_{i<=k} q_i >= zeta_k.  If
// p already satisfies it the bound is one; otherwise the optimum lifts the
// first k entries of p to total mass zeta_k and scales the tail down, giving
//   bound = (sqrt(zeta_k P_k) + sqrt((1 - zeta_k)(1 - P_k)))^2,
// where P_k is the k-th prefix sum of p.
template <typename Scalar>
SingleConstraintResultT<Scalar> single_constraint_bound(const SchmidtVectorT<Scalar>& p,
                                                        Scalar zeta_k, Index k,
                                                        const ToleranceConfigT<Scalar>& tol = {}) {
  Index d = p.dim();
  if (k < 1 || k >= d)
    throw Error(Errc::IndexOutOfRange, "prefix index must satisfy 1 <= k <= d-1");
  if (zeta_k < Scalar(0) || zeta_k > Scalar(1))
    throw Error(Errc::DomainError, "prefix floor must lie in [0, 1]");

  VectorX<Scalar> pv = p.probs();
  Scalar pk = pv.head(k).sum();
  if (pk >= zeta_k - tol.majorization_tol)
    return {Scalar(1), p};

  VectorX<Scalar> q(d);
  q.head(k) = pv.head(k) * (zeta_k / pk);
  q.tail(d - k) = pv.tail(d - k) * ((Scalar(1) - zeta_k) / (Scalar(1) - pk));
  Scalar root = std::sqrt(zeta_k * pk) + std::sqrt((Scalar(1) - zeta_k) * (Scalar(1) - pk));
  return {root * root, normalize_and_sort(q, tol)};
}

// Tightest of the single-prefix relaxations.  Always an upper bound on the
// fully constrained optimum; it matches exactly when only one constraint
// binds there.  Ties resolve to the smallest k.
template <typename Scalar>
MinOverKResultT<Scalar> min_over_k_bound(const SchmidtVectorT<Scalar>& p,
                                         const SchmidtVectorT<Scalar>& r,
                                         const ToleranceConfigT<Scalar>& tol = {}) {
  Index d = std::max(p.dim(), r.dim());
  if (d < 2) return {0, Scalar(1)};
  SchmidtVectorT<Scalar> pp = normalize_and_sort(p.padded(d), tol);
  ConstraintSpecT<Scalar> spec = ConstraintSpecT<Scalar>::from_source(r, d);
  MinOverKResultT<Scalar> best{0, Scalar(2)};
  for (Index k = 1; k < d; ++k) {
    Scalar bound = single_constraint_bound(pp, spec.zeta(k - 1), k, tol).bound;
    if (bound < best.bound) best = {k, bound};
  }
  return best;
}

// Active-set solve of the full problem.  Starts from the unconstrained
// optimum q = p, repeatedly adds the most violated prefix to the binding set
// and re-solves the pinned-block problem exactly; once feasible, drops any
// binding prefix whose multiplier comes out negative (its removal improves
// the objective) and resumes.  Block multipliers come from
// nu_j = (1/2) sqrt(P_j / M_j): lambda at a boundary is the jump in nu, so a
// negative jump marks the constraint to drop.
template <typename Scalar>
OptimizationResultT<Scalar> solve_pure_approximation(const SchmidtVectorT<Scalar>& p,
                                                     const SchmidtVectorT<Scalar>& r,
                                                     const ToleranceConfigT<Scalar>& tol = {}) {
  Index d = std::max(p.dim(), r.dim());
  VectorX<Scalar> pv = p.padded(d);
  ConstraintSpecT<Scalar> spec = ConstraintSpecT<Scalar>::from_source(r, d);
  const VectorX<Scalar>& zeta = spec.zeta;

  std::vector<Index> active;  // 1-based, ascending
  VectorX<Scalar> q;
  const unsigned long long cap = 1ull << std::min<Index>(d, 40);
  unsigned long long iter = 0;

  while (true) {
    if (++iter > cap) throw Error(Errc::NoConvergence, "active-set iteration cap exceeded");
    q = detail::block_allocation(pv, zeta, active);

    // Most violated prefix not yet binding; ties resolve to the smallest k.
    Index worst_k = 0;
    Scalar worst_gap = tol.majorization_tol;
    Scalar run = Scalar(0);
    std::size_t ai = 0;
    for (Index k = 1; k < d; ++k) {
      run += q(k - 1);
      bool is_active = ai < active.size() && active[ai] == k;
      if (is_active) ++ai;
      Scalar gap = zeta(k - 1) - run;
      if (!is_active && gap > worst_gap) {
        worst_gap = gap;
        worst_k = k;
      }
    }
    if (worst_k > 0) {
      active.insert(std::upper_bound(active.begin(), active.end(), worst_k), worst_k);
      continue;
    }

    if (active.empty()) break;

    // Redundant binding prefix: zero mass between it and its predecessor
    // means it is implied and its block has no interior optimum.
    Index redundant = 0;
    Scalar prev = Scalar(0);
    for (Index k : active) {
      if (zeta(k - 1) - prev <= Scalar(0)) {
        redundant = k;
        break;
      }
      prev = zeta(k - 1);
    }
    if (redundant > 0) {
      active.erase(std::find(active.begin(), active.end(), redundant));
      continue;
    }

    // nu per block; the final block may carry zero mass (zeta already one),
    // which reads as an infinite nu and never triggers a drop.
    std::vector<Index> bounds(active.begin(), active.end());
    bounds.push_back(d);
    std::vector<Scalar> nu;
    Index lo = 0;
    prev = Scalar(0);
    for (Index hi : bounds) {
      Scalar mass = zeta(hi - 1) - prev;
      Scalar psum = pv.segment(lo, hi - lo).sum();
      nu.push_back(mass > Scalar(0) ? Scalar(0.5) * std::sqrt(psum / mass)
                                    : std::numeric_limits<Scalar>::infinity());
      prev = zeta(hi - 1);
      lo = hi;
    }
    Index drop_k = 0;
    Scalar most_negative = Scalar(-1e-12);
    for (std::size_t j = 0; j < active.size(); ++j) {
      Scalar lam = nu[j + 1] - nu[j];
      if (std::isfinite(lam) && lam < most_negative) {
        most_negative = lam;
        drop_k = active[j];
      }
    }
    if (drop_k > 0) {
      active.erase(std::find(active.begin(), active.end(), drop_k));
      continue;
    }
    break;
  }

  OptimizationResultT<Scalar> result{normalize_and_sort(q, tol)};
  result.p_error = bhattacharyya_sq(p, result.q_star);
  result.active_set = active;
  detail::MultiplierFit<Scalar> fit = detail::fit_multipliers(pv, q, zeta, active, tol.eq_tol);
  result.lambda = fit.lambda;
  result.mu = fit.mu;
  result.kkt_residual = fit.residual;
  result.method = active.empty() ? SolveMethod::ClosedForm : SolveMethod::ActiveSet;
  return result;
}

inline constexpr Index max_oracle_dim = 5;
inline constexpr int max_oracle_resolution = 200;

// Exhaustive check of every nonincreasing grid spectrum with denominator
// `resolution`.  Exists to certify the solver, not to be fast; the first
// maximizer in lexicographic order wins ties.
template <typename Scalar>
OptimizationResultT<Scalar> brute_force_oracle(const SchmidtVectorT<Scalar>& p,
                                               const SchmidtVectorT<Scalar>& r, int resolution,
                                               const ToleranceConfigT<Scalar>& tol = {}) {
  Index d = std::max(p.dim(), r.dim());
  if (d > max_oracle_dim)
    throw Error(Errc::TooLarge, "oracle dimension is capped at " + std::to_string(max_oracle_dim));
  if (resolution < 1) throw Error(Errc::DomainError, "oracle resolution must be positive");
  if (resolution > max_oracle_resolution)
    throw Error(Errc::TooLarge,
                "oracle resolution is capped at " + std::to_string(max_oracle_resolution));

  VectorX<Scalar> pv = p.padded(d);
  ConstraintSpecT<Scalar> spec = ConstraintSpecT<Scalar>::from_source(r, d);
  const Scalar g = Scalar(resolution);

  std::vector<int> best;
  Scalar best_overlap = Scalar(-1);
  detail::for_each_descending_composition(resolution, static_cast<int>(d),
                                          [&](const std::vector<int>& c) {
    int prefix = 0;
    for (Index k = 1; k < d; ++k) {
      prefix += c[static_cast<std::size_t>(k - 1)];
      if (static_cast<Scalar>(prefix) < g * (spec.zeta(k - 1) - tol.majorization_tol))
        return false;  // infeasible, keep enumerating
    }
    Scalar overlap = Scalar(0);
    for (Index i = 0; i < d; ++i)
      overlap += std::sqrt(pv(i) * static_cast<Scalar>(c[static_cast<std::size_t>(i)]) / g);
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best = c;
    }
    return false;
  });

  VectorX<Scalar> q(d);
  for (Index i = 0; i < d; ++i) q(i) = static_cast<Scalar>(best[static_cast<std::size_t>(i)]) / g;
  OptimizationResultT<Scalar> result{normalize_and_sort(q, tol)};
  best_overlap = std::min(best_overlap, Scalar(1));
  result.p_error = best_overlap * best_overlap;
  // Binding within half a grid step counts as active; multipliers are not
  // reconstructed by the oracle.
  Scalar run = Scalar(0);
  for (Index k = 1; k < d; ++k) {
    run += q(k - 1);
    if (std::abs(run - spec.zeta(k - 1)) <= Scalar(0.5) / g) result.active_set.push_back(k);
  }
  result.lambda = VectorX<Scalar>::Zero(d > 1 ? d - 1 : 0);
  result.mu = std::numeric_limits<Scalar>::quiet_NaN();
  result.kkt_residual = std::numeric_limits<Scalar>::quiet_NaN();
  result.method = SolveMethod::BruteForce;
  return result;
}

// Recomputes the first-order certificate for a solver result from scratch and
// returns its max-norm violation.  Refuses points where q vanished on an
// index the verifier accepts with positive probability: the gradient is
// infinite there and no finite certificate exists.
template <typename Scalar>
Scalar kkt_check(const OptimizationResultT<Scalar>& result, const SchmidtVectorT<Scalar>& p,
                 const SchmidtVectorT<Scalar>& r, const ToleranceConfigT<Scalar>& tol = {}) {
  Index d = std::max({p.dim(), r.dim(), result.q_star.dim()});
  VectorX<Scalar> pv = p.padded(d);
  VectorX<Scalar> qv = result.q_star.padded(d);
  for (Index i = 0; i < d; ++i)
    if (qv(i) <= Scalar(0) && pv(i) > tol.eq_tol)
      throw Error(Errc::ZeroAtPositiveTarget,
                  "q_star vanishes at index " + std::to_string(i) +
                      " where the target probability is positive");
  ConstraintSpecT<Scalar> spec = ConstraintSpecT<Scalar>::from_source(r, d);
  return detail::fit_multipliers(pv, qv, spec.zeta, result.active_set, tol.eq_tol).residual;
}

// Least number of protocol rounds driving the per-round escape probability
// p_e below eps: smallest n with p_e^n <= eps.
inline long long repetitions_for_error(double round_error, double eps) {
  if (!(round_error > 0.0) || !(round_error < 1.0))
    throw Error(Errc::DomainError, "per-round error probability must lie in (0, 1)");
  if (!(eps > 0.0) || !(eps < 1.0))
    throw Error(Errc::DomainError, "error budget must lie in (0, 1)");
  long long n = static_cast<long long>(std::ceil(std::log(eps) / std::log(round_error)));
  if (n < 1) n = 1;
  while (std::pow(round_error, static_cast<double>(n)) > eps) ++n;
  while (n > 1 && std::pow(round_error, static_cast<double>(n - 1)) <= eps) --n;
  return n;
}

}  // namespace entangleid
