#pragma once

#include <functional>
#include <initializer_list>
#include <optional>

#include "entangleid/rng.hpp"
#include "entangleid/schmidt.hpp"
#include "entangleid/types.hpp"

namespace testutil {

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline entangleid::SchmidtVector sv(std::initializer_list<double> xs) {
  return entangleid::SchmidtVector::from_probabilities(vec(xs));
}

// Runs fn and reports the library error code it threw, if any.
template <typename Fn>
std::optional<entangleid::Errc> thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const entangleid::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Flat Dirichlet sample, sorted: a generic random spectrum.
inline entangleid::SchmidtVector random_spectrum(entangleid::RngStream& rng, Eigen::Index d) {
  Eigen::VectorXd w(d);
  for (Eigen::Index i = 0; i < d; ++i) w(i) = -std::log(1.0 - rng.uniform());
  return entangleid::normalize_and_sort(w);
}

// Random spectrum kept away from the simplex boundary: every entry is at
// least floor/d.  Grid-granularity comparisons need this, because the overlap
// gradient (1/2)sqrt(p_i/q_i) is unbounded where entries vanish.
inline entangleid::SchmidtVector interior_spectrum(entangleid::RngStream& rng, Eigen::Index d,
                                                   double floor = 0.3) {
  Eigen::VectorXd w = (1.0 - floor) * random_spectrum(rng, d).probs() +
                      floor * Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
  return entangleid::SchmidtVector::from_probabilities(w);
}

}  // namespace testutil
