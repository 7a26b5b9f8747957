#pragma once

#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "entangleid/approximation.hpp"
#include "entangleid/catalysis.hpp"
#include "entangleid/majorization.hpp"
#include "entangleid/rng.hpp"
#include "entangleid/schmidt.hpp"
#include "entangleid/types.hpp"

namespace entangleid {

// Identification by shared entanglement: per round the verifier tests whether
// the prover still holds the agreed joint state, and a prover who cannot
// produce it passes with at most the overlap ceiling of their best
// approximation.  Rounds repeat until the first failure or the round budget
// is exhausted; acceptance means every round passed.

// Shared state is the maximally entangled state on dim x dim.
struct MaximallyEntangledConfig {
  Index dim;
};

// Shared state is the target of a catalyzed conversion: the honest prover
// holds `source` plus the catalyst and reaches `target` on demand, while the
// catalyst never leaves their side.
template <typename Scalar>
struct CatalysisConfigT {
  SchmidtVectorT<Scalar> source;
  SchmidtVectorT<Scalar> target;
  SchmidtVectorT<Scalar> catalyst;
};

using CatalysisConfig = CatalysisConfigT<double>;

template <typename Scalar>
class ProtocolConfigT {
 public:
  using Kind = std::variant<MaximallyEntangledConfig, CatalysisConfigT<Scalar>>;

  static ProtocolConfigT maximally_entangled(Index dim, long long rounds,
                                             const ToleranceConfigT<Scalar>& tol = {}) {
    if (dim < 2) throw Error(Errc::DimensionTooSmall, "shared state needs dimension >= 2");
    return ProtocolConfigT(MaximallyEntangledConfig{dim}, rounds, tol);
  }

  // Construction verifies the catalyst actually enables the conversion; a
  // protocol built on a dead catalyst would silently test the wrong state.
  static ProtocolConfigT catalysis(const SchmidtVectorT<Scalar>& source,
                                   const SchmidtVectorT<Scalar>& target,
                                   const SchmidtVectorT<Scalar>& catalyst, long long rounds,
                                   const ToleranceConfigT<Scalar>& tol = {}) {
    if (!verify_catalyst(source, target, catalyst, tol).catalyzed)
      throw Error(Errc::InvariantViolation, "catalyst does not enable the conversion");
    return ProtocolConfigT(CatalysisConfigT<Scalar>{source, target, catalyst}, rounds, tol);
  }

  const Kind& kind() const { return kind_; }
  long long rounds() const { return rounds_; }
  const ToleranceConfigT<Scalar>& tol() const { return tol_; }

  // Spectrum the verifier tests against each round.
  SchmidtVectorT<Scalar> expected_spectrum() const {
    if (const auto* me = std::get_if<MaximallyEntangledConfig>(&kind_)) {
      VectorX<Scalar> u = VectorX<Scalar>::Constant(me->dim, Scalar(1) / Scalar(me->dim));
      return normalize_and_sort(u, tol_);
    }
    return std::get<CatalysisConfigT<Scalar>>(kind_).target;
  }

 private:
  ProtocolConfigT(Kind kind, long long rounds, const ToleranceConfigT<Scalar>& tol)
      : kind_(std::move(kind)), rounds_(rounds), tol_(tol) {
    if (rounds_ < 1) throw Error(Errc::DomainError, "round count must be positive");
    tol_.validate();
  }

  Kind kind_;
  long long rounds_;
  ToleranceConfigT<Scalar> tol_;
};

using ProtocolConfig = ProtocolConfigT<double>;

struct HonestBob {};
struct SeparableImpostor {};
struct LoccImpostor {};

template <typename Scalar>
struct FixedStateImpostorT {
  SchmidtVectorT<Scalar> spectrum;
};

using FixedStateImpostor = FixedStateImpostorT<double>;

template <typename Scalar>
using AdversaryStrategyT =
    std::variant<HonestBob, SeparableImpostor, LoccImpostor, FixedStateImpostorT<Scalar>>;

using AdversaryStrategy = AdversaryStrategyT<double>;

// An impostor restricted to unentangled states passes a round of the
// maximally entangled protocol with probability at most 1/d.
template <typename Scalar = double>
Scalar separable_impersonation_bound(Index dim) {
  if (dim < 2) throw Error(Errc::DimensionTooSmall, "bound needs dimension >= 2");
  return Scalar(1) / Scalar(dim);
}

// Per-round pass probability of each adversary model.  The separable bound
// only speaks about the maximally entangled protocol, and the optimizing
// impostor only about the catalysis protocol; asking for the other pairing is
// a caller error rather than zero.
template <typename Scalar>
Scalar round_pass_probability(const ProtocolConfigT<Scalar>& config,
                              const AdversaryStrategyT<Scalar>& strategy) {
  return std::visit(
      [&](const auto& s) -> Scalar {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, HonestBob>) {
          return Scalar(1);
        } else if constexpr (std::is_same_v<S, SeparableImpostor>) {
          const auto* me = std::get_if<MaximallyEntangledConfig>(&config.kind());
          if (!me)
            throw Error(Errc::StrategyKindMismatch,
                        "separable impostor bound applies to the maximally entangled protocol");
          return separable_impersonation_bound<Scalar>(me->dim);
        } else if constexpr (std::is_same_v<S, LoccImpostor>) {
          const auto* cat = std::get_if<CatalysisConfigT<Scalar>>(&config.kind());
          if (!cat)
            throw Error(Errc::StrategyKindMismatch,
                        "optimizing impostor applies to the catalysis protocol");
          return solve_pure_approximation(cat->target, cat->source, config.tol()).p_error;
        } else {
          static_assert(std::is_same_v<S, FixedStateImpostorT<Scalar>>);
          return bhattacharyya_sq(config.expected_spectrum(), s.spectrum);
        }
      },
      strategy);
}

struct ProtocolTranscript {
  std::vector<std::uint8_t> outcomes;  // per executed round, 1 = passed
  bool accepted = false;

  Index rounds_executed() const { return static_cast<Index>(outcomes.size()); }
};

namespace detail {

// One session at a fixed per-round pass probability; stops at the first
// failed round, so rejected sessions are short.
inline ProtocolTranscript run_rounds(double pass_probability, long long rounds, RngStream& rng) {
  ProtocolTranscript transcript;
  transcript.outcomes.reserve(static_cast<std::size_t>(std::min<long long>(rounds, 1 << 20)));
  for (long long r = 0; r < rounds; ++r) {
    bool passed = rng.uniform() < pass_probability;
    transcript.outcomes.push_back(passed ? 1 : 0);
    if (!passed) return transcript;
  }
  transcript.accepted = true;
  return transcript;
}

}  // namespace detail

template <typename Scalar>
ProtocolTranscript run_session(const ProtocolConfigT<Scalar>& config,
                               const AdversaryStrategyT<Scalar>& strategy, RngStream& rng) {
  double p = static_cast<double>(round_pass_probability(config, strategy));
  return detail::run_rounds(p, config.rounds(), rng);
}

struct FalseAcceptEstimate {
  double rate = 0.0;
  double std_error = 0.0;
  long long accepted = 0;
  long long trials = 0;
};

// Monte Carlo acceptance rate over independent sessions.  Every trial gets
// its own substream keyed by trial index, so the estimate is reproducible
// regardless of trial order or early stopping inside sessions.
template <typename Scalar>
FalseAcceptEstimate estimate_false_accept(const ProtocolConfigT<Scalar>& config,
                                          const AdversaryStrategyT<Scalar>& strategy,
                                          long long trials, std::uint64_t seed) {
  if (trials < 1) throw Error(Errc::DomainError, "trial count must be positive");
  double p = static_cast<double>(round_pass_probability(config, strategy));
  long long accepted = 0;
  for (long long t = 0; t < trials; ++t) {
    RngStream rng(seed, static_cast<std::uint64_t>(t));
    if (detail::run_rounds(p, config.rounds(), rng).accepted) ++accepted;
  }
  FalseAcceptEstimate estimate;
  estimate.accepted = accepted;
  estimate.trials = trials;
  estimate.rate = static_cast<double>(accepted) / static_cast<double>(trials);
  estimate.std_error = std::sqrt(estimate.rate * (1.0 - estimate.rate) / static_cast<double>(trials));
  return estimate;
}

}  // namespace entangleid
