#pragma once

#include <optional>
#include <vector>

#include "lifa/engine.hpp"
#include "lifa/oracle.hpp"

namespace lifa::abstraction {

// Replayed mapping from oracle counters to engine times and stack addresses.
// The oracle trace is deterministic, so the context that each counter stands
// for can be reconstructed by walking the trace in order: the counter c was
// allocated while stepping state c-1, whose post-tick context names it.
class TraceTimes {
 public:
  TraceTimes(const syntax::Program& p, const std::vector<oracle::State>& trace,
             std::optional<int> k);

  Term stateTime(std::size_t stateIndex) const;     // engine time of the state
  Term allocTime(oracle::Time counter) const;       // time inside bound addresses
  Term stackAddr(oracle::KAddr kaddr) const;        // engine stack address

 private:
  std::vector<Term> stateTimes_;
  std::vector<Term> stackAddrs_;  // indexed by counter; [0] is halt
};

// Translate one oracle state into an engine world in the target domain.
engine::Analysis::World translateState(const syntax::Program& p, const oracle::State& s,
                                       std::size_t stateIndex, const TraceTimes& times,
                                       const domain::Domain& target);

// Pointwise abstraction of a whole collecting-semantics run, shaped into the
// analysis state space of `a` (join of the per-state embeddings).
Term alphaCollect(const syntax::Program& p, const oracle::CollectResult& run,
                  const engine::Analysis& a);

// Per-state simulation check: every abstracted oracle world must be covered
// by some world of the analysis result.
struct SoundnessReport {
  bool sound = true;
  std::optional<std::size_t> failingState;  // index into the oracle trace
};
SoundnessReport checkSoundness(const syntax::Program& p, const oracle::CollectResult& run,
                               const engine::Analysis& a, const Term& analysisSigma);

// Exact embedding of an oracle run into the concrete engine's state space
// (path/path, concrete cells); used by the equivalence check.
Term embedConcreteRun(const syntax::Program& p, const oracle::CollectResult& run,
                      const engine::Analysis& concreteAnalysis);

}  // namespace lifa::abstraction
