#include "lifa/abstraction.hpp"

#include <stdexcept>

#include "lifa/time.hpp"

namespace lifa::abstraction {

using engine::Analysis;
using oracle::State;

namespace {

int controlLabel(const oracle::Control& c) {
  return c.result ? timeabs::kSyntheticLabel : c.label;
}

}  // namespace

TraceTimes::TraceTimes(const syntax::Program& p, const std::vector<State>& trace,
                       std::optional<int> k) {
  stateTimes_.reserve(trace.size());
  stackAddrs_.resize(trace.size() + 1, timeabs::haltAddr());
  Term t = timeabs::initialTime();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].time != static_cast<oracle::Time>(i) + 1)
      throw std::logic_error("trace times must advance by one per step");
    stateTimes_.push_back(t);
    // Post-tick context of the step that leaves state i; it names counter i+1.
    t = timeabs::tickTime(controlLabel(trace[i].control), Term::unit(), t, k);
    if (i + 1 < trace.size())
      stackAddrs_[i + 1] = timeabs::stackAddr(controlLabel(trace[i + 1].control), t);
  }
  (void)p;
}

Term TraceTimes::stateTime(std::size_t stateIndex) const { return stateTimes_.at(stateIndex); }

Term TraceTimes::allocTime(oracle::Time counter) const {
  // Counter c is allocated by the step out of state c-1; its engine value is
  // the post-tick context, which equals state c's time. A counter first
  // appears inside state c itself, so any counter seen in a recorded state
  // has a recorded time.
  if (counter <= 0 || static_cast<std::size_t>(counter) >= stateTimes_.size())
    throw std::out_of_range("allocTime: counter outside of trace");
  return stateTimes_.at(static_cast<std::size_t>(counter));
}

Term TraceTimes::stackAddr(oracle::KAddr kaddr) const {
  if (kaddr == oracle::kHalt) return timeabs::haltAddr();
  if (kaddr < 0 || static_cast<std::size_t>(kaddr) >= stackAddrs_.size())
    throw std::out_of_range("stackAddr: counter outside of trace");
  return stackAddrs_.at(static_cast<std::size_t>(kaddr));
}

namespace {

Term translateEnv(const oracle::Env& env, const TraceTimes& times) {
  TermPairVec entries;
  for (const auto& [var, addr] : env)
    entries.emplace_back(Term::sym(var), timeabs::bindAddr(addr.var, times.allocTime(addr.time)));
  return Term::map(std::move(entries));
}

Term translateValue(const oracle::Value& v, const TraceTimes& times,
                    const domain::Domain& target) {
  TermVec ints;
  for (int64_t i : v.ints) ints.push_back(Term::integer(i));
  TermVec clos;
  for (const oracle::Closure& c : v.closures)
    clos.push_back(domain::makeClosure(c.lambdaLabel, translateEnv(c.env, times)));
  return domain::makeValue(domain::alphaInts(target.kind(), Term::set(std::move(ints))),
                           Term::set(std::move(clos)));
}

Term translateFrame(const oracle::Frame& fr, const TraceTimes& times,
                    const domain::Domain& target) {
  if (const auto* rp = std::get_if<oracle::RightPending>(&fr))
    return interp::rightPendingFrame(rp->op, rp->rightLabel, translateEnv(rp->env, times));
  if (const auto* ld = std::get_if<oracle::LeftDone>(&fr))
    return interp::leftDoneFrame(ld->op, translateValue(ld->left, times, target));
  const auto& bp = std::get<oracle::BranchPending>(fr);
  return interp::branchPendingFrame(bp.zeroLabel, bp.nonZeroLabel, translateEnv(bp.env, times));
}

}  // namespace

Analysis::World translateState(const syntax::Program& p, const State& s, std::size_t stateIndex,
                               const TraceTimes& times, const domain::Domain& target) {
  (void)p;
  Analysis::World w;
  w.payload = s.control.result
                  ? interp::valuePayload(translateValue(*s.control.result, times, target))
                  : interp::labelPayload(s.control.label);
  w.env = translateEnv(s.env, times);
  w.stackAddr = times.stackAddr(s.kaddr);
  w.time = times.stateTime(stateIndex);
  // Concrete addresses sharing one abstract address join their values and
  // carry the rebound mark so strong refinement claims stay honest.
  std::map<Term, std::pair<Term, int>> grouped;
  for (const auto& [addr, v] : s.store) {
    Term key = timeabs::bindAddr(addr.var, times.allocTime(addr.time));
    Term value = translateValue(v, times, target);
    auto [it, fresh] = grouped.emplace(key, std::make_pair(value, 1));
    if (!fresh) {
      it->second.first = join(it->second.first, value);
      it->second.second += 1;
    }
  }
  TermPairVec store;
  for (const auto& [key, group] : grouped)
    store.emplace_back(key, interp::storeEntry(group.first, group.second > 1));
  w.store = Term::map(std::move(store));
  TermPairVec kstore;
  for (const auto& [k, link] : s.kstore)
    kstore.emplace_back(times.stackAddr(k),
                        Term::set({pairT(translateFrame(link.frame, times, target),
                                         times.stackAddr(link.next))}));
  w.stackStore = Term::map(std::move(kstore));
  return w;
}

Term alphaCollect(const syntax::Program& p, const oracle::CollectResult& run,
                  const Analysis& a) {
  TraceTimes times(p, run.states, a.config().k);
  Term sigma = a.monad().sigmaShape(Shape::opaque()).bottom();
  for (std::size_t i = 0; i < run.states.size(); ++i)
    sigma = join(sigma, a.embedWorld(translateState(p, run.states[i], i, times, a.dom())));
  return sigma;
}

SoundnessReport checkSoundness(const syntax::Program& p, const oracle::CollectResult& run,
                               const Analysis& a, const Term& analysisSigma) {
  TraceTimes times(p, run.states, a.config().k);
  SoundnessReport r;
  for (std::size_t i = 0; i < run.states.size(); ++i) {
    Term el = a.embedWorld(translateState(p, run.states[i], i, times, a.dom()));
    if (!approxLeq(el, analysisSigma)) {
      r.sound = false;
      r.failingState = i;
      return r;
    }
  }
  return r;
}

Term embedConcreteRun(const syntax::Program& p, const oracle::CollectResult& run,
                      const Analysis& concreteAnalysis) {
  return alphaCollect(p, run, concreteAnalysis);
}

}  // namespace lifa::abstraction
