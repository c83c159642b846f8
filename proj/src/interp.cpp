#include "lifa/interp.hpp"

#include <set>

#include "lifa/time.hpp"

namespace lifa::interp {

using fx::Action;
using fx::Cell;
using syntax::Op;

namespace {

Term opSym(Op op) { return Term::sym(syntax::opToken(op)); }

Op opOf(const Term& t) {
  const std::string& s = t.symName();
  if (s == "+") return Op::Add;
  if (s == "-") return Op::Sub;
  return Op::Apply;
}

const Term& kRightTag() {
  static const Term t = Term::sym("#fr-right");
  return t;
}
const Term& kLeftTag() {
  static const Term t = Term::sym("#fr-left");
  return t;
}
const Term& kBranchTag() {
  static const Term t = Term::sym("#fr-branch");
  return t;
}
const Term& kValueTag() {
  static const Term t = Term::sym("#value");
  return t;
}

}  // namespace

Term labelPayload(int label) { return Term::integer(label); }

Term valuePayload(const Term& value) { return Term::seq({kValueTag(), value}); }

bool isValuePayload(const Term& payload) { return payload.kind() == Term::Kind::Seq; }

const Term& payloadValue(const Term& payload) { return payload.at(1); }

int payloadLabel(const Term& payload) {
  return isValuePayload(payload) ? timeabs::kSyntheticLabel
                                 : static_cast<int>(payload.asInt());
}

Term rightPendingFrame(Op op, int rightLabel, const Term& env) {
  return Term::seq({kRightTag(), opSym(op), Term::integer(rightLabel), env});
}

Term leftDoneFrame(Op op, const Term& value) {
  return Term::seq({kLeftTag(), opSym(op), value});
}

Term branchPendingFrame(int zeroLabel, int nonZeroLabel, const Term& env) {
  return Term::seq(
      {kBranchTag(), Term::integer(zeroLabel), Term::integer(nonZeroLabel), env});
}

Term storeEntry(const Term& value, bool rebound) {
  return Term::seq({value, rebound ? Term::set({Term::sym("#m")}) : Term::set({})});
}

const Term& entryValue(const Term& entry) { return entry.at(0); }

bool entryRebound(const Term& entry) { return entry.at(1).size() > 0; }

Term bindValue(const Term& store, const Term& addr, const Term& value) {
  auto old = store.mapFind(addr);
  Term entry = old ? storeEntry(join(entryValue(*old), value), true) : storeEntry(value, false);
  return mapPut(store, addr, entry);
}

Action denoteAtom(const Context& c, const Term& payload, const Term& env) {
  const fx::Monad& m = *c.monad;
  if (isValuePayload(payload)) return m.pure(payloadValue(payload));
  const syntax::Exp& e = c.program->byLabel(payloadLabel(payload));
  const syntax::Atom& a = e.atom();
  if (const auto* i = std::get_if<syntax::IntLit>(&a)) return m.pure(c.dom->intro(i->value));
  if (const auto* v = std::get_if<syntax::VarRef>(&a)) {
    auto addr = env.mapFind(Term::sym(v->name));
    if (!addr) return m.pure(c.dom->bottom());
    const fx::Monad* mp = c.monad;
    const domain::Domain* dom = c.dom;
    return m.bind(m.get(Cell::Store), [mp, dom, addr](const Term& store) {
      auto entry = store.mapFind(*addr);
      return mp->pure(entry ? entryValue(*entry) : dom->bottom());
    });
  }
  if (std::get_if<syntax::Lambda>(&a))
    return m.pure(c.dom->closureValue(domain::makeClosure(e.label, env)));
  return m.pure(c.dom->inputValue());  // InputRead
}

Action pushFrame(const Context& c, const Term& frame, int entryLabel) {
  const fx::Monad* m = c.monad;
  return m->bind(m->get(Cell::StackAddr), [m, frame, entryLabel](const Term& from) {
    return m->bind(m->get(Cell::StackStore), [m, frame, entryLabel, from](const Term& kstore) {
      return m->bind(m->get(Cell::Time), [m, frame, entryLabel, from, kstore](const Term& t) {
        Term to = timeabs::stackAddr(entryLabel, t);
        Term entry = Term::set({pairT(frame, from)});
        Term kstore2 = mapJoinAt(kstore, to, entry);
        return m->bind(m->put(Cell::StackStore, kstore2), [m, to](const Term&) {
          return m->put(Cell::StackAddr, to);
        });
      });
    });
  });
}

Action popFrame(const Context& c) {
  const fx::Monad* m = c.monad;
  return m->bind(m->get(Cell::StackAddr), [m](const Term& at) {
    return m->bind(m->get(Cell::StackStore), [m, at](const Term& kstore) {
      auto links = kstore.mapFind(at);
      TermVec choices = links ? links->items() : TermVec{};
      Action acc = m->zero();
      for (const Term& link : choices) {
        Action branch = m->bind(m->put(Cell::StackAddr, link.at(1)),
                                [m, link](const Term&) { return m->pure(link.at(0)); });
        acc = m->plus(acc, branch);
      }
      return acc;
    });
  });
}

Action liftChoices(const Context& c, const TermVec& choices) {
  const fx::Monad& m = *c.monad;
  Action acc = m.zero();
  for (const Term& x : choices) acc = m.plus(acc, m.pure(x));
  return acc;
}

Action refineCond(const Context& c, const Term& payload, bool zero) {
  const fx::Monad* m = c.monad;
  if (isValuePayload(payload)) return m->pure(Term::unit());
  const syntax::Exp& e = c.program->byLabel(payloadLabel(payload));
  const auto* v = std::get_if<syntax::VarRef>(&e.atom());
  if (!v) return m->pure(Term::unit());
  Term var = Term::sym(v->name);
  const domain::Domain* dom = c.dom;
  return m->bind(m->get(Cell::Env), [m, dom, var, zero](const Term& env) {
    auto addr = env.mapFind(var);
    if (!addr) return m->pure(Term::unit());
    Term a = *addr;
    return m->bind(m->get(Cell::Store), [m, dom, a, zero](const Term& store) {
      auto cur = store.mapFind(a);
      // Strong refinement is only sound while the address covers a single
      // binding; rebound (merged) addresses keep their joined value.
      if (!cur || entryRebound(*cur)) return m->pure(Term::unit());
      Term entry = storeEntry(dom->restrictCond(entryValue(*cur), zero), false);
      return m->put(Cell::Store, mapPut(store, a, entry));
    });
  });
}

Action tickClock(const Context& c, const Term& payload) {
  const fx::Monad* m = c.monad;
  int label = payloadLabel(payload);
  std::optional<int> k = c.contextDepth;
  return m->bind(m->get(Cell::Time), [m, label, k](const Term& t) {
    return m->bind(m->get(Cell::StackAddr), [m, label, k, t](const Term& at) {
      return m->put(Cell::Time, timeabs::tickTime(label, at, t, k));
    });
  });
}

// ---------------------------------------------------------------------------
// Reachability over the powerset stack store.

namespace {

std::set<Term> stackReachable(const Term& from, const Term& kstore) {
  std::set<Term> seen;
  std::vector<Term> work{from};
  while (!work.empty()) {
    Term k = work.back();
    work.pop_back();
    if (!seen.insert(k).second) continue;
    auto links = kstore.mapFind(k);
    if (!links) continue;
    for (const Term& link : links->items()) work.push_back(link.at(1));
  }
  return seen;
}

void envRoots(const Term& env, const std::set<syntax::Var>& vars, std::set<Term>& out) {
  for (const syntax::Var& x : vars) {
    auto addr = env.mapFind(Term::sym(x));
    if (addr) out.insert(*addr);
  }
}

void valueRoots(const Context& c, const Term& value, std::set<Term>& out) {
  for (const Term& clo : domain::valueClosures(value).items())
    envRoots(domain::closureEnv(clo), c.program->freeVars(domain::closureLambda(clo)), out);
}

void entryRoots(const Context& c, const Term& entry, std::set<Term>& out) {
  valueRoots(c, entryValue(entry), out);
}

void frameRoots(const Context& c, const Term& frame, std::set<Term>& out) {
  const std::string& tag = frame.at(0).symName();
  if (tag == "#fr-right") {
    envRoots(frame.at(3), c.program->freeVars(static_cast<int>(frame.at(2).asInt())), out);
  } else if (tag == "#fr-left") {
    valueRoots(c, frame.at(2), out);
  } else {
    std::set<syntax::Var> vars = c.program->freeVars(static_cast<int>(frame.at(1).asInt()));
    const auto& more = c.program->freeVars(static_cast<int>(frame.at(2).asInt()));
    vars.insert(more.begin(), more.end());
    envRoots(frame.at(3), vars, out);
  }
}

}  // namespace

Action collectGarbage(const Context& c, const Term& payload) {
  const fx::Monad* m = c.monad;
  if (!c.gcEnabled) return m->pure(Term::unit());
  const Context* cp = &c;
  return m->bind(m->get(Cell::Env), [m, cp, payload](const Term& env) {
    return m->bind(m->get(Cell::Store), [m, cp, payload, env](const Term& store) {
      return m->bind(m->get(Cell::StackAddr), [m, cp, payload, env, store](const Term& at) {
        return m->bind(
            m->get(Cell::StackStore),
            [m, cp, payload, env, store, at](const Term& kstore) {
              std::set<Term> liveStack = stackReachable(at, kstore);
              std::set<Term> roots;
              if (isValuePayload(payload)) {
                valueRoots(*cp, payloadValue(payload), roots);
              } else {
                envRoots(env, cp->program->freeVars(payloadLabel(payload)), roots);
              }
              for (const Term& k : liveStack) {
                auto links = kstore.mapFind(k);
                if (!links) continue;
                for (const Term& link : links->items()) frameRoots(*cp, link.at(0), roots);
              }
              std::set<Term> live;
              std::vector<Term> work(roots.begin(), roots.end());
              while (!work.empty()) {
                Term a = work.back();
                work.pop_back();
                if (!live.insert(a).second) continue;
                auto cell = store.mapFind(a);
                if (!cell) continue;
                std::set<Term> next;
                entryRoots(*cp, *cell, next);
                for (const Term& n : next) work.push_back(n);
              }
              Term kstore2 =
                  mapRestrict(kstore, [&](const Term& k) { return liveStack.count(k) > 0; });
              Term store2 = mapRestrict(store, [&](const Term& a) { return live.count(a) > 0; });
              return m->bind(m->put(Cell::StackStore, kstore2), [m, store2](const Term&) {
                return m->put(Cell::Store, store2);
              });
            });
      });
    });
  });
}

// ---------------------------------------------------------------------------

namespace {

Action finishStep(const Context& c, const Term& nextPayload) {
  const fx::Monad& m = *c.monad;
  return m.bind(collectGarbage(c, nextPayload),
                [&m, nextPayload](const Term&) { return m.pure(nextPayload); });
}

Action dispatchFrame(const Context& c, const Term& atomPayload, const Term& value,
                     const Term& frame) {
  const fx::Monad* m = c.monad;
  const Context* cp = &c;
  const std::string& tag = frame.at(0).symName();

  if (tag == "#fr-right") {
    Op op = opOf(frame.at(1));
    int rightLabel = static_cast<int>(frame.at(2).asInt());
    const Term& savedEnv = frame.at(3);
    return m->bind(m->put(Cell::Env, savedEnv), [m, cp, op, rightLabel, value](const Term&) {
      return m->bind(pushFrame(*cp, leftDoneFrame(op, value), rightLabel),
                     [cp, rightLabel](const Term&) {
                       return finishStep(*cp, labelPayload(rightLabel));
                     });
    });
  }

  if (tag == "#fr-left") {
    Op op = opOf(frame.at(1));
    const Term& leftValue = frame.at(2);
    if (op != Op::Apply)
      return finishStep(c, valuePayload(c.dom->primOp(op, leftValue, value)));
    return m->bind(m->get(Cell::Time), [m, cp, leftValue, value](const Term& t) {
      return m->bind(m->get(Cell::Store), [m, cp, leftValue, value, t](const Term& store) {
        return m->bind(
            liftChoices(*cp, cp->dom->closuresOf(leftValue)),
            [m, cp, value, t, store](const Term& clo) {
              const syntax::Exp& lam = cp->program->byLabel(domain::closureLambda(clo));
              const auto& lambda = std::get<syntax::Lambda>(lam.atom());
              Term addr = timeabs::bindAddr(lambda.param, t);
              Term env2 = mapPut(domain::closureEnv(clo), Term::sym(lambda.param), addr);
              Term store2 = bindValue(store, addr, value);
              int bodyLabel = lambda.body->label;
              return m->bind(m->put(Cell::Env, env2), [m, cp, store2, bodyLabel](const Term&) {
                return m->bind(m->put(Cell::Store, store2), [cp, bodyLabel](const Term&) {
                  return finishStep(*cp, labelPayload(bodyLabel));
                });
              });
            });
      });
    });
  }

  // branch frame
  int zeroLabel = static_cast<int>(frame.at(1).asInt());
  int nonZeroLabel = static_cast<int>(frame.at(2).asInt());
  const Term& savedEnv = frame.at(3);
  domain::Branches b = c.dom->condBranches(value);
  TermVec outcomes;
  if (b.zero) outcomes.push_back(Term::sym("#z"));
  if (b.nonZero) outcomes.push_back(Term::sym("#nz"));
  return m->bind(m->put(Cell::Env, savedEnv),
                 [m, cp, atomPayload, zeroLabel, nonZeroLabel, outcomes](const Term&) {
                   return m->bind(
                       liftChoices(*cp, outcomes),
                       [m, cp, atomPayload, zeroLabel, nonZeroLabel](const Term& which) {
                         bool zero = which.symName() == "#z";
                         return m->bind(refineCond(*cp, atomPayload, zero),
                                        [cp, zero, zeroLabel, nonZeroLabel](const Term&) {
                                          return finishStep(*cp, labelPayload(
                                                                     zero ? zeroLabel
                                                                          : nonZeroLabel));
                                        });
                       });
                 });
}

}  // namespace

Action step(const Context& c, const Term& payload) {
  const fx::Monad* m = c.monad;
  const Context* cp = &c;
  return m->bind(tickClock(c, payload), [m, cp, payload](const Term&) {
    return m->bind(m->get(Cell::Env), [m, cp, payload](const Term& env) {
      if (!isValuePayload(payload)) {
        const syntax::Exp& e = cp->program->byLabel(payloadLabel(payload));
        if (const auto* bin = std::get_if<syntax::BinExp>(&e.node)) {
          Term frame = rightPendingFrame(bin->op, bin->rhs->label, env);
          int left = bin->lhs->label;
          return m->bind(pushFrame(*cp, frame, left), [cp, left](const Term&) {
            return finishStep(*cp, labelPayload(left));
          });
        }
        if (const auto* branch = std::get_if<syntax::IfZeroExp>(&e.node)) {
          Term frame =
              branchPendingFrame(branch->ifZero->label, branch->ifNonZero->label, env);
          int cond = branch->cond->label;
          return m->bind(pushFrame(*cp, frame, cond), [cp, cond](const Term&) {
            return finishStep(*cp, labelPayload(cond));
          });
        }
      }
      // Atomic control: evaluate, pop, dispatch.
      return m->bind(denoteAtom(*cp, payload, env), [m, cp, payload](const Term& value) {
        return m->bind(popFrame(*cp), [cp, payload, value](const Term& frame) {
          return dispatchFrame(*cp, payload, value, frame);
        });
      });
    });
  });
}

}  // namespace lifa::interp
