#include "lifa/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace lifa::oracle {

using syntax::AtomExp;
using syntax::BinExp;
using syntax::IfZeroExp;
using syntax::InputRead;
using syntax::IntLit;
using syntax::Lambda;
using syntax::VarRef;

State initialState(const Program& p) {
  State s;
  s.control = Control::exp(p.root()->label);
  s.kaddr = kHalt;
  s.time = 1;
  return s;
}

std::optional<Value> denoteAtom(const Program& p, const Control& c, const Env& env,
                                const Store& store, int64_t input) {
  if (c.result) return *c.result;
  const Exp& e = p.byLabel(c.label);
  if (!e.isAtomic()) return std::nullopt;
  const syntax::Atom& a = e.atom();
  Value v;
  if (const auto* i = std::get_if<IntLit>(&a)) {
    v.ints.insert(i->value);
    return v;
  }
  if (const auto* x = std::get_if<VarRef>(&a)) {
    auto addr = env.find(x->name);
    if (addr == env.end()) return std::nullopt;
    auto cell = store.find(addr->second);
    if (cell == store.end()) return std::nullopt;
    return cell->second;
  }
  if (std::get_if<Lambda>(&a)) {
    v.closures.insert(Closure{e.label, env});
    return v;
  }
  if (std::get_if<InputRead>(&a)) {
    v.ints.insert(input);
    return v;
  }
  return std::nullopt;
}

int64_t applyPrim(Op op, int64_t a, int64_t b) {
  int64_t r = 0;
  bool ovf = op == Op::Add ? __builtin_add_overflow(a, b, &r) : __builtin_sub_overflow(a, b, &r);
  if (ovf) throw std::overflow_error("integer overflow in primitive operator");
  return r;
}

namespace {

const Exp& expAt(const Program& p, int label) { return p.byLabel(label); }

bool isSingleInt(const Value& v, int64_t& out) {
  if (v.closures.empty() && v.ints.size() == 1) {
    out = *v.ints.begin();
    return true;
  }
  return false;
}

}  // namespace

std::vector<State> step(const Program& p, const State& s, int64_t input) {
  std::vector<State> out;
  // Compound control: push a frame at the current time and descend.
  if (!s.control.result) {
    const Exp& e = expAt(p, s.control.label);
    if (const auto* b = std::get_if<BinExp>(&e.node)) {
      State n = s;
      n.control = Control::exp(b->lhs->label);
      n.kstore[s.time] = FrameLink{RightPending{b->op, b->rhs->label, s.env}, s.kaddr};
      n.kaddr = s.time;
      n.time = s.time + 1;
      out.push_back(std::move(n));
      return out;
    }
    if (const auto* f = std::get_if<IfZeroExp>(&e.node)) {
      State n = s;
      n.control = Control::exp(f->cond->label);
      n.kstore[s.time] = FrameLink{BranchPending{f->ifZero->label, f->ifNonZero->label, s.env},
                                   s.kaddr};
      n.kaddr = s.time;
      n.time = s.time + 1;
      out.push_back(std::move(n));
      return out;
    }
  }
  // Atomic control: denote and dispatch against the top frame.
  std::optional<Value> v = denoteAtom(p, s.control, s.env, s.store, input);
  if (!v) return out;  // stuck
  auto top = s.kstore.find(s.kaddr);
  if (top == s.kstore.end()) return out;  // final (or dangling stack address)
  const Frame& fr = top->second.frame;
  KAddr ret = top->second.next;

  if (const auto* rp = std::get_if<RightPending>(&fr)) {
    State n = s;
    n.control = Control::exp(rp->rightLabel);
    n.env = rp->env;
    n.kstore[s.time] = FrameLink{LeftDone{rp->op, *v}, ret};
    n.kaddr = s.time;
    n.time = s.time + 1;
    out.push_back(std::move(n));
    return out;
  }
  if (const auto* ld = std::get_if<LeftDone>(&fr)) {
    if (ld->op == Op::Apply) {
      // Application requires exactly a closure on the left.
      if (ld->left.closures.size() != 1 || !ld->left.ints.empty()) return out;
      const Closure& clo = *ld->left.closures.begin();
      const Exp& lam = expAt(p, clo.lambdaLabel);
      const auto& lambda = std::get<Lambda>(lam.atom());
      State n = s;
      Addr addr{lambda.param, s.time};
      Env env2 = clo.env;
      env2[lambda.param] = addr;
      n.control = Control::exp(lambda.body->label);
      n.env = std::move(env2);
      n.store[addr] = *v;  // fresh time: never occupied on a concrete trace
      n.kaddr = ret;
      n.time = s.time + 1;
      out.push_back(std::move(n));
      return out;
    }
    int64_t a = 0, b = 0;
    if (!isSingleInt(ld->left, a) || !isSingleInt(*v, b)) return out;
    Value r;
    r.ints.insert(applyPrim(ld->op, a, b));
    State n = s;
    n.control = Control::value(std::move(r));
    n.kaddr = ret;
    n.time = s.time + 1;
    out.push_back(std::move(n));
    return out;
  }
  const auto& bp = std::get<BranchPending>(fr);
  if (!v->closures.empty() || v->ints.size() != 1) return out;  // if0 needs one integer
  int64_t c = *v->ints.begin();
  State n = s;
  n.control = Control::exp(c == 0 ? bp.zeroLabel : bp.nonZeroLabel);
  n.env = bp.env;
  n.kaddr = ret;
  n.time = s.time + 1;
  out.push_back(std::move(n));
  return out;
}

bool isFinal(const Program& p, const State& s) {
  if (s.kaddr != kHalt) return false;
  if (s.control.result) return true;
  return p.byLabel(s.control.label).isAtomic();
}

std::set<KAddr> reachableStackAddrs(KAddr from, const KStore& kstore) {
  std::set<KAddr> seen;
  std::vector<KAddr> work{from};
  while (!work.empty()) {
    KAddr k = work.back();
    work.pop_back();
    if (!seen.insert(k).second) continue;
    auto it = kstore.find(k);
    if (it != kstore.end()) work.push_back(it->second.next);
  }
  return seen;
}

namespace {

std::set<Addr> closureRoots(const Program& p, const Value& v) {
  std::set<Addr> out;
  for (const Closure& c : v.closures) {
    for (const Var& y : p.freeVars(c.lambdaLabel)) {
      auto it = c.env.find(y);
      if (it != c.env.end()) out.insert(it->second);
    }
  }
  return out;
}

std::set<Addr> frameRoots(const Program& p, const Frame& fr) {
  std::set<Addr> out;
  if (const auto* rp = std::get_if<RightPending>(&fr)) {
    for (const Var& x : p.freeVars(rp->rightLabel)) {
      auto it = rp->env.find(x);
      if (it != rp->env.end()) out.insert(it->second);
    }
  } else if (const auto* ld = std::get_if<LeftDone>(&fr)) {
    out = closureRoots(p, ld->left);
  } else {
    const auto& bp = std::get<BranchPending>(fr);
    std::set<Var> vars = p.freeVars(bp.zeroLabel);
    const auto& more = p.freeVars(bp.nonZeroLabel);
    vars.insert(more.begin(), more.end());
    for (const Var& x : vars) {
      auto it = bp.env.find(x);
      if (it != bp.env.end()) out.insert(it->second);
    }
  }
  return out;
}

}  // namespace

std::set<Addr> reachableAddrs(const Program& p, const Control& c, const Env& env,
                              const Store& store, KAddr kaddr, const KStore& kstore) {
  std::set<Addr> roots;
  if (c.result) {
    roots = closureRoots(p, *c.result);
  } else {
    for (const Var& x : p.freeVars(c.label)) {
      auto it = env.find(x);
      if (it != env.end()) roots.insert(it->second);
    }
  }
  for (KAddr k : reachableStackAddrs(kaddr, kstore)) {
    auto it = kstore.find(k);
    if (it == kstore.end()) continue;
    std::set<Addr> fr = frameRoots(p, it->second.frame);
    roots.insert(fr.begin(), fr.end());
  }
  // Close over value roots through the store.
  std::set<Addr> seen;
  std::vector<Addr> work(roots.begin(), roots.end());
  while (!work.empty()) {
    Addr a = work.back();
    work.pop_back();
    if (!seen.insert(a).second) continue;
    auto cell = store.find(a);
    if (cell == store.end()) continue;
    for (const Addr& next : closureRoots(p, cell->second)) work.push_back(next);
  }
  return seen;
}

State collectGarbage(const Program& p, const State& s) {
  std::set<KAddr> liveK = reachableStackAddrs(s.kaddr, s.kstore);
  std::set<Addr> live = reachableAddrs(p, s.control, s.env, s.store, s.kaddr, s.kstore);
  State out = s;
  out.kstore.clear();
  for (const auto& [k, v] : s.kstore)
    if (liveK.count(k)) out.kstore.emplace(k, v);
  out.store.clear();
  for (const auto& [a, v] : s.store)
    if (live.count(a)) out.store.emplace(a, v);
  return out;
}

CollectResult collect(const Program& p, int64_t input, bool gc, int64_t fuel) {
  if (fuel <= 0) throw std::invalid_argument("collect: fuel must be positive");
  CollectResult r;
  std::set<State> seen;
  std::vector<State> frontier{initialState(p)};
  int64_t spent = 0;
  while (!frontier.empty()) {
    std::vector<State> next;
    for (const State& s : frontier) {
      if (!seen.insert(s).second) continue;
      r.states.push_back(s);
      if (spent++ >= fuel) {
        r.fuelExhausted = true;
        return r;
      }
      for (State& n : step(p, s, input)) {
        State g = gc ? collectGarbage(p, n) : std::move(n);
        if (!seen.count(g)) next.push_back(std::move(g));
      }
    }
    frontier = std::move(next);
  }
  return r;
}

std::optional<Value> finalValue(const Program& p, const State& s, int64_t input) {
  if (!isFinal(p, s)) return std::nullopt;
  return denoteAtom(p, s.control, s.env, s.store, input);
}

}  // namespace lifa::oracle
