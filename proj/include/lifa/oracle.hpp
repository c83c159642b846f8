#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "lifa/syntax.hpp"

namespace lifa::oracle {

// Direct transcription of the small-step relational semantics with garbage
// collection. Serves as ground truth for the generic engine; favors fidelity
// over speed.

using syntax::Exp;
using syntax::Op;
using syntax::Program;
using syntax::Var;

using Time = int64_t;  // strictly increasing counter; fresh along any trace

// Stack addresses are times; 0 is the distinguished halt address (times start
// at 1, so 0 is never allocated).
using KAddr = int64_t;
constexpr KAddr kHalt = 0;

struct Addr {
  Var var;
  Time time = 0;
  auto operator<=>(const Addr&) const = default;
};

using Env = std::map<Var, Addr>;

struct Closure {
  int lambdaLabel = -1;
  Env env;
  auto operator<=>(const Closure&) const = default;
};

struct Value {
  std::set<int64_t> ints;
  std::set<Closure> closures;
  auto operator<=>(const Value&) const = default;
  bool empty() const { return ints.empty() && closures.empty(); }
};

using Store = std::map<Addr, Value>;

// Control is either a program expression (by label) or a computed result.
struct Control {
  int label = -1;       // >= 0: program node
  std::optional<Value> result;  // set for computed results of primitive ops
  auto operator<=>(const Control&) const = default;
  static Control exp(int label) { return Control{label, std::nullopt}; }
  static Control value(Value v) { return Control{-1, std::move(v)}; }
};

struct RightPending {  // <hole op e, env>
  Op op = Op::Apply;
  int rightLabel = -1;
  Env env;
  auto operator<=>(const RightPending&) const = default;
};
struct LeftDone {  // <value op hole>
  Op op = Op::Apply;
  Value left;
  auto operator<=>(const LeftDone&) const = default;
};
struct BranchPending {  // <if0(hole){e}{e}, env>
  int zeroLabel = -1;
  int nonZeroLabel = -1;
  Env env;
  auto operator<=>(const BranchPending&) const = default;
};

using Frame = std::variant<RightPending, LeftDone, BranchPending>;

struct FrameLink {
  Frame frame;
  KAddr next = kHalt;
  auto operator<=>(const FrameLink&) const = default;
};

// Single valued: the concrete machine never merges stack entries.
using KStore = std::map<KAddr, FrameLink>;

struct State {
  Control control;
  Env env;
  Store store;
  KAddr kaddr = kHalt;
  KStore kstore;
  Time time = 1;
  auto operator<=>(const State&) const = default;
};

State initialState(const Program& p);

// Atomic denotation; nullopt signals a stuck lookup.
std::optional<Value> denoteAtom(const Program& p, const Control& c, const Env& env,
                                const Store& store, int64_t input);

int64_t applyPrim(Op op, int64_t a, int64_t b);  // checked arithmetic; throws on overflow

// All six transition rules; empty result means final or stuck.
std::vector<State> step(const Program& p, const State& s, int64_t input);

bool isFinal(const Program& p, const State& s);

std::set<KAddr> reachableStackAddrs(KAddr from, const KStore& kstore);
std::set<Addr> reachableAddrs(const Program& p, const Control& c, const Env& env,
                              const Store& store, KAddr kaddr, const KStore& kstore);

State collectGarbage(const Program& p, const State& s);

struct CollectResult {
  std::vector<State> states;  // discovery order; deterministic
  bool fuelExhausted = false;
};

CollectResult collect(const Program& p, int64_t input, bool gc, int64_t fuel);

// The value denoted by a final state's control.
std::optional<Value> finalValue(const Program& p, const State& s, int64_t input);

}  // namespace lifa::oracle
