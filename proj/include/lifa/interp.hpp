#pragma once

#include <optional>

#include "lifa/domain.hpp"
#include "lifa/effects.hpp"
#include "lifa/syntax.hpp"
#include "lifa/term.hpp"

namespace lifa::interp {

// Control payloads are either program labels or computed result values.
Term labelPayload(int label);
Term valuePayload(const Term& value);
bool isValuePayload(const Term& payload);
const Term& payloadValue(const Term& payload);
int payloadLabel(const Term& payload);  // synthetic label for value payloads

// Frames, stored in the stack store as Set{Seq[frame, return-addr]}.
Term rightPendingFrame(syntax::Op op, int rightLabel, const Term& env);
Term leftDoneFrame(syntax::Op op, const Term& value);
Term branchPendingFrame(int zeroLabel, int nonZeroLabel, const Term& env);

// Store entries pair the bound value with a multiplicity flag: an address
// bound once along every covered trace may be refined strongly; one that was
// rebound (merged) only admits weak treatment. Binding an address that is
// already present joins the value and marks it rebound.
Term storeEntry(const Term& value, bool rebound);
const Term& entryValue(const Term& entry);
bool entryRebound(const Term& entry);
Term bindValue(const Term& store, const Term& addr, const Term& value);

// Everything the generic step needs: the effect table, the value domain,
// the time policy, and the program for label resolution. The step function
// never looks behind the Monad interface, so every stack runs the same code.
struct Context {
  const fx::Monad* monad = nullptr;
  const domain::Domain* dom = nullptr;
  const syntax::Program* program = nullptr;
  std::optional<int> contextDepth;  // k; nullopt = unbounded (concrete)
  bool gcEnabled = false;
};

fx::Action denoteAtom(const Context& c, const Term& payload, const Term& env);
fx::Action pushFrame(const Context& c, const Term& frame, int entryLabel);
fx::Action popFrame(const Context& c);
fx::Action liftChoices(const Context& c, const TermVec& choices);
fx::Action refineCond(const Context& c, const Term& payload, bool zero);
fx::Action tickClock(const Context& c, const Term& payload);
fx::Action collectGarbage(const Context& c, const Term& payload);

// One small step of the machine over the effect interface.
fx::Action step(const Context& c, const Term& payload);

}  // namespace lifa::interp
