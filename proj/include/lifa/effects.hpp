#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lifa/term.hpp"

namespace lifa::fx {

// Machine cells mediated by the state effect.
enum class Cell : uint8_t { Env, Store, StackAddr, StackStore, Time };

const char* cellName(Cell c);

// The denotation of a monadic computation. For a stack with n state-like
// layers it is a curried function of the n outer cell values; once every
// function layer is applied the result is a first-order Term.
class Action {
 public:
  using Fn = std::function<Action(const Term&)>;

  Action(Term ground) : term_(std::move(ground)), fn_(nullptr) {}  // NOLINT(implicit)
  static Action fn(Fn f) {
    Action a{Term::unit()};
    a.fn_ = std::make_shared<Fn>(std::move(f));
    return a;
  }

  bool ground() const { return fn_ == nullptr; }
  const Term& term() const {
    if (!ground()) throw std::logic_error("action: not ground");
    return term_;
  }
  Action apply(const Term& s) const {
    if (ground()) throw std::logic_error("action: ground value applied to a state");
    return (*fn_)(s);
  }

 private:
  Term term_;
  std::shared_ptr<const Fn> fn_;
};

using Cont = std::function<Action(const Term&)>;       // A -> m(B)
using StepFn = std::function<Action(const Term&)>;     // payload -> m(payload)
using TransferFn = std::function<Term(const Term&)>;   // induced system state map

// Memo for per-element contributions inside transition transfers; keyed by
// the fully ground element fed to the folded function.
using StepMemo = std::unordered_map<Term, Term, TermHash>;

struct CellSpec {
  Cell id = Cell::Env;
  Term initial;
  std::optional<Shape> lattice;  // set when the cell is join-structured
};

// Operation table of one composed monad. Layers build tables from their
// inner layer's table; the generic interpreter sees only this interface.
class Monad {
 public:
  virtual ~Monad() = default;

  virtual Action pure(const Term& x) const = 0;
  virtual Action bind(const Action& x, const Cont& f) const = 0;

  virtual Action zero() const = 0;
  virtual Action plus(const Action& a, const Action& b) const = 0;

  virtual Action get(Cell c) const = 0;
  virtual Action put(Cell c, const Term& v) const = 0;

  // Join-semilattice structure on computations, used by the nondeterminism
  // and flow layers sitting outside this monad.
  virtual Action bottomAt(const Shape& carried) const = 0;
  virtual Action joinOf(const Action& a, const Action& b) const = 0;

  // Mapping to the induced transition system: transfer realizes a monadic
  // step as a state-space map, embed goes the other way.
  virtual Term transfer(const StepFn& f, const Term& sigma, StepMemo* memo) const = 0;
  virtual Action embed(const TransferFn& f, const Term& payload) const = 0;

  virtual Term inject(const Term& payload) const = 0;
  virtual Shape sigmaShape(const Shape& payload) const = 0;

  // Number of function layers; an action becomes ground after this many
  // applications. Used by extensional law checks.
  virtual int stateArity() const = 0;
};

using MonadPtr = std::shared_ptr<const Monad>;

MonadPtr makeIdentity();
MonadPtr makeStateLayer(std::vector<CellSpec> cells, MonadPtr inner);
MonadPtr makeNondetLayer(MonadPtr inner);
MonadPtr makeFlowLayer(CellSpec cell, MonadPtr inner);

// Runs an action on explicit outer-state arguments until ground.
Term runAction(const Action& a, const std::vector<Term>& stateArgs);

}  // namespace lifa::fx
