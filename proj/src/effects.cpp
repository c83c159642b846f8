#include "lifa/effects.hpp"

#include <stdexcept>

namespace lifa::fx {

const char* cellName(Cell c) {
  switch (c) {
    case Cell::Env: return "env";
    case Cell::Store: return "store";
    case Cell::StackAddr: return "stack-addr";
    case Cell::StackStore: return "stack-store";
    case Cell::Time: return "time";
  }
  return "?";
}

Term runAction(const Action& a, const std::vector<Term>& stateArgs) {
  Action cur = a;
  for (const Term& s : stateArgs) cur = cur.apply(s);
  return cur.term();
}

namespace {

// ---------------------------------------------------------------------------
// Identity base

class IdMonad final : public Monad {
 public:
  Action pure(const Term& x) const override { return Action(x); }

  Action bind(const Action& x, const Cont& f) const override { return f(x.term()); }

  Action zero() const override {
    throw std::logic_error("identity monad: no nondeterminism effect");
  }
  Action plus(const Action&, const Action&) const override {
    throw std::logic_error("identity monad: no nondeterminism effect");
  }

  Action get(Cell c) const override {
    throw std::logic_error(std::string("no state layer provides cell ") + cellName(c));
  }
  Action put(Cell c, const Term&) const override {
    throw std::logic_error(std::string("no state layer provides cell ") + cellName(c));
  }

  Action bottomAt(const Shape& carried) const override { return Action(carried.bottom()); }
  Action joinOf(const Action& a, const Action& b) const override {
    return Action(join(a.term(), b.term()));
  }

  Term transfer(const StepFn& f, const Term& sigma, StepMemo*) const override {
    return f(sigma).term();
  }
  Action embed(const TransferFn& f, const Term& payload) const override {
    return Action(f(payload));
  }

  Term inject(const Term& payload) const override { return payload; }
  Shape sigmaShape(const Shape& payload) const override { return payload; }
  int stateArity() const override { return 0; }
};

// ---------------------------------------------------------------------------
// State layer S[s]: m(A x s) behind an s-argument. A group of cells shares
// one layer; the state value is the bare cell for a singleton group and a
// tuple otherwise.

class StateMonad final : public Monad {
 public:
  StateMonad(std::vector<CellSpec> cells, MonadPtr inner)
      : cells_(std::move(cells)), inner_(std::move(inner)) {
    if (cells_.empty()) throw std::invalid_argument("state layer: empty cell group");
  }

  Action pure(const Term& x) const override {
    auto inner = inner_;
    return Action::fn([inner, x](const Term& s) { return inner->pure(pairT(x, s)); });
  }

  Action bind(const Action& x, const Cont& f) const override {
    auto inner = inner_;
    return Action::fn([inner, x, f](const Term& s) {
      return inner->bind(x.apply(s), [f](const Term& xs) {
        return f(xs.at(0)).apply(xs.at(1));
      });
    });
  }

  Action zero() const override {
    auto inner = inner_;
    return Action::fn([inner](const Term&) { return inner->zero(); });
  }

  Action plus(const Action& a, const Action& b) const override {
    auto inner = inner_;
    return Action::fn(
        [inner, a, b](const Term& s) { return inner->plus(a.apply(s), b.apply(s)); });
  }

  Action get(Cell c) const override {
    auto inner = inner_;
    if (auto idx = indexOf(c)) {
      std::size_t i = *idx;
      bool single = cells_.size() == 1;
      return Action::fn([inner, i, single](const Term& s) {
        return inner->pure(pairT(single ? s : s.at(i), s));
      });
    }
    return Action::fn([inner, c](const Term& s) {
      return inner->bind(inner->get(c), [inner, s](const Term& v) {
        return inner->pure(pairT(v, s));
      });
    });
  }

  Action put(Cell c, const Term& v) const override {
    auto inner = inner_;
    if (auto idx = indexOf(c)) {
      std::size_t i = *idx;
      bool single = cells_.size() == 1;
      return Action::fn([inner, i, single, v](const Term& s) {
        Term s2 = v;
        if (!single) {
          TermVec xs = s.items();
          xs[i] = v;
          s2 = Term::seq(std::move(xs));
        }
        return inner->pure(pairT(Term::unit(), s2));
      });
    }
    return Action::fn([inner, c, v](const Term& s) {
      return inner->bind(inner->put(c, v), [inner, s](const Term&) {
        return inner->pure(pairT(Term::unit(), s));
      });
    });
  }

  Action bottomAt(const Shape& carried) const override {
    auto inner = inner_;
    Shape sh = Shape::pair(carried, groupShape());
    return Action::fn([inner, sh](const Term&) { return inner->bottomAt(sh); });
  }

  Action joinOf(const Action& a, const Action& b) const override {
    auto inner = inner_;
    return Action::fn(
        [inner, a, b](const Term& s) { return inner->joinOf(a.apply(s), b.apply(s)); });
  }

  Term transfer(const StepFn& f, const Term& sigma, StepMemo* memo) const override {
    return inner_->transfer(
        [f](const Term& xs) { return f(xs.at(0)).apply(xs.at(1)); }, sigma, memo);
  }

  Action embed(const TransferFn& f, const Term& payload) const override {
    auto inner = inner_;
    return Action::fn(
        [inner, f, payload](const Term& s) { return inner->embed(f, pairT(payload, s)); });
  }

  Term inject(const Term& payload) const override {
    return inner_->inject(pairT(payload, initialState()));
  }

  Shape sigmaShape(const Shape& payload) const override {
    Shape cell = cells_.size() == 1 && cells_[0].lattice ? *cells_[0].lattice : Shape::opaque();
    return inner_->sigmaShape(Shape::pair(payload, cell));
  }

  int stateArity() const override { return 1 + inner_->stateArity(); }

  Term initialState() const {
    if (cells_.size() == 1) return cells_[0].initial;
    TermVec xs;
    for (const CellSpec& c : cells_) xs.push_back(c.initial);
    return Term::seq(std::move(xs));
  }

 private:
  std::optional<std::size_t> indexOf(Cell c) const {
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i].id == c) return i;
    return std::nullopt;
  }

  Shape groupShape() const {
    if (cells_.size() == 1) {
      if (!cells_[0].lattice)
        throw std::logic_error("state layer: cell has no lattice structure for bottom");
      return *cells_[0].lattice;
    }
    throw std::logic_error("state layer: tuple cell groups carry no lattice structure");
  }

  std::vector<CellSpec> cells_;
  MonadPtr inner_;
};

// ---------------------------------------------------------------------------
// Nondeterminism layer P: computations carry finite sets of results.

class NondetMonad final : public Monad {
 public:
  explicit NondetMonad(MonadPtr inner) : inner_(std::move(inner)) {}

  Action pure(const Term& x) const override { return inner_->pure(Term::set({x})); }

  Action bind(const Action& x, const Cont& f) const override {
    auto inner = inner_;
    return inner->bind(x, [inner, f](const Term& xs) {
      Action acc = inner->bottomAt(Shape::set());
      for (const Term& x1 : xs.items()) acc = inner->joinOf(acc, f(x1));
      return acc;
    });
  }

  Action zero() const override { return inner_->bottomAt(Shape::set()); }
  Action plus(const Action& a, const Action& b) const override { return inner_->joinOf(a, b); }

  Action get(Cell c) const override {
    auto inner = inner_;
    return inner->bind(inner->get(c),
                       [inner](const Term& s) { return inner->pure(Term::set({s})); });
  }
  Action put(Cell c, const Term& v) const override {
    auto inner = inner_;
    return inner->bind(inner->put(c, v),
                       [inner](const Term& u) { return inner->pure(Term::set({u})); });
  }

  Action bottomAt(const Shape&) const override { return inner_->bottomAt(Shape::set()); }
  Action joinOf(const Action& a, const Action& b) const override { return inner_->joinOf(a, b); }

  Term transfer(const StepFn& f, const Term& sigma, StepMemo* memo) const override {
    auto inner = inner_;
    return inner->transfer(
        [inner, f, memo](const Term& xs) {
          Action acc = inner->bottomAt(Shape::set());
          for (const Term& x : xs.items()) acc = inner->joinOf(acc, foldStep(f, x, memo));
          return acc;
        },
        sigma, memo);
  }

  Action embed(const TransferFn& f, const Term& payload) const override {
    return inner_->embed(f, Term::set({payload}));
  }

  Term inject(const Term& payload) const override { return inner_->inject(Term::set({payload})); }
  Shape sigmaShape(const Shape&) const override { return inner_->sigmaShape(Shape::set()); }
  int stateArity() const override { return inner_->stateArity(); }

 private:
  static Action foldStep(const StepFn& f, const Term& x, StepMemo* memo) {
    if (memo) {
      auto it = memo->find(x);
      if (it != memo->end()) return Action(it->second);
    }
    Action r = f(x);
    if (memo && r.ground()) memo->emplace(x, r.term());
    return r;
  }

  MonadPtr inner_;
};

// ---------------------------------------------------------------------------
// Flow layer F[s]: computations carry finite maps from results to the cell,
// giving one cell value per result.

class FlowMonad final : public Monad {
 public:
  FlowMonad(CellSpec cell, MonadPtr inner) : cell_(std::move(cell)), inner_(std::move(inner)) {
    if (!cell_.lattice)
      throw std::invalid_argument("flow layer: cell must carry lattice structure");
  }

  Action pure(const Term& x) const override {
    auto inner = inner_;
    return Action::fn(
        [inner, x](const Term& s) { return inner->pure(Term::map({{x, s}})); });
  }

  Action bind(const Action& x, const Cont& f) const override {
    auto inner = inner_;
    return Action::fn([inner, x, f](const Term& s) {
      return inner->bind(x.apply(s), [inner, f](const Term& m) {
        Action acc = inner->bottomAt(Shape::map());
        for (const auto& [x1, s1] : m.entries()) acc = inner->joinOf(acc, f(x1).apply(s1));
        return acc;
      });
    });
  }

  Action zero() const override {
    auto inner = inner_;
    return Action::fn([inner](const Term&) { return inner->bottomAt(Shape::map()); });
  }

  Action plus(const Action& a, const Action& b) const override {
    auto inner = inner_;
    return Action::fn(
        [inner, a, b](const Term& s) { return inner->joinOf(a.apply(s), b.apply(s)); });
  }

  Action get(Cell c) const override {
    auto inner = inner_;
    if (c == cell_.id)
      return Action::fn([inner](const Term& s) { return inner->pure(Term::map({{s, s}})); });
    return Action::fn([inner, c](const Term& s) {
      return inner->bind(inner->get(c), [inner, s](const Term& v) {
        return inner->pure(Term::map({{v, s}}));
      });
    });
  }

  Action put(Cell c, const Term& v) const override {
    auto inner = inner_;
    if (c == cell_.id)
      return Action::fn(
          [inner, v](const Term&) { return inner->pure(Term::map({{Term::unit(), v}})); });
    return Action::fn([inner, c, v](const Term& s) {
      return inner->bind(inner->put(c, v), [inner, s](const Term& u) {
        return inner->pure(Term::map({{u, s}}));
      });
    });
  }

  Action bottomAt(const Shape&) const override {
    auto inner = inner_;
    return Action::fn([inner](const Term&) { return inner->bottomAt(Shape::map()); });
  }

  Action joinOf(const Action& a, const Action& b) const override {
    auto inner = inner_;
    return Action::fn(
        [inner, a, b](const Term& s) { return inner->joinOf(a.apply(s), b.apply(s)); });
  }

  Term transfer(const StepFn& f, const Term& sigma, StepMemo* memo) const override {
    auto inner = inner_;
    return inner->transfer(
        [inner, f, memo](const Term& m) {
          Action acc = inner->bottomAt(Shape::map());
          for (const auto& [x, s] : m.entries())
            acc = inner->joinOf(acc, foldStep(f, x, s, memo));
          return acc;
        },
        sigma, memo);
  }

  Action embed(const TransferFn& f, const Term& payload) const override {
    auto inner = inner_;
    return Action::fn(
        [inner, f, payload](const Term& s) { return inner->embed(f, Term::map({{payload, s}})); });
  }

  Term inject(const Term& payload) const override {
    return inner_->inject(Term::map({{payload, cell_.initial}}));
  }

  Shape sigmaShape(const Shape&) const override { return inner_->sigmaShape(Shape::map()); }
  int stateArity() const override { return 1 + inner_->stateArity(); }

 private:
  static Action foldStep(const StepFn& f, const Term& x, const Term& s, StepMemo* memo) {
    Term key = pairT(x, s);
    if (memo) {
      auto it = memo->find(key);
      if (it != memo->end()) return Action(it->second);
    }
    Action r = f(x).apply(s);
    if (memo && r.ground()) memo->emplace(std::move(key), r.term());
    return r;
  }

  CellSpec cell_;
  MonadPtr inner_;
};

}  // namespace

MonadPtr makeIdentity() { return std::make_shared<IdMonad>(); }

MonadPtr makeStateLayer(std::vector<CellSpec> cells, MonadPtr inner) {
  return std::make_shared<StateMonad>(std::move(cells), std::move(inner));
}

MonadPtr makeNondetLayer(MonadPtr inner) { return std::make_shared<NondetMonad>(std::move(inner)); }

MonadPtr makeFlowLayer(CellSpec cell, MonadPtr inner) {
  return std::make_shared<FlowMonad>(std::move(cell), std::move(inner));
}

}  // namespace lifa::fx
