#include "lifa/engine.hpp"

#include <sstream>
#include <stdexcept>

#include "lifa/time.hpp"

namespace lifa::engine {

using fx::Cell;
using fx::CellSpec;

std::optional<DataStore> dataStoreFromName(std::string_view s) {
  if (s == "path-sen") return DataStore::PathSensitive;
  if (s == "flow-sen") return DataStore::FlowSensitive;
  if (s == "flow-insen") return DataStore::FlowInsensitive;
  return std::nullopt;
}

std::optional<StackStore> stackStoreFromName(std::string_view s) {
  if (s == "path-sen") return StackStore::PathSensitive;
  if (s == "flow-insen") return StackStore::FlowInsensitive;
  return std::nullopt;
}

const char* dataStoreName(DataStore d) {
  switch (d) {
    case DataStore::PathSensitive: return "path-sen";
    case DataStore::FlowSensitive: return "flow-sen";
    case DataStore::FlowInsensitive: return "flow-insen";
  }
  return "?";
}

const char* stackStoreName(StackStore s) {
  return s == StackStore::PathSensitive ? "path-sen" : "flow-insen";
}

std::string Config::describe() const {
  std::ostringstream o;
  o << "domain=" << domain::domainName(domain);
  if (k) o << " kcfa=" << *k;
  else o << " concrete";
  o << " data-store=" << dataStoreName(dataStore)
    << " stack-store=" << stackStoreName(stackStore) << " gc=" << (gc ? "on" : "off");
  if (input) o << " input=" << *input;
  return o.str();
}

void validate(const Config& cfg, const syntax::Program& p) {
  if (cfg.fuel <= 0) throw ConfigError("fuel must be positive");
  if (cfg.concrete()) {
    if (cfg.domain != domain::DomainKind::Concrete)
      throw ConfigError("concrete execution requires the concrete domain");
    if (cfg.dataStore != DataStore::PathSensitive || cfg.stackStore != StackStore::PathSensitive)
      throw ConfigError("concrete execution requires path-sensitive stores");
    if (p.usesInput() && !cfg.input)
      throw ConfigError("program reads input; pass --input for concrete runs");
  } else {
    if (cfg.domain == domain::DomainKind::Concrete)
      throw ConfigError("the concrete domain requires concrete execution");
    if (*cfg.k < 0) throw ConfigError("context depth must be non-negative");
  }
}

namespace {

CellSpec envCell() { return CellSpec{Cell::Env, Term::map({}), std::nullopt}; }
CellSpec stackAddrCell() { return CellSpec{Cell::StackAddr, timeabs::haltAddr(), std::nullopt}; }
CellSpec timeCell() { return CellSpec{Cell::Time, timeabs::initialTime(), std::nullopt}; }
CellSpec storeCell() { return CellSpec{Cell::Store, Term::map({}), Shape::map()}; }
CellSpec stackStoreCell(bool lattice) {
  return CellSpec{Cell::StackStore, Term::map({}), lattice ? std::optional<Shape>(Shape::map())
                                                           : std::nullopt};
}

// The context tuple: cells that stay path-sensitive in every recipe.
std::vector<CellSpec> contextCells(StackStore stack) {
  std::vector<CellSpec> cells{envCell(), stackAddrCell(), timeCell()};
  if (stack == StackStore::PathSensitive) cells.insert(cells.begin() + 2, stackStoreCell(false));
  return cells;
}

fx::MonadPtr buildStack(const Config& cfg) {
  fx::MonadPtr m = fx::makeIdentity();
  bool stackOut = cfg.stackStore == StackStore::FlowInsensitive;
  if (stackOut) m = fx::makeStateLayer({stackStoreCell(true)}, m);
  switch (cfg.dataStore) {
    case DataStore::PathSensitive:
      m = fx::makeNondetLayer(std::move(m));
      m = fx::makeStateLayer({storeCell()}, std::move(m));
      break;
    case DataStore::FlowSensitive:
      m = fx::makeFlowLayer(storeCell(), std::move(m));
      break;
    case DataStore::FlowInsensitive:
      m = fx::makeStateLayer({storeCell()}, std::move(m));
      m = fx::makeNondetLayer(std::move(m));
      break;
  }
  return fx::makeStateLayer(contextCells(cfg.stackStore), std::move(m));
}

}  // namespace

Analysis::Analysis(const syntax::Program& p, const Config& cfg)
    : program_(p), cfg_(cfg), dom_(cfg.domain, cfg.input), monad_(buildStack(cfg)) {
  validate(cfg, p);
}

interp::Context Analysis::interpContext() const {
  interp::Context c;
  c.monad = monad_.get();
  c.dom = &dom_;
  c.program = &program_;
  c.contextDepth = cfg_.k;
  c.gcEnabled = cfg_.gc;
  return c;
}

Term Analysis::inject() const {
  return monad_->inject(interp::labelPayload(program_.root()->label));
}

Term Analysis::transfer(const Term& sigma) const {
  interp::Context c = interpContext();
  // The step closure must outlive the transfer call only.
  return monad_->transfer([&c](const Term& payload) { return interp::step(c, payload); }, sigma,
                          &memo_);
}

Analysis::RunResult Analysis::run() const {
  RunResult r;
  Term x = monad_->sigmaShape(Shape::opaque()).bottom();
  Term start = inject();
  for (int64_t i = 0; i < cfg_.fuel; ++i) {
    Term next = join(join(x, start), transfer(x));
    if (!leq(x, next))
      throw std::logic_error("fixpoint iteration is not monotone");  // never expected
    r.iterations = i + 1;
    if (leq(next, x)) {
      r.sigma = std::move(x);
      return r;
    }
    x = std::move(next);
  }
  r.sigma = std::move(x);
  r.fuelExhausted = true;
  return r;
}

// ---------------------------------------------------------------------------
// Decoding sigma into worlds (shape depends on the recipe)

namespace {

// context tuple order: env, stack-addr, [stack-store,] time
void splitContext(const Term& ctx, bool stackInCtx, Analysis::World& w) {
  w.env = ctx.at(0);
  w.stackAddr = ctx.at(1);
  if (stackInCtx) {
    w.stackStore = ctx.at(2);
    w.time = ctx.at(3);
  } else {
    w.time = ctx.at(2);
  }
}

}  // namespace

std::vector<Analysis::World> Analysis::worlds(const Term& sigma) const {
  bool stackInCtx = cfg_.stackStore == StackStore::PathSensitive;
  Term inner = sigma;
  Term globalStackStore = Term::map({});
  if (!stackInCtx) {
    globalStackStore = sigma.at(1);
    inner = sigma.at(0);
  }
  std::vector<World> out;
  auto pushWorld = [&](const Term& payCtx, const Term& store) {
    World w;
    w.payload = payCtx.at(0);
    splitContext(payCtx.at(1), stackInCtx, w);
    if (!stackInCtx) w.stackStore = globalStackStore;
    w.store = store;
    out.push_back(std::move(w));
  };
  switch (cfg_.dataStore) {
    case DataStore::PathSensitive:
      // Set{ Seq[Seq[pay,ctx], store] }
      for (const Term& el : inner.items()) pushWorld(el.at(0), el.at(1));
      break;
    case DataStore::FlowSensitive:
      // Map{ Seq[pay,ctx] -> store }
      for (const auto& [key, store] : inner.entries()) pushWorld(key, store);
      break;
    case DataStore::FlowInsensitive: {
      // Seq[Set{Seq[pay,ctx]}, store]
      const Term& store = inner.at(1);
      for (const Term& el : inner.at(0).items()) pushWorld(el, store);
      break;
    }
  }
  return out;
}

Term Analysis::embedWorld(const World& w) const {
  bool stackInCtx = cfg_.stackStore == StackStore::PathSensitive;
  TermVec ctx{w.env, w.stackAddr};
  if (stackInCtx) ctx.push_back(w.stackStore);
  ctx.push_back(w.time);
  Term payCtx = pairT(w.payload, Term::seq(std::move(ctx)));
  Term inner;
  switch (cfg_.dataStore) {
    case DataStore::PathSensitive: inner = Term::set({pairT(payCtx, w.store)}); break;
    case DataStore::FlowSensitive: inner = Term::map({{payCtx, w.store}}); break;
    case DataStore::FlowInsensitive: inner = pairT(Term::set({payCtx}), w.store); break;
  }
  if (!stackInCtx) inner = pairT(inner, w.stackStore);
  return inner;
}

// ---------------------------------------------------------------------------
// Facts

namespace {

std::optional<Term> worldValue(const Analysis& a, const Analysis::World& w) {
  const syntax::Program& p = *a.interpContext().program;
  if (interp::isValuePayload(w.payload)) return interp::payloadValue(w.payload);
  const syntax::Exp& e = p.byLabel(interp::payloadLabel(w.payload));
  if (!e.isAtomic()) return std::nullopt;
  const syntax::Atom& atom = e.atom();
  if (const auto* i = std::get_if<syntax::IntLit>(&atom)) return a.dom().intro(i->value);
  if (const auto* v = std::get_if<syntax::VarRef>(&atom)) {
    auto addr = w.env.mapFind(Term::sym(v->name));
    if (!addr) return a.dom().bottom();
    auto entry = w.store.mapFind(*addr);
    return entry ? interp::entryValue(*entry) : a.dom().bottom();
  }
  if (std::get_if<syntax::Lambda>(&atom))
    return a.dom().closureValue(domain::makeClosure(e.label, w.env));
  return a.dom().inputValue();
}

}  // namespace

Facts report(const Analysis& a, const Term& sigma) {
  Facts f;
  std::map<int, std::set<std::map<std::string, Term>>> assignments;
  for (const Analysis::World& w : a.worlds(sigma)) {
    if (w.stackAddr == timeabs::haltAddr()) {
      if (auto v = worldValue(a, w))
        f.result = f.result ? join(*f.result, *v) : *v;
    }
    int label = interp::payloadLabel(w.payload);
    if (label < 0) continue;  // computed-value controls are not program points
    f.reachCount[label] += 1;
    std::map<std::string, Term> vars;
    for (const auto& [key, addr] : w.env.entries()) {
      auto entry = w.store.mapFind(addr);
      Term v = entry ? interp::entryValue(*entry) : a.dom().bottom();
      vars.emplace(key.symName(), v);
      auto [it, fresh] = f.vars[label].emplace(key.symName(), v);
      if (!fresh) it->second = join(it->second, v);
    }
    assignments[label].insert(std::move(vars));
  }
  for (auto& [label, set] : assignments)
    f.worldAssignments[label] = {set.begin(), set.end()};
  return f;
}

}  // namespace lifa::engine
