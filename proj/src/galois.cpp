#include "lifa/galois.hpp"

#include <algorithm>
#include <sstream>

namespace lifa::galois {

using fx::Action;
using fx::Monad;

namespace {

std::string describe(const char* what, const Term& at) { return std::string(what) + " at " + at.str(); }

std::string describe2(const char* what, const Term& a, const Term& b) {
  return std::string(what) + " at " + a.str() + " / " + b.str();
}

}  // namespace

Report checkGaloisPair(const Universe& lo, const Universe& hi, const ValueMap& alpha,
                       const ValueMap& gamma) {
  Report r;
  for (const Term& x : lo.elems)
    for (const Term& y : lo.elems) {
      ++r.checked;
      if (lo.leq(x, y) && !hi.leq(alpha(x), alpha(y)))
        r.failures.push_back(describe2("alpha not monotone", x, y));
    }
  for (const Term& a : hi.elems)
    for (const Term& b : hi.elems) {
      ++r.checked;
      if (hi.leq(a, b) && !lo.leq(gamma(a), gamma(b)))
        r.failures.push_back(describe2("gamma not monotone", a, b));
    }
  for (const Term& x : lo.elems) {
    ++r.checked;
    if (!lo.leq(x, gamma(alpha(x)))) r.failures.push_back(describe("gamma.alpha not extensive", x));
  }
  for (const Term& a : hi.elems) {
    ++r.checked;
    if (!hi.leq(alpha(gamma(a)), a)) r.failures.push_back(describe("alpha.gamma not reductive", a));
  }
  return r;
}

Term ValueGalois::gammaJoinLo(const Term& hiElem) const {
  std::optional<Term> acc;
  for (const Term& x : lo.elems)
    if (hi.leq(alpha(x), hiElem)) acc = acc ? join(*acc, x) : x;
  if (!acc) throw std::logic_error("gammaJoinLo: universe lacks a bottom element");
  return *acc;
}

// ---------------------------------------------------------------------------
// Per-layer commuting checks over the identity base.
//
// A monadic function into the identity base is just a value map. Each layer
// lifts such a map into its own computations; the function-level abstraction
// between the two instantiations follows the layer shape pointwise. Property
// (1) requires lifting-then-abstracting to equal abstracting-then-lifting;
// properties (2) and (3) instantiate to roundtrips of the same data, checked
// as extensive/reductive inequalities of the function-level pair.

namespace {

struct Lifted {
  // layer-shaped denotation of a lifted function at one payload and cell
  std::function<Term(const Term& x, const Term& s)> run;
};

Lifted liftInto(LayerKind layer, const ValueMap& f) {
  switch (layer) {
    case LayerKind::State:
      return {[f](const Term& x, const Term& s) { return pairT(f(x), s); }};
    case LayerKind::Nondet:
      return {[f](const Term& x, const Term&) { return Term::set({f(x)}); }};
    case LayerKind::Flow:
      return {[f](const Term& x, const Term& s) { return Term::map({{f(x), s}}); }};
  }
  throw std::logic_error("bad layer");
}

// Pointwise action of a value map on the layer-shaped result.
Term mapResult(LayerKind layer, const ValueMap& v, const Term& r) {
  switch (layer) {
    case LayerKind::State: return pairT(v(r.at(0)), r.at(1));
    case LayerKind::Nondet: {
      TermVec out;
      for (const Term& b : r.items()) out.push_back(v(b));
      return Term::set(std::move(out));
    }
    case LayerKind::Flow: {
      TermPairVec out;
      for (const auto& [b, s] : r.entries()) out.emplace_back(v(b), s);
      return Term::map(std::move(out));
    }
  }
  throw std::logic_error("bad layer");
}

bool resultLeq(LayerKind, const Term& a, const Term& b) { return approxLeq(a, b); }

}  // namespace

Report checkLayerProperties(LayerKind layer, const ValueGalois& payloads,
                            const Universe& cellUniverse) {
  Report r;
  // Index set A: harness payload positions. Functions A -> lo are enumerated
  // exhaustively; with |A| = 2 that is |lo|^2 maps.
  std::vector<Term> index{Term::sym("#i0"), Term::sym("#i1")};
  ValueMap alphaV = payloads.alpha;
  ValueMap gammaV = [&payloads](const Term& a) { return payloads.gammaJoinLo(a); };

  std::vector<std::pair<Term, Term>> funs;  // f(i0), f(i1)
  for (const Term& v0 : payloads.lo.elems)
    for (const Term& v1 : payloads.lo.elems) funs.emplace_back(v0, v1);

  auto evalFun = [&index](const std::pair<Term, Term>& f, const Term& x) {
    return x == index[0] ? f.first : f.second;
  };

  const std::vector<Term>& cells = cellUniverse.elems;
  for (const auto& f : funs) {
    ValueMap fmap = [&](const Term& x) { return evalFun(f, x); };
    ValueMap alphaF = [&](const Term& x) { return alphaV(fmap(x)); };

    Lifted liftedLo = liftInto(layer, fmap);
    Lifted liftedHiOfAlpha = liftInto(layer, alphaF);

    for (const Term& x : index) {
      for (const Term& s : cells) {
        ++r.checked;
        // Property (1): T[m2](alpha(f)) == T[alpha](T[m1](f)).
        Term lhs = liftedHiOfAlpha.run(x, s);
        Term rhs = mapResult(layer, alphaV, liftedLo.run(x, s));
        if (!(lhs == rhs))
          r.failures.push_back(describe2("layer action does not commute with abstraction", lhs, rhs));

        // Function-level pair is extensive / reductive (properties (2)/(3)
        // reduce to these roundtrips at the identity base).
        Term roundLo = mapResult(layer, gammaV, mapResult(layer, alphaV, liftedLo.run(x, s)));
        ++r.checked;
        if (!resultLeq(layer, liftedLo.run(x, s), roundLo))
          r.failures.push_back(describe("lifted gamma.alpha not extensive", roundLo));
      }
    }
  }

  // Reductive direction over abstract-side functions.
  for (const Term& a0 : payloads.hi.elems)
    for (const Term& a1 : payloads.hi.elems) {
      ValueMap gmap = [&](const Term& x) { return x == index[0] ? a0 : a1; };
      Lifted liftedHi = liftInto(layer, gmap);
      ValueMap round = [&](const Term& b) { return alphaV(gammaV(b)); };
      for (const Term& x : index)
        for (const Term& s : cells) {
          ++r.checked;
          Term lhs = mapResult(layer, round, liftedHi.run(x, s));
          if (!resultLeq(layer, lhs, liftedHi.run(x, s)))
            r.failures.push_back(describe("lifted alpha.gamma not reductive", lhs));
        }
    }
  return r;
}

// ---------------------------------------------------------------------------
// Transfer/embed pair of a built stack.

namespace {

std::vector<std::vector<Term>> argCombos(const std::vector<std::vector<Term>>& universes) {
  std::vector<std::vector<Term>> out{{}};
  for (const auto& u : universes) {
    std::vector<std::vector<Term>> next;
    for (const auto& prefix : out)
      for (const Term& v : u) {
        std::vector<Term> row = prefix;
        row.push_back(v);
        next.push_back(std::move(row));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Report checkTransferPair(const Monad& m, const std::vector<Term>& payloads,
                         const std::vector<std::vector<Term>>& cellUniverses) {
  Report r;
  auto rot = [&payloads](const Term& x) {
    for (std::size_t i = 0; i < payloads.size(); ++i)
      if (payloads[i] == x) return payloads[(i + 1) % payloads.size()];
    return x;
  };

  using Fun = std::function<Action(const Term&)>;
  std::vector<Fun> funs{
      [&m](const Term& x) { return m.pure(x); },
      [&m, rot](const Term& x) { return m.pure(rot(x)); },
      [&m](const Term&) { return m.zero(); },
      [&m, rot](const Term& x) { return m.plus(m.pure(x), m.pure(rot(x))); },
  };

  // Sigma universe: injected payloads closed under pairwise joins, twice.
  std::vector<Term> sigmas;
  for (const Term& p : payloads) sigmas.push_back(m.inject(p));
  for (int round = 0; round < 2; ++round) {
    std::vector<Term> more = sigmas;
    for (const Term& a : sigmas)
      for (const Term& b : sigmas) more.push_back(join(a, b));
    std::sort(more.begin(), more.end());
    more.erase(std::unique(more.begin(), more.end()), more.end());
    sigmas = std::move(more);
  }

  auto transferOf = [&m](const Fun& f) {
    return [&m, f](const Term& sigma) { return m.transfer(f, sigma, nullptr); };
  };

  std::vector<std::vector<Term>> combos = argCombos(cellUniverses);

  for (const Fun& f : funs) {
    fx::TransferFn tf = transferOf(f);
    // Monotone in sigma.
    for (const Term& a : sigmas)
      for (const Term& b : sigmas) {
        if (!leq(a, b)) continue;
        ++r.checked;
        if (!leq(tf(a), tf(b)))
          r.failures.push_back(describe2("transfer not monotone", a, b));
      }
    // Reductive: embed(transfer(f)) under-approximates f pointwise.
    for (const Term& x : payloads)
      for (const auto& args : combos) {
        ++r.checked;
        Term viaSigma = fx::runAction(m.embed(tf, x), args);
        Term direct = fx::runAction(f(x), args);
        if (!approxLeq(viaSigma, direct) && !leq(viaSigma, direct))
          r.failures.push_back(describe2("embed.transfer not reductive", viaSigma, direct));
      }
  }

  // Extensive: F under-approximates transfer(embed(F)) on the sigma universe.
  std::vector<fx::TransferFn> bigs;
  for (const Fun& f : funs) bigs.push_back(transferOf(f));
  bigs.push_back([](const Term& s) { return s; });  // identity transition
  for (const fx::TransferFn& F : bigs) {
    fx::StepFn viaMonad = [&m, &F](const Term& x) { return m.embed(F, x); };
    for (const Term& s : sigmas) {
      ++r.checked;
      if (!leq(F(s), m.transfer(viaMonad, s, nullptr)))
        r.failures.push_back(describe("transfer.embed not extensive", s));
    }
  }
  return r;
}

}  // namespace lifa::galois
