#include <doctest.h>

#include "law_harness.hpp"
#include "lifa/domain.hpp"
#include "lifa/galois.hpp"

using namespace lifa;
using namespace lifa::galois;

namespace {

// Value-level pair: sets of integers over [-3,3] against an abstract domain.
Universe concreteUniverse() {
  Universe u;
  for (int mask = 0; mask < 128; ++mask) {
    TermVec xs;
    for (int b = 0; b < 7; ++b)
      if (mask & (1 << b)) xs.push_back(Term::integer(b - 3));
    u.elems.push_back(Term::set(std::move(xs)));
  }
  u.leq = [](const Term& a, const Term& b) { return leq(a, b); };
  return u;
}

Universe signUniverse() {
  Universe u;
  const char* syms[] = {"-", "0", "+"};
  for (int mask = 0; mask < 8; ++mask) {
    TermVec xs;
    for (int b = 0; b < 3; ++b)
      if (mask & (1 << b)) xs.push_back(Term::sym(syms[b]));
    u.elems.push_back(Term::set(std::move(xs)));
  }
  u.leq = [](const Term& a, const Term& b) { return leq(a, b); };
  return u;
}

ValueMap signAlpha() {
  return [](const Term& ints) { return domain::alphaInts(domain::DomainKind::Sign, ints); };
}

ValueMap signGamma() {
  return [](const Term& s) {
    TermVec xs;
    for (int i = -3; i <= 3; ++i) {
      const char* want = i < 0 ? "-" : i == 0 ? "0" : "+";
      if (setContains(s, Term::sym(want))) xs.push_back(Term::integer(i));
    }
    return Term::set(std::move(xs));
  };
}

Universe constUniverse() {
  Universe u;
  for (int mask = 0; mask < 128; ++mask) {
    std::vector<int64_t> xs;
    for (int b = 0; b < 7; ++b)
      if (mask & (1 << b)) xs.push_back(b - 3);
    u.elems.push_back(Term::intSet(IntSetAbs::fin(xs)));
  }
  u.elems.push_back(Term::intSet(IntSetAbs::nonZero()));
  u.elems.push_back(Term::intSet(IntSetAbs::any()));
  u.leq = [](const Term& a, const Term& b) { return leq(a, b); };
  return u;
}

}  // namespace

TEST_CASE("value-level pair: sign against bounded concrete sets") {
  Report r = checkGaloisPair(concreteUniverse(), signUniverse(), signAlpha(), signGamma());
  CHECK(r.ok());
  CHECK(r.checked > 0);
}

TEST_CASE("value-level pair: const-set against bounded concrete sets") {
  ValueMap alpha = [](const Term& ints) {
    return domain::alphaInts(domain::DomainKind::ConstSet, ints);
  };
  ValueMap gamma = [](const Term& a) {
    const IntSetAbs& s = a.asIntSet();
    TermVec xs;
    for (int i = -3; i <= 3; ++i) {
      bool in = s.kind() == IntSetAbs::Kind::Any ||
                (s.kind() == IntSetAbs::Kind::NonZero && i != 0) ||
                (s.kind() == IntSetAbs::Kind::Fin &&
                 std::binary_search(s.elems().begin(), s.elems().end(), int64_t(i)));
      if (in) xs.push_back(Term::integer(i));
    }
    return Term::set(std::move(xs));
  };
  Report r = checkGaloisPair(concreteUniverse(), constUniverse(), alpha, gamma);
  CHECK(r.ok());
}

TEST_CASE("the identity pair passes on any ordered universe") {
  Universe u = signUniverse();
  ValueMap id = [](const Term& x) { return x; };
  CHECK(checkGaloisPair(u, u, id, id).ok());
}

TEST_CASE("a seeded fault is detected with a witness") {
  // deliberately drop the negative component in alpha
  ValueMap broken = [](const Term& ints) {
    Term full = domain::alphaInts(domain::DomainKind::Sign, ints);
    TermVec keep;
    for (const Term& s : full.items())
      if (s.symName() != "-") keep.push_back(s);
    return Term::set(std::move(keep));
  };
  Report r = checkGaloisPair(concreteUniverse(), signUniverse(), broken, signGamma());
  CHECK(!r.ok());
  CHECK(!r.failures.empty());
  CHECK(r.failures.front().find(" at ") != std::string::npos);  // witness present
}

TEST_CASE("layer actions commute with value abstraction") {
  ValueGalois vg;
  vg.lo = concreteUniverse();
  // trim the lo universe for the function enumeration (|lo|^2 functions)
  vg.lo.elems.resize(8);
  vg.hi = signUniverse();
  vg.alpha = signAlpha();
  Universe cells;
  cells.elems = {Term::set({}), Term::set({Term::sym("c")})};
  cells.leq = [](const Term& a, const Term& b) { return leq(a, b); };
  for (LayerKind k : {LayerKind::State, LayerKind::Nondet, LayerKind::Flow}) {
    Report r = checkLayerProperties(k, vg, cells);
    CHECK(r.ok());
    CHECK(r.checked > 0);
  }
}

TEST_CASE("transfer/embed pairs of every recipe are Galois connections") {
  using namespace lifa::lawtest;
  for (const ToyStack& t : toyStacks()) {
    CAPTURE(t.name);
    Report r = checkTransferPair(*t.m, payloads(), t.args);
    CHECK(r.ok());
    CHECK(r.checked > 0);
  }
}
