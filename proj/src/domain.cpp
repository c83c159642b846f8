#include "lifa/domain.hpp"

#include <stdexcept>

namespace lifa::domain {

namespace {

Term signNeg() { return Term::sym("-"); }
Term signZero() { return Term::sym("0"); }
Term signPos() { return Term::sym("+"); }

Term signOf(int64_t i) { return i < 0 ? signNeg() : i == 0 ? signZero() : signPos(); }

Term signSet(bool neg, bool zero, bool pos) {
  TermVec xs;
  if (neg) xs.push_back(signNeg());
  if (zero) xs.push_back(signZero());
  if (pos) xs.push_back(signPos());
  return Term::set(std::move(xs));
}

struct SignFlags {
  bool neg = false, zero = false, pos = false;
};

SignFlags signFlags(const Term& ints) {
  SignFlags f;
  for (const Term& s : ints.items()) {
    const std::string& n = s.symName();
    if (n == "-") f.neg = true;
    else if (n == "0") f.zero = true;
    else if (n == "+") f.pos = true;
  }
  return f;
}

class ArithmeticOverflow : public std::overflow_error {
 public:
  ArithmeticOverflow() : std::overflow_error("integer overflow in primitive operator") {}
};

int64_t checkedArith(syntax::Op op, int64_t a, int64_t b) {
  int64_t r = 0;
  bool ovf = op == syntax::Op::Add ? __builtin_add_overflow(a, b, &r)
                                   : __builtin_sub_overflow(a, b, &r);
  if (ovf) throw ArithmeticOverflow();
  return r;
}

}  // namespace

std::optional<DomainKind> domainFromName(std::string_view name) {
  if (name == "sign") return DomainKind::Sign;
  if (name == "const") return DomainKind::ConstSet;
  return std::nullopt;
}

const char* domainName(DomainKind k) {
  switch (k) {
    case DomainKind::Concrete: return "concrete";
    case DomainKind::Sign: return "sign";
    case DomainKind::ConstSet: return "const";
  }
  return "?";
}

Term makeValue(Term ints, Term clos) { return Term::seq({std::move(ints), std::move(clos)}); }
const Term& valueInts(const Term& v) { return v.at(0); }
const Term& valueClosures(const Term& v) { return v.at(1); }

Term makeClosure(int lambdaLabel, const Term& env) {
  return Term::seq({Term::integer(lambdaLabel), env});
}
int closureLambda(const Term& clo) { return static_cast<int>(clo.at(0).asInt()); }
const Term& closureEnv(const Term& clo) { return clo.at(1); }

Domain::Domain(DomainKind kind, std::optional<int64_t> input) : kind_(kind), input_(input) {}

Term Domain::emptyInts() const {
  switch (kind_) {
    case DomainKind::Concrete:
    case DomainKind::Sign: return Term::set({});
    case DomainKind::ConstSet: return Term::intSet(IntSetAbs::none());
  }
  throw std::logic_error("domain: bad kind");
}

Term Domain::bottom() const { return makeValue(emptyInts(), Term::set({})); }

Term Domain::intro(int64_t i) const {
  switch (kind_) {
    case DomainKind::Concrete: return makeValue(Term::set({Term::integer(i)}), Term::set({}));
    case DomainKind::Sign: return makeValue(Term::set({signOf(i)}), Term::set({}));
    case DomainKind::ConstSet:
      return makeValue(Term::intSet(IntSetAbs::single(i)), Term::set({}));
  }
  throw std::logic_error("domain: bad kind");
}

Term Domain::inputValue() const {
  switch (kind_) {
    case DomainKind::Concrete:
      if (!input_) throw std::logic_error("concrete domain: no input configured");
      return intro(*input_);
    case DomainKind::Sign: return makeValue(signSet(true, true, true), Term::set({}));
    case DomainKind::ConstSet: return makeValue(Term::intSet(IntSetAbs::any()), Term::set({}));
  }
  throw std::logic_error("domain: bad kind");
}

Term Domain::closureValue(const Term& clo) const {
  return makeValue(emptyInts(), Term::set({clo}));
}

TermVec Domain::closuresOf(const Term& v) const { return valueClosures(v).items(); }

Branches Domain::condBranches(const Term& v) const {
  const Term& ints = valueInts(v);
  Branches b;
  switch (kind_) {
    case DomainKind::Concrete: {
      for (const Term& i : ints.items()) {
        if (i.asInt() == 0) b.zero = true;
        else b.nonZero = true;
      }
      return b;
    }
    case DomainKind::Sign: {
      SignFlags f = signFlags(ints);
      b.zero = f.zero;
      b.nonZero = f.neg || f.pos;
      return b;
    }
    case DomainKind::ConstSet: {
      const IntSetAbs& s = ints.asIntSet();
      b.zero = s.containsZero();
      b.nonZero = s.containsNonZero();
      return b;
    }
  }
  return b;
}

Term Domain::primOp(syntax::Op op, const Term& a, const Term& b) const {
  if (op == syntax::Op::Apply)
    throw std::logic_error("domain: application is not a primitive operator");
  const Term& x = valueInts(a);
  const Term& y = valueInts(b);
  switch (kind_) {
    case DomainKind::Concrete: {
      TermVec out;
      for (const Term& i : x.items())
        for (const Term& j : y.items())
          out.push_back(Term::integer(checkedArith(op, i.asInt(), j.asInt())));
      return makeValue(Term::set(std::move(out)), Term::set({}));
    }
    case DomainKind::Sign: {
      SignFlags f = signFlags(x);
      SignFlags g = signFlags(y);
      bool neg = false, zero = false, pos = false;
      auto top = [&] { neg = zero = pos = true; };
      if (op == syntax::Op::Add) {
        // zero operand passes the other side through
        if (f.zero) neg |= g.neg, zero |= g.zero, pos |= g.pos;
        if (g.zero) neg |= f.neg, zero |= f.zero, pos |= f.pos;
        if (f.pos && g.pos) pos = true;
        if (f.neg && g.neg) neg = true;
        if (f.pos && g.neg) top();
        if (f.neg && g.pos) top();
      } else {
        // subtraction: x - 0 = x, 0 - y flips y
        if (g.zero) neg |= f.neg, zero |= f.zero, pos |= f.pos;
        if (f.zero) neg |= g.pos, zero |= g.zero, pos |= g.neg;
        if (f.pos && g.neg) pos = true;
        if (f.neg && g.pos) neg = true;
        if (f.pos && g.pos) top();
        if (f.neg && g.neg) top();
      }
      return makeValue(signSet(neg, zero, pos), Term::set({}));
    }
    case DomainKind::ConstSet: {
      const IntSetAbs& s = x.asIntSet();
      const IntSetAbs& t = y.asIntSet();
      auto wrap = [](IntSetAbs r) { return makeValue(Term::intSet(std::move(r)), Term::set({})); };
      if (s.empty() || t.empty()) return wrap(IntSetAbs::none());
      if (s.kind() == IntSetAbs::Kind::Any || t.kind() == IntSetAbs::Kind::Any)
        return wrap(IntSetAbs::any());
      bool sNZ = s.kind() == IntSetAbs::Kind::NonZero;
      bool tNZ = t.kind() == IntSetAbs::Kind::NonZero;
      if (sNZ || tNZ) {
        // adding or subtracting an exact zero preserves nonzero-ness
        const IntSetAbs& finSide = sNZ ? t : s;
        bool zeroOnly = finSide.kind() == IntSetAbs::Kind::Fin && finSide.elems().size() == 1 &&
                        finSide.elems()[0] == 0;
        if (zeroOnly && !(sNZ && tNZ)) return wrap(IntSetAbs::nonZero());
        return wrap(IntSetAbs::any());
      }
      std::vector<int64_t> out;
      for (int64_t i : s.elems())
        for (int64_t j : t.elems()) out.push_back(checkedArith(op, i, j));
      return wrap(IntSetAbs::fin(std::move(out)));
    }
  }
  throw std::logic_error("domain: bad kind");
}

Term Domain::restrictCond(const Term& v, bool zero) const {
  const Term& ints = valueInts(v);
  Term newInts = emptyInts();
  switch (kind_) {
    case DomainKind::Concrete: {
      TermVec out;
      for (const Term& i : ints.items())
        if ((i.asInt() == 0) == zero) out.push_back(i);
      newInts = Term::set(std::move(out));
      break;
    }
    case DomainKind::Sign: {
      SignFlags f = signFlags(ints);
      newInts = zero ? signSet(false, f.zero, false) : signSet(f.neg, false, f.pos);
      break;
    }
    case DomainKind::ConstSet: {
      IntSetAbs c = zero ? IntSetAbs::single(0) : IntSetAbs::nonZero();
      newInts = Term::intSet(IntSetAbs::meet(ints.asIntSet(), c));
      break;
    }
  }
  return makeValue(newInts, valueClosures(v));
}

Term alphaInts(DomainKind target, const Term& concreteInts) {
  switch (target) {
    case DomainKind::Concrete: return concreteInts;
    case DomainKind::Sign: {
      bool neg = false, zero = false, pos = false;
      for (const Term& i : concreteInts.items()) {
        int64_t v = i.asInt();
        (v < 0 ? neg : v == 0 ? zero : pos) = true;
      }
      return signSet(neg, zero, pos);
    }
    case DomainKind::ConstSet: {
      std::vector<int64_t> xs;
      for (const Term& i : concreteInts.items()) xs.push_back(i.asInt());
      return Term::intSet(IntSetAbs::fin(std::move(xs)));
    }
  }
  throw std::logic_error("domain: bad kind");
}

}  // namespace lifa::domain
