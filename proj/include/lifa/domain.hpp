#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lifa/syntax.hpp"
#include "lifa/term.hpp"

namespace lifa::domain {

enum class DomainKind { Concrete, Sign, ConstSet };

std::optional<DomainKind> domainFromName(std::string_view name);  // "sign" | "const"
const char* domainName(DomainKind k);

// Values are pairs (ints, closures). The integer part is domain specific:
//   Concrete: Set of Int       Sign: Set of {-,0,+} syms       ConstSet: IntSetAbs
// Closures are Seq[lambda-label, env] collected in a Set.
Term makeValue(Term ints, Term clos);
const Term& valueInts(const Term& v);
const Term& valueClosures(const Term& v);
Term makeClosure(int lambdaLabel, const Term& env);
int closureLambda(const Term& clo);
const Term& closureEnv(const Term& clo);

struct Branches {
  bool zero = false;
  bool nonZero = false;
};

class Domain {
 public:
  explicit Domain(DomainKind kind, std::optional<int64_t> input = std::nullopt);

  DomainKind kind() const { return kind_; }

  Term bottom() const;
  Term intro(int64_t i) const;
  Term inputValue() const;  // unknown integer for abstract domains; {input} for Concrete
  Term closureValue(const Term& clo) const;

  TermVec closuresOf(const Term& v) const;
  Branches condBranches(const Term& v) const;
  Term primOp(syntax::Op op, const Term& a, const Term& b) const;
  // Path-condition refinement: keep only the zero (or nonzero) part of the
  // integer component; the closure component is untouched.
  Term restrictCond(const Term& v, bool zero) const;

 private:
  Term emptyInts() const;
  DomainKind kind_;
  std::optional<int64_t> input_;
};

// Pointwise abstraction of a concrete value term into the target domain.
// Closure environments are assumed already translated by the caller.
Term alphaInts(DomainKind target, const Term& concreteInts);

}  // namespace lifa::domain
