#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lifa {

// Bounded integer-set abstraction: a finite set, "all nonzero", or "all ints".
// Finite sets wider than kWidth widen to Any so the lattice has finite height.
class IntSetAbs {
 public:
  enum class Kind : uint8_t { Fin, NonZero, Any };
  static constexpr std::size_t kWidth = 16;

  static IntSetAbs fin(std::vector<int64_t> xs);
  static IntSetAbs single(int64_t x) { return fin({x}); }
  static IntSetAbs none() { return fin({}); }
  static IntSetAbs nonZero();
  static IntSetAbs any();

  Kind kind() const { return kind_; }
  const std::vector<int64_t>& elems() const { return elems_; }

  bool containsZero() const;
  bool containsNonZero() const;
  bool empty() const { return kind_ == Kind::Fin && elems_.empty(); }

  static bool leq(const IntSetAbs& a, const IntSetAbs& b);
  static IntSetAbs join(const IntSetAbs& a, const IntSetAbs& b);
  static IntSetAbs meet(const IntSetAbs& a, const IntSetAbs& b);
  static int compare(const IntSetAbs& a, const IntSetAbs& b);

  bool operator==(const IntSetAbs& o) const { return compare(*this, o) == 0; }
  std::string str() const;
  std::size_t hash() const;

 private:
  Kind kind_ = Kind::Fin;
  std::vector<int64_t> elems_;  // sorted, unique; only for Fin
};

class Term;
using TermVec = std::vector<Term>;
using TermPair = std::pair<Term, Term>;
using TermPairVec = std::vector<TermPair>;

// Immutable algebraic value: the single currency for machine cells, abstract
// values, and transition-system states. Sets and maps keep a canonical sorted
// representation so equality is structural and deterministic.
class Term {
 public:
  enum class Kind : uint8_t { Unit, Int, Sym, IntSet, Seq, Set, Map };

  Term();  // unit
  static Term unit();
  static Term integer(int64_t v);
  static Term sym(std::string_view name);
  static Term intSet(IntSetAbs s);
  static Term seq(TermVec items);
  static Term set(TermVec items);            // sorts + dedups
  static Term map(TermPairVec entries);      // sorts by key; duplicate keys joined

  Kind kind() const;
  bool isUnit() const { return kind() == Kind::Unit; }
  int64_t asInt() const;
  const std::string& symName() const;
  const IntSetAbs& asIntSet() const;
  const TermVec& items() const;              // Seq and Set
  const TermPairVec& entries() const;        // Map
  std::size_t size() const;                  // Seq/Set/Map arity
  const Term& at(std::size_t i) const;       // Seq indexing
  std::optional<Term> mapFind(const Term& key) const;

  std::size_t hash() const;
  static int compare(const Term& a, const Term& b);
  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const { return compare(*this, o) < 0; }

  std::string str() const;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Least upper bound. Seqs join componentwise, sets by union, maps pointwise.
// Unequal scalars have no join; callers must keep non-lattice cells aligned.
Term join(const Term& a, const Term& b);

// Lattice order consistent with join: leq(a, b) iff join(a, b) == b.
bool leq(const Term& a, const Term& b);

// Simulation order for soundness checks: sets and map entries match any
// dominating counterpart instead of requiring equal elements.
bool approxLeq(const Term& lo, const Term& hi);

// Result shapes, for constructing bottom elements of composed state spaces.
class Shape {
 public:
  enum class Kind : uint8_t { Set, Map, Pair, Opaque };
  static Shape set();
  static Shape map();
  static Shape pair(Shape fst, Shape snd);
  static Shape opaque();  // bottom() throws; used for non-lattice components

  Kind kind() const { return kind_; }
  Term bottom() const;

 private:
  Kind kind_ = Kind::Opaque;
  std::shared_ptr<const std::pair<Shape, Shape>> parts_;
};

// Set / map helpers over Terms.
Term setInsert(const Term& s, const Term& x);
Term setUnion(const Term& a, const Term& b);
bool setContains(const Term& s, const Term& x);
Term mapPut(const Term& m, const Term& k, const Term& v);     // strong update
Term mapJoinAt(const Term& m, const Term& k, const Term& v);  // join at key
Term mapRestrict(const Term& m, const std::function<bool(const Term&)>& keep);

inline Term pairT(Term a, Term b) { return Term::seq({std::move(a), std::move(b)}); }

}  // namespace lifa
