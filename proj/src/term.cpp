#include "lifa/term.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace lifa {

// ---------------------------------------------------------------------------
// IntSetAbs

IntSetAbs IntSetAbs::fin(std::vector<int64_t> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  IntSetAbs r;
  if (xs.size() > kWidth) {
    r.kind_ = Kind::Any;
  } else {
    r.kind_ = Kind::Fin;
    r.elems_ = std::move(xs);
  }
  return r;
}

IntSetAbs IntSetAbs::nonZero() {
  IntSetAbs r;
  r.kind_ = Kind::NonZero;
  return r;
}

IntSetAbs IntSetAbs::any() {
  IntSetAbs r;
  r.kind_ = Kind::Any;
  return r;
}

bool IntSetAbs::containsZero() const {
  switch (kind_) {
    case Kind::Fin: return std::binary_search(elems_.begin(), elems_.end(), 0);
    case Kind::NonZero: return false;
    case Kind::Any: return true;
  }
  return false;
}

bool IntSetAbs::containsNonZero() const {
  switch (kind_) {
    case Kind::Fin:
      for (int64_t v : elems_)
        if (v != 0) return true;
      return false;
    case Kind::NonZero: return true;
    case Kind::Any: return true;
  }
  return false;
}

bool IntSetAbs::leq(const IntSetAbs& a, const IntSetAbs& b) {
  if (b.kind_ == Kind::Any) return true;
  switch (a.kind_) {
    case Kind::Fin:
      if (b.kind_ == Kind::Fin)
        return std::includes(b.elems_.begin(), b.elems_.end(), a.elems_.begin(), a.elems_.end());
      return !a.containsZero();  // b is NonZero
    case Kind::NonZero: return b.kind_ == Kind::NonZero;
    case Kind::Any: return false;  // b != Any here
  }
  return false;
}

IntSetAbs IntSetAbs::join(const IntSetAbs& a, const IntSetAbs& b) {
  if (a.kind_ == Kind::Any || b.kind_ == Kind::Any) return any();
  if (a.kind_ == Kind::NonZero || b.kind_ == Kind::NonZero) {
    const IntSetAbs& other = a.kind_ == Kind::NonZero ? b : a;
    if (other.kind_ == Kind::NonZero) return nonZero();
    return other.containsZero() ? any() : nonZero();
  }
  std::vector<int64_t> xs = a.elems_;
  xs.insert(xs.end(), b.elems_.begin(), b.elems_.end());
  return fin(std::move(xs));
}

IntSetAbs IntSetAbs::meet(const IntSetAbs& a, const IntSetAbs& b) {
  if (a.kind_ == Kind::Any) return b;
  if (b.kind_ == Kind::Any) return a;
  if (a.kind_ == Kind::NonZero && b.kind_ == Kind::NonZero) return nonZero();
  if (a.kind_ == Kind::NonZero || b.kind_ == Kind::NonZero) {
    const IntSetAbs& f = a.kind_ == Kind::Fin ? a : b;
    std::vector<int64_t> xs;
    for (int64_t v : f.elems_)
      if (v != 0) xs.push_back(v);
    return fin(std::move(xs));
  }
  std::vector<int64_t> xs;
  std::set_intersection(a.elems_.begin(), a.elems_.end(), b.elems_.begin(), b.elems_.end(),
                        std::back_inserter(xs));
  return fin(std::move(xs));
}

int IntSetAbs::compare(const IntSetAbs& a, const IntSetAbs& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
  if (a.elems_ != b.elems_) return a.elems_ < b.elems_ ? -1 : 1;
  return 0;
}

std::string IntSetAbs::str() const {
  switch (kind_) {
    case Kind::NonZero: return "nz";
    case Kind::Any: return "top";
    case Kind::Fin: {
      std::ostringstream o;
      o << "{";
      for (std::size_t i = 0; i < elems_.size(); ++i) o << (i ? "," : "") << elems_[i];
      o << "}";
      return o.str();
    }
  }
  return "?";
}

std::size_t IntSetAbs::hash() const {
  std::size_t h = static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ull;
  for (int64_t v : elems_) h = h * 1099511628211ull ^ static_cast<std::size_t>(v);
  return h;
}

// ---------------------------------------------------------------------------
// Symbol interning

namespace {

struct SymTable {
  std::mutex mu;
  std::map<std::string, uint32_t, std::less<>> ids;
  std::vector<std::string> names;
};

SymTable& symTable() {
  static SymTable t;
  return t;
}

uint32_t internSym(std::string_view name) {
  SymTable& t = symTable();
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = t.ids.find(name);
  if (it != t.ids.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(std::string(name), id);
  return id;
}

const std::string& symNameOf(uint32_t id) {
  SymTable& t = symTable();
  std::lock_guard<std::mutex> lock(t.mu);
  return t.names.at(id);
}

std::size_t mix(std::size_t h, std::size_t v) {
  return (h ^ v) * 1099511628211ull + 0x9e3779b9u;
}

}  // namespace

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  Kind kind = Kind::Unit;
  int64_t num = 0;       // Int payload or Sym id
  IntSetAbs ints;        // IntSet payload
  TermVec items;         // Seq / Set
  TermPairVec entries;   // Map
  std::size_t hash = 0;
};

Term::Term() {
  static const std::shared_ptr<const Node> n = [] {
    auto p = std::make_shared<Node>();
    p->kind = Kind::Unit;
    p->hash = 0x854021;
    return p;
  }();
  n_ = n;
}

Term Term::unit() { return Term(); }

Term Term::integer(int64_t v) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::Int;
  p->num = v;
  p->hash = mix(static_cast<std::size_t>(Kind::Int), static_cast<std::size_t>(v));
  return Term(std::move(p));
}

Term Term::sym(std::string_view name) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::Sym;
  p->num = internSym(name);
  p->hash = mix(static_cast<std::size_t>(Kind::Sym) * 0x51ed, static_cast<std::size_t>(p->num));
  return Term(std::move(p));
}

Term Term::intSet(IntSetAbs s) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::IntSet;
  p->hash = mix(0x77aa11, s.hash());
  p->ints = std::move(s);
  return Term(std::move(p));
}

Term Term::seq(TermVec items) {
  auto p = std::make_shared<Node>();
  p->kind = Kind::Seq;
  std::size_t h = 0xbeef01;
  for (const Term& t : items) h = mix(h, t.hash());
  p->hash = h;
  p->items = std::move(items);
  return Term(std::move(p));
}

Term Term::set(TermVec items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  auto p = std::make_shared<Node>();
  p->kind = Kind::Set;
  std::size_t h = 0x5e701;
  for (const Term& t : items) h = mix(h, t.hash());
  p->hash = h;
  p->items = std::move(items);
  return Term(std::move(p));
}

Term Term::map(TermPairVec entries) {
  std::sort(entries.begin(), entries.end(),
            [](const TermPair& a, const TermPair& b) { return a.first < b.first; });
  TermPairVec out;
  out.reserve(entries.size());
  for (auto& e : entries) {
    if (!out.empty() && out.back().first == e.first) {
      out.back().second = join(out.back().second, e.second);
    } else {
      out.push_back(std::move(e));
    }
  }
  auto p = std::make_shared<Node>();
  p->kind = Kind::Map;
  std::size_t h = 0x3a9f7;
  for (const auto& [k, v] : out) h = mix(mix(h, k.hash()), v.hash());
  p->hash = h;
  p->entries = std::move(out);
  return Term(std::move(p));
}

Term::Kind Term::kind() const { return n_->kind; }

int64_t Term::asInt() const {
  if (kind() != Kind::Int) throw std::logic_error("term: not an int: " + str());
  return n_->num;
}

const std::string& Term::symName() const {
  if (kind() != Kind::Sym) throw std::logic_error("term: not a symbol: " + str());
  return symNameOf(static_cast<uint32_t>(n_->num));
}

const IntSetAbs& Term::asIntSet() const {
  if (kind() != Kind::IntSet) throw std::logic_error("term: not an int-set: " + str());
  return n_->ints;
}

const TermVec& Term::items() const {
  if (kind() != Kind::Seq && kind() != Kind::Set)
    throw std::logic_error("term: no items: " + str());
  return n_->items;
}

const TermPairVec& Term::entries() const {
  if (kind() != Kind::Map) throw std::logic_error("term: not a map: " + str());
  return n_->entries;
}

std::size_t Term::size() const {
  if (kind() == Kind::Map) return n_->entries.size();
  return items().size();
}

const Term& Term::at(std::size_t i) const {
  const TermVec& xs = items();
  if (i >= xs.size()) throw std::logic_error("term: index out of range: " + str());
  return xs[i];
}

std::optional<Term> Term::mapFind(const Term& key) const {
  const TermPairVec& es = entries();
  auto it = std::lower_bound(es.begin(), es.end(), key,
                             [](const TermPair& e, const Term& k) { return e.first < k; });
  if (it != es.end() && it->first == key) return it->second;
  return std::nullopt;
}

std::size_t Term::hash() const { return n_->hash; }

int Term::compare(const Term& a, const Term& b) {
  if (a.n_ == b.n_) return 0;
  if (a.n_->kind != b.n_->kind)
    return a.n_->kind < b.n_->kind ? -1 : 1;
  switch (a.n_->kind) {
    case Kind::Unit: return 0;
    case Kind::Int:
    case Kind::Sym:
      if (a.n_->num != b.n_->num) return a.n_->num < b.n_->num ? -1 : 1;
      return 0;
    case Kind::IntSet: return IntSetAbs::compare(a.n_->ints, b.n_->ints);
    case Kind::Seq:
    case Kind::Set: {
      const TermVec& xs = a.n_->items;
      const TermVec& ys = b.n_->items;
      if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        int c = compare(xs[i], ys[i]);
        if (c != 0) return c;
      }
      return 0;
    }
    case Kind::Map: {
      const TermPairVec& xs = a.n_->entries;
      const TermPairVec& ys = b.n_->entries;
      if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        int c = compare(xs[i].first, ys[i].first);
        if (c != 0) return c;
        c = compare(xs[i].second, ys[i].second);
        if (c != 0) return c;
      }
      return 0;
    }
  }
  return 0;
}

bool Term::operator==(const Term& o) const {
  if (n_ == o.n_) return true;
  if (n_->hash != o.n_->hash) return false;
  return compare(*this, o) == 0;
}

std::string Term::str() const {
  std::ostringstream o;
  switch (kind()) {
    case Kind::Unit: o << "#u"; break;
    case Kind::Int: o << n_->num; break;
    case Kind::Sym: o << symName(); break;
    case Kind::IntSet: o << n_->ints.str(); break;
    case Kind::Seq: {
      o << "(";
      for (std::size_t i = 0; i < n_->items.size(); ++i) o << (i ? " " : "") << n_->items[i].str();
      o << ")";
      break;
    }
    case Kind::Set: {
      o << "{";
      for (std::size_t i = 0; i < n_->items.size(); ++i) o << (i ? " " : "") << n_->items[i].str();
      o << "}";
      break;
    }
    case Kind::Map: {
      o << "[";
      bool first = true;
      for (const auto& [k, v] : n_->entries) {
        if (!first) o << " ";
        first = false;
        o << k.str() << ":" << v.str();
      }
      o << "]";
      break;
    }
  }
  return o.str();
}

// ---------------------------------------------------------------------------
// Lattice operations

Term join(const Term& a, const Term& b) {
  if (a == b) return a;
  if (a.kind() != b.kind())
    throw std::logic_error("join: shape mismatch: " + a.str() + " vs " + b.str());
  switch (a.kind()) {
    case Term::Kind::Unit: return a;
    case Term::Kind::Int:
    case Term::Kind::Sym:
      throw std::logic_error("join: unequal scalars: " + a.str() + " vs " + b.str());
    case Term::Kind::IntSet:
      return Term::intSet(IntSetAbs::join(a.asIntSet(), b.asIntSet()));
    case Term::Kind::Seq: {
      const TermVec& xs = a.items();
      const TermVec& ys = b.items();
      if (xs.size() != ys.size())
        throw std::logic_error("join: seq arity mismatch: " + a.str() + " vs " + b.str());
      TermVec out;
      out.reserve(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(join(xs[i], ys[i]));
      return Term::seq(std::move(out));
    }
    case Term::Kind::Set: return setUnion(a, b);
    case Term::Kind::Map: {
      TermPairVec out = a.entries();
      const TermPairVec& ys = b.entries();
      out.insert(out.end(), ys.begin(), ys.end());
      return Term::map(std::move(out));  // map() joins duplicate keys
    }
  }
  return a;
}

bool leq(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Unit: return true;
    case Term::Kind::Int:
    case Term::Kind::Sym: return false;  // unequal scalars are incomparable
    case Term::Kind::IntSet: return IntSetAbs::leq(a.asIntSet(), b.asIntSet());
    case Term::Kind::Seq: {
      const TermVec& xs = a.items();
      const TermVec& ys = b.items();
      if (xs.size() != ys.size()) return false;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (!leq(xs[i], ys[i])) return false;
      return true;
    }
    case Term::Kind::Set: {
      const TermVec& xs = a.items();
      const TermVec& ys = b.items();
      std::size_t j = 0;
      for (const Term& x : xs) {  // both sorted
        while (j < ys.size() && ys[j] < x) ++j;
        if (j == ys.size() || !(ys[j] == x)) return false;
      }
      return true;
    }
    case Term::Kind::Map: {
      for (const auto& [k, v] : a.entries()) {
        auto w = b.mapFind(k);
        if (!w || !leq(v, *w)) return false;
      }
      return true;
    }
  }
  return false;
}

bool approxLeq(const Term& lo, const Term& hi) {
  if (lo == hi) return true;
  if (lo.kind() != hi.kind()) return false;
  switch (lo.kind()) {
    case Term::Kind::Unit: return true;
    case Term::Kind::Int:
    case Term::Kind::Sym: return false;
    case Term::Kind::IntSet: return IntSetAbs::leq(lo.asIntSet(), hi.asIntSet());
    case Term::Kind::Seq: {
      const TermVec& xs = lo.items();
      const TermVec& ys = hi.items();
      if (xs.size() != ys.size()) return false;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (!approxLeq(xs[i], ys[i])) return false;
      return true;
    }
    case Term::Kind::Set: {
      for (const Term& x : lo.items()) {
        bool found = false;
        for (const Term& y : hi.items())
          if (approxLeq(x, y)) {
            found = true;
            break;
          }
        if (!found) return false;
      }
      return true;
    }
    case Term::Kind::Map: {
      for (const auto& [k, v] : lo.entries()) {
        bool found = false;
        for (const auto& [k2, v2] : hi.entries())
          if (approxLeq(k, k2) && approxLeq(v, v2)) {
            found = true;
            break;
          }
        if (!found) return false;
      }
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Shape

Shape Shape::set() {
  Shape s;
  s.kind_ = Kind::Set;
  return s;
}

Shape Shape::map() {
  Shape s;
  s.kind_ = Kind::Map;
  return s;
}

Shape Shape::pair(Shape fst, Shape snd) {
  Shape s;
  s.kind_ = Kind::Pair;
  s.parts_ = std::make_shared<std::pair<Shape, Shape>>(std::move(fst), std::move(snd));
  return s;
}

Shape Shape::opaque() { return Shape(); }

Term Shape::bottom() const {
  switch (kind_) {
    case Kind::Set: return Term::set({});
    case Kind::Map: return Term::map({});
    case Kind::Pair: return pairT(parts_->first.bottom(), parts_->second.bottom());
    case Kind::Opaque: throw std::logic_error("shape: no bottom for opaque component");
  }
  throw std::logic_error("shape: bad kind");
}

// ---------------------------------------------------------------------------
// Collection helpers

Term setInsert(const Term& s, const Term& x) {
  TermVec xs = s.items();
  xs.push_back(x);
  return Term::set(std::move(xs));
}

Term setUnion(const Term& a, const Term& b) {
  TermVec xs = a.items();
  const TermVec& ys = b.items();
  xs.insert(xs.end(), ys.begin(), ys.end());
  return Term::set(std::move(xs));
}

bool setContains(const Term& s, const Term& x) {
  const TermVec& xs = s.items();
  return std::binary_search(xs.begin(), xs.end(), x);
}

Term mapPut(const Term& m, const Term& k, const Term& v) {
  TermPairVec es;
  es.reserve(m.entries().size() + 1);
  bool placed = false;
  for (const auto& e : m.entries()) {
    if (e.first == k) {
      es.emplace_back(k, v);
      placed = true;
    } else {
      es.push_back(e);
    }
  }
  if (!placed) es.emplace_back(k, v);
  return Term::map(std::move(es));
}

Term mapJoinAt(const Term& m, const Term& k, const Term& v) {
  TermPairVec es = m.entries();
  es.emplace_back(k, v);
  return Term::map(std::move(es));
}

Term mapRestrict(const Term& m, const std::function<bool(const Term&)>& keep) {
  TermPairVec es;
  for (const auto& e : m.entries())
    if (keep(e.first)) es.push_back(e);
  return Term::map(std::move(es));
}

}  // namespace lifa
