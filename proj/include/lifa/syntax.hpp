#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lifa::syntax {

using Var = std::string;

enum class Op : uint8_t { Add, Sub, Apply };

const char* opToken(Op op);  // "+", "-", "@"

struct Exp;
using ExpPtr = std::shared_ptr<const Exp>;

struct IntLit {
  int64_t value = 0;
};
struct VarRef {
  Var name;
};
struct Lambda {
  Var param;
  ExpPtr body;
};
struct InputRead {};

using Atom = std::variant<IntLit, VarRef, Lambda, InputRead>;

struct AtomExp {
  Atom atom;
};
struct BinExp {
  ExpPtr lhs;
  Op op = Op::Apply;
  ExpPtr rhs;
};
struct IfZeroExp {
  ExpPtr cond;
  ExpPtr ifZero;
  ExpPtr ifNonZero;
};

// Core expression. Labels are dense ints assigned by preorder traversal and
// unique within a program; every analysis fact keys on them.
struct Exp {
  int label = -1;
  std::variant<AtomExp, BinExp, IfZeroExp> node;

  bool isAtomic() const { return std::holds_alternative<AtomExp>(node); }
  const Atom& atom() const { return std::get<AtomExp>(node).atom; }
};

// Surface syntax: core grammar plus let-bindings (desugared to application).
struct SurfaceExp;
using SurfacePtr = std::shared_ptr<const SurfaceExp>;

struct SurfaceInt {
  int64_t value = 0;
};
struct SurfaceVar {
  Var name;
};
struct SurfaceLam {
  Var param;
  SurfacePtr body;
};
struct SurfaceInput {};
struct SurfaceBin {
  SurfacePtr lhs;
  Op op = Op::Apply;
  SurfacePtr rhs;
};
struct SurfaceIf0 {
  SurfacePtr cond;
  SurfacePtr ifZero;
  SurfacePtr ifNonZero;
};
struct SurfaceLet {
  Var name;
  SurfacePtr bound;
  SurfacePtr body;
};

struct SurfaceExp {
  int line = 0, column = 0;
  std::variant<SurfaceInt, SurfaceVar, SurfaceLam, SurfaceInput, SurfaceBin, SurfaceIf0,
               SurfaceLet>
      node;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line, column;
};

SurfacePtr parse(std::string_view text);

// A labeled program with per-label lookup and cached free-variable sets.
class Program {
 public:
  explicit Program(ExpPtr root);

  const ExpPtr& root() const { return root_; }
  const Exp& byLabel(int label) const;
  int labelCount() const { return static_cast<int>(nodes_.size()); }
  const std::set<Var>& freeVars(int label) const;
  bool usesInput() const { return usesInput_; }

 private:
  ExpPtr root_;
  std::vector<const Exp*> nodes_;
  std::vector<std::set<Var>> freeVars_;
  bool usesInput_ = false;
};

// Let-encoding plus preorder labeling.
Program desugar(const SurfacePtr& surface);

std::set<Var> freeVars(const ExpPtr& e);
std::set<Var> surfaceFreeVars(const SurfacePtr& e);

std::string prettyPrint(const ExpPtr& e);
Program parseProgram(std::string_view text);  // parse + desugar

}  // namespace lifa::syntax
