#include "lifa/syntax.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace lifa::syntax {

const char* opToken(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Apply: return "@";
  }
  return "?";
}

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(column)),
      line(line),
      column(column) {}

// ---------------------------------------------------------------------------
// Lexer

namespace {

struct Token {
  enum class Kind { LParen, RParen, Int, Ident, Plus, Minus, At, Assign, End };
  Kind kind = Kind::End;
  std::string text;
  int64_t value = 0;
  int line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) bump();
    tok_ = Token{};
    tok_.line = line_;
    tok_.column = col_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::Kind::End;
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '(': tok_.kind = Token::Kind::LParen; bump(); return;
      case ')': tok_.kind = Token::Kind::RParen; bump(); return;
      case '+': tok_.kind = Token::Kind::Plus; bump(); return;
      case '-': tok_.kind = Token::Kind::Minus; bump(); return;
      case '@': tok_.kind = Token::Kind::At; bump(); return;
      case ':':
        bump();
        if (pos_ < text_.size() && text_[pos_] == '=') {
          tok_.kind = Token::Kind::Assign;
          bump();
          return;
        }
        throw ParseError("expected ':=' ", tok_.line, tok_.column);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      int64_t v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        int64_t digit = text_[pos_] - '0';
        if (__builtin_mul_overflow(v, int64_t{10}, &v) || __builtin_add_overflow(v, digit, &v))
          throw ParseError("integer literal out of range", tok_.line, tok_.column);
        bump();
      }
      tok_.kind = Token::Kind::Int;
      tok_.value = v;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
              text_[pos_] == '\'')) {
        s += text_[pos_];
        bump();
      }
      tok_.kind = Token::Kind::Ident;
      tok_.text = std::move(s);
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

bool isKeyword(const std::string& s) {
  return s == "lam" || s == "if0" || s == "let" || s == "in" || s == "input";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lx_(text) {}

  SurfacePtr parseAll() {
    SurfacePtr e = parseExp();
    const Token& t = lx_.peek();
    if (t.kind != Token::Kind::End)
      throw ParseError("trailing input after expression", t.line, t.column);
    return e;
  }

 private:
  template <typename N>
  SurfacePtr make(const Token& at, N node) {
    auto e = std::make_shared<SurfaceExp>();
    e->line = at.line;
    e->column = at.column;
    e->node = std::move(node);
    return e;
  }

  Token expect(Token::Kind k, const char* what) {
    Token t = lx_.next();
    if (t.kind != k) throw ParseError(std::string("expected ") + what, t.line, t.column);
    return t;
  }

  Var expectVar() {
    Token t = lx_.next();
    if (t.kind != Token::Kind::Ident)
      throw ParseError("expected variable name", t.line, t.column);
    if (isKeyword(t.text))
      throw ParseError("keyword '" + t.text + "' cannot be used as a variable", t.line, t.column);
    return t.text;
  }

  void expectKeyword(const char* kw) {
    Token t = lx_.next();
    if (t.kind != Token::Kind::Ident || t.text != kw)
      throw ParseError(std::string("expected '") + kw + "'", t.line, t.column);
  }

  SurfacePtr parseExp() {
    Token t = lx_.next();
    switch (t.kind) {
      case Token::Kind::Int: return make(t, SurfaceInt{t.value});
      case Token::Kind::Ident:
        if (t.text == "input") return make(t, SurfaceInput{});
        if (isKeyword(t.text))
          throw ParseError("keyword '" + t.text + "' used outside its form", t.line, t.column);
        return make(t, SurfaceVar{t.text});
      case Token::Kind::LParen: return parseParen(t);
      default: throw ParseError("expected expression", t.line, t.column);
    }
  }

  SurfacePtr parseParen(const Token& open) {
    const Token& head = lx_.peek();
    if (head.kind == Token::Kind::Ident && head.text == "lam") {
      lx_.next();
      expect(Token::Kind::LParen, "'('");
      Var param = expectVar();
      expect(Token::Kind::RParen, "')'");
      SurfacePtr body = parseExp();
      expect(Token::Kind::RParen, "')'");
      return make(open, SurfaceLam{std::move(param), std::move(body)});
    }
    if (head.kind == Token::Kind::Ident && head.text == "if0") {
      lx_.next();
      SurfacePtr c = parseExp();
      SurfacePtr z = parseExp();
      SurfacePtr nz = parseExp();
      expect(Token::Kind::RParen, "')'");
      return make(open, SurfaceIf0{std::move(c), std::move(z), std::move(nz)});
    }
    if (head.kind == Token::Kind::Ident && head.text == "let") {
      lx_.next();
      Var name = expectVar();
      expect(Token::Kind::Assign, "':='");
      SurfacePtr bound = parseExp();
      expectKeyword("in");
      SurfacePtr body = parseExp();
      expect(Token::Kind::RParen, "')'");
      return make(open, SurfaceLet{std::move(name), std::move(bound), std::move(body)});
    }
    SurfacePtr lhs = parseExp();
    Token opTok = lx_.next();
    Op op;
    switch (opTok.kind) {
      case Token::Kind::Plus: op = Op::Add; break;
      case Token::Kind::Minus: op = Op::Sub; break;
      case Token::Kind::At: op = Op::Apply; break;
      default: throw ParseError("expected operator '+', '-' or '@'", opTok.line, opTok.column);
    }
    SurfacePtr rhs = parseExp();
    expect(Token::Kind::RParen, "')'");
    return make(open, SurfaceBin{std::move(lhs), op, std::move(rhs)});
  }

  Lexer lx_;
};

}  // namespace

SurfacePtr parse(std::string_view text) { return Parser(text).parseAll(); }

// ---------------------------------------------------------------------------
// Desugaring and labeling

namespace {

// Unlabeled core tree, labeled in a second preorder pass.
std::shared_ptr<Exp> desugarNode(const SurfacePtr& s) {
  auto out = std::make_shared<Exp>();
  if (auto* i = std::get_if<SurfaceInt>(&s->node)) {
    out->node = AtomExp{IntLit{i->value}};
  } else if (auto* v = std::get_if<SurfaceVar>(&s->node)) {
    out->node = AtomExp{VarRef{v->name}};
  } else if (auto* l = std::get_if<SurfaceLam>(&s->node)) {
    out->node = AtomExp{Lambda{l->param, desugarNode(l->body)}};
  } else if (std::get_if<SurfaceInput>(&s->node)) {
    out->node = AtomExp{InputRead{}};
  } else if (auto* b = std::get_if<SurfaceBin>(&s->node)) {
    out->node = BinExp{desugarNode(b->lhs), b->op, desugarNode(b->rhs)};
  } else if (auto* f = std::get_if<SurfaceIf0>(&s->node)) {
    out->node = IfZeroExp{desugarNode(f->cond), desugarNode(f->ifZero), desugarNode(f->ifNonZero)};
  } else if (auto* let = std::get_if<SurfaceLet>(&s->node)) {
    // (let x := e1 in e2)  ~>  ((lam (x) e2) @ e1)
    auto lam = std::make_shared<Exp>();
    lam->node = AtomExp{Lambda{let->name, desugarNode(let->body)}};
    out->node = BinExp{lam, Op::Apply, desugarNode(let->bound)};
  }
  return out;
}

// The tree is privately owned while labels are assigned, so the const_cast is
// confined to construction.
void assignLabels(const Exp& e, int& next) {
  const_cast<Exp&>(e).label = next++;
  if (auto* a = std::get_if<AtomExp>(&e.node)) {
    if (auto* lam = std::get_if<Lambda>(&a->atom)) assignLabels(*lam->body, next);
  } else if (auto* b = std::get_if<BinExp>(&e.node)) {
    assignLabels(*b->lhs, next);
    assignLabels(*b->rhs, next);
  } else if (auto* f = std::get_if<IfZeroExp>(&e.node)) {
    assignLabels(*f->cond, next);
    assignLabels(*f->ifZero, next);
    assignLabels(*f->ifNonZero, next);
  }
}

void collectFreeVars(const Exp& e, std::set<Var>& out, std::set<Var>& bound) {
  if (auto* a = std::get_if<AtomExp>(&e.node)) {
    if (auto* v = std::get_if<VarRef>(&a->atom)) {
      if (!bound.count(v->name)) out.insert(v->name);
    } else if (auto* lam = std::get_if<Lambda>(&a->atom)) {
      bool fresh = bound.insert(lam->param).second;
      collectFreeVars(*lam->body, out, bound);
      if (fresh) bound.erase(lam->param);
    }
  } else if (auto* b = std::get_if<BinExp>(&e.node)) {
    collectFreeVars(*b->lhs, out, bound);
    collectFreeVars(*b->rhs, out, bound);
  } else if (auto* f = std::get_if<IfZeroExp>(&e.node)) {
    collectFreeVars(*f->cond, out, bound);
    collectFreeVars(*f->ifZero, out, bound);
    collectFreeVars(*f->ifNonZero, out, bound);
  }
}

}  // namespace

std::set<Var> freeVars(const ExpPtr& e) {
  std::set<Var> out, bound;
  collectFreeVars(*e, out, bound);
  return out;
}

std::set<Var> surfaceFreeVars(const SurfacePtr& e) {
  std::set<Var> out;
  std::function<void(const SurfacePtr&, std::set<Var>&)> go = [&](const SurfacePtr& s,
                                                                  std::set<Var>& bound) {
    if (auto* v = std::get_if<SurfaceVar>(&s->node)) {
      if (!bound.count(v->name)) out.insert(v->name);
    } else if (auto* l = std::get_if<SurfaceLam>(&s->node)) {
      bool fresh = bound.insert(l->param).second;
      go(l->body, bound);
      if (fresh) bound.erase(l->param);
    } else if (auto* b = std::get_if<SurfaceBin>(&s->node)) {
      go(b->lhs, bound);
      go(b->rhs, bound);
    } else if (auto* f = std::get_if<SurfaceIf0>(&s->node)) {
      go(f->cond, bound);
      go(f->ifZero, bound);
      go(f->ifNonZero, bound);
    } else if (auto* let = std::get_if<SurfaceLet>(&s->node)) {
      go(let->bound, bound);
      bool fresh = bound.insert(let->name).second;
      go(let->body, bound);
      if (fresh) bound.erase(let->name);
    }
  };
  std::set<Var> bound;
  go(e, bound);
  return out;
}

Program::Program(ExpPtr root) : root_(std::move(root)) {
  std::function<void(const Exp&)> index = [&](const Exp& e) {
    if (e.label != static_cast<int>(nodes_.size()))
      throw std::logic_error("program: labels must be dense preorder ints");
    nodes_.push_back(&e);
    if (auto* a = std::get_if<AtomExp>(&e.node)) {
      if (std::get_if<InputRead>(&a->atom)) usesInput_ = true;
      if (auto* lam = std::get_if<Lambda>(&a->atom)) index(*lam->body);
    } else if (auto* b = std::get_if<BinExp>(&e.node)) {
      index(*b->lhs);
      index(*b->rhs);
    } else if (auto* f = std::get_if<IfZeroExp>(&e.node)) {
      index(*f->cond);
      index(*f->ifZero);
      index(*f->ifNonZero);
    }
  };
  index(*root_);
  freeVars_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    std::set<Var> out, bound;
    collectFreeVars(*nodes_[i], out, bound);
    freeVars_[i] = std::move(out);
  }
}

const Exp& Program::byLabel(int label) const {
  if (label < 0 || label >= static_cast<int>(nodes_.size()))
    throw std::out_of_range("program: no such label: " + std::to_string(label));
  return *nodes_[label];
}

const std::set<Var>& Program::freeVars(int label) const { return freeVars_.at(label); }

Program desugar(const SurfacePtr& surface) {
  std::shared_ptr<Exp> core = desugarNode(surface);
  int next = 0;
  assignLabels(*core, next);
  return Program(core);
}

Program parseProgram(std::string_view text) { return desugar(parse(text)); }

std::string prettyPrint(const ExpPtr& e) {
  std::ostringstream o;
  std::function<void(const Exp&)> go = [&](const Exp& x) {
    if (auto* a = std::get_if<AtomExp>(&x.node)) {
      if (auto* i = std::get_if<IntLit>(&a->atom)) {
        o << i->value;
      } else if (auto* v = std::get_if<VarRef>(&a->atom)) {
        o << v->name;
      } else if (auto* lam = std::get_if<Lambda>(&a->atom)) {
        o << "(lam (" << lam->param << ") ";
        go(*lam->body);
        o << ")";
      } else {
        o << "input";
      }
    } else if (auto* b = std::get_if<BinExp>(&x.node)) {
      o << "(";
      go(*b->lhs);
      o << " " << opToken(b->op) << " ";
      go(*b->rhs);
      o << ")";
    } else if (auto* f = std::get_if<IfZeroExp>(&x.node)) {
      o << "(if0 ";
      go(*f->cond);
      o << " ";
      go(*f->ifZero);
      o << " ";
      go(*f->ifNonZero);
      o << ")";
    }
  };
  go(*e);
  return o.str();
}

}  // namespace lifa::syntax
