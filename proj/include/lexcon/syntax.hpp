#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexcon/error.hpp"

namespace lexcon {

struct Diagnostic {
  std::string origin;
  int line = 0;
  int column = 0;
  std::string message;

  std::string str() const {
    return origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }
};

class LoadError : public Error {
 public:
  explicit LoadError(std::vector<Diagnostic> diagnostics)
      : Error(summary(diagnostics)), diagnostics_(std::move(diagnostics)) {}
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

  static std::string summary(const std::vector<Diagnostic>& ds) {
    std::string s;
    for (const auto& d : ds) s += d.str() + "\n";
    return s;
  }

 private:
  std::vector<Diagnostic> diagnostics_;
};

namespace syntax {

struct Pos {
  int line = 1;
  int column = 1;
};

/// Parsed term, before sorts and variables are resolved.
struct Ast {
  enum class Kind { var, atom, nil, cons, avm, compound };
  Kind kind = Kind::atom;
  std::string name;            // variable, atom, functor or sort name
  std::vector<Ast> children;   // compound args; cons = {head, tail}
  std::vector<std::pair<std::vector<std::string>, Ast>> features;  // path: value
  Pos pos;
};

struct SortDecl {
  std::vector<std::string> names;
  std::string parent;  // empty = top
  Pos pos;
};

struct BlockDecl {
  std::string predicate;
  std::vector<bool> dashes;  // true for '-', false for '?'
  Pos pos;
};

struct DynamicDecl {
  std::string predicate;
  std::size_t arity = 0;
  Pos pos;
};

struct ClauseDecl {
  Ast head;
  std::vector<Ast> body;
  Pos pos;
};

struct Module {
  std::vector<SortDecl> sorts;
  std::vector<BlockDecl> blocks;
  std::vector<DynamicDecl> dynamics;
  std::vector<ClauseDecl> clauses;
};

enum class Tok { name, var, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  Pos pos;
};

class Lexer {
 public:
  Lexer(std::string_view src, std::string origin, std::vector<Diagnostic>& diags)
      : src_(src), origin_(std::move(origin)), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Pos p = pos_;
      if (i_ >= src_.size()) {
        out.push_back({Tok::end, "", p});
        return out;
      }
      char c = src_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string s;
        while (i_ < src_.size()) {
          char d = src_[i_];
          bool word = std::isalnum(static_cast<unsigned char>(d)) || d == '_';
          bool hyphen = d == '-' && i_ + 1 < src_.size() &&
                        std::isalnum(static_cast<unsigned char>(src_[i_ + 1]));
          if (!word && !hyphen) break;
          s += d;
          advance();
        }
        bool is_var = std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_';
        out.push_back({is_var ? Tok::var : Tok::name, s, p});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string s;
        while (i_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[i_]))) {
          s += src_[i_];
          advance();
        }
        out.push_back({Tok::name, s, p});
      } else if (c == '\'') {
        advance();
        std::string s;
        while (i_ < src_.size() && src_[i_] != '\'' && src_[i_] != '\n') {
          s += src_[i_];
          advance();
        }
        if (i_ >= src_.size() || src_[i_] != '\'') {
          error(p, "unterminated quoted atom");
        } else {
          advance();
        }
        out.push_back({Tok::name, s, p});
      } else if (src_.substr(i_, 2) == ":-") {
        advance(2);
        out.push_back({Tok::punct, ":-", p});
      } else if (src_.substr(i_, 3) == "⟨") {
        advance(3);
        out.push_back({Tok::punct, "[", p});
      } else if (src_.substr(i_, 3) == "⟩") {
        advance(3);
        out.push_back({Tok::punct, "]", p});
      } else if (std::string_view("()[]{},|.:@=<-?/").find(c) != std::string_view::npos) {
        advance();
        out.push_back({Tok::punct, std::string(1, c), p});
      } else {
        error(p, std::string("unexpected character '") + c + "'");
        advance();
      }
    }
  }

 private:
  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i_ < src_.size(); ++k) {
      char c = src_[i_++];
      if (c == '\n') {
        ++pos_.line;
        pos_.column = 1;
      } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
        ++pos_.column;
      }
    }
  }

  void skip_space() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void error(Pos p, std::string msg) { diags_.push_back({origin_, p.line, p.column, std::move(msg)}); }

  std::string_view src_;
  std::string origin_;
  std::vector<Diagnostic>& diags_;
  std::size_t i_ = 0;
  Pos pos_;
};

/// Recursive-descent parser for the grammar language:
///
///   sort finite < verbal.
///   :- block concat(-,?,-).
///   :- dynamic operator/3.
///   concat([], A, A).
///   concat([B|C], A, [B|D]) :- concat(C, A, D).
///   stem(kussen, @verbal{sc: ⟨@noun{sem: A2}⟩, sem|nuc|qfsoa: @kiss-soa{kissed: A2}}).
///
/// Atoms start lowercase (or are quoted), variables uppercase or `_`. Lists
/// use `[...]` or `⟨...⟩` with an optional `| Tail`. `@sort{f: v, f|g: v}`
/// writes an AVM; `a|b` is a feature path. `X = Y` is the only infix goal.
class Parser {
 public:
  Parser(std::vector<Token> toks, std::string origin, std::vector<Diagnostic>& diags)
      : toks_(std::move(toks)), origin_(std::move(origin)), diags_(diags) {}

  Module module() {
    Module m;
    while (peek().kind != Tok::end) {
      try {
        statement(m);
      } catch (const Abort&) {
        recover();
      }
    }
    return m;
  }

  /// A conjunction of goals terminated by end of input (an optional final
  /// '.' is accepted).
  std::vector<Ast> goals() {
    std::vector<Ast> out;
    try {
      out = body();
      if (is_punct(".")) next();
      if (peek().kind != Tok::end) fail(peek().pos, "unexpected '" + peek().text + "'");
    } catch (const Abort&) {
    }
    return out;
  }

 private:
  struct Abort {};

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(k_ + ahead, toks_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    if (k_ < toks_.size() - 1) ++k_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::punct && peek(ahead).text == p;
  }
  [[noreturn]] void fail(Pos p, std::string msg) {
    diags_.push_back({origin_, p.line, p.column, std::move(msg)});
    throw Abort{};
  }
  void expect(std::string_view p) {
    if (!is_punct(p)) {
      std::string got = peek().kind == Tok::end ? "end of input" : "'" + peek().text + "'";
      fail(peek().pos, "expected '" + std::string(p) + "' but found " + got);
    }
    next();
  }
  std::string expect_name(std::string_view what) {
    if (peek().kind != Tok::name) fail(peek().pos, "expected " + std::string(what));
    return next().text;
  }

  void recover() {
    while (peek().kind != Tok::end && !is_punct(".")) next();
    if (is_punct(".")) next();
  }

  void statement(Module& m) {
    Pos p = peek().pos;
    if (peek().kind == Tok::name && peek().text == "sort" && peek(1).kind == Tok::name) {
      next();
      SortDecl d;
      d.pos = p;
      d.names.push_back(expect_name("sort name"));
      while (is_punct(",")) {
        next();
        d.names.push_back(expect_name("sort name"));
      }
      if (is_punct("<")) {
        next();
        d.parent = expect_name("parent sort");
      }
      expect(".");
      m.sorts.push_back(std::move(d));
    } else if (is_punct(":-")) {
      next();
      std::string directive = expect_name("directive");
      if (directive == "block") {
        do {
          if (is_punct(",")) next();
          m.blocks.push_back(block_pattern());
        } while (is_punct(","));
      } else if (directive == "dynamic") {
        do {
          if (is_punct(",")) next();
          DynamicDecl d;
          d.pos = peek().pos;
          d.predicate = expect_name("predicate name");
          expect("/");
          d.arity = std::stoul(expect_name("arity"));
          m.dynamics.push_back(d);
        } while (is_punct(","));
      } else {
        fail(p, "unknown directive '" + directive + "'");
      }
      expect(".");
    } else {
      ClauseDecl c;
      c.pos = p;
      c.head = term();
      if (c.head.kind != Ast::Kind::atom && c.head.kind != Ast::Kind::compound)
        fail(p, "clause head must be an atom or compound term");
      if (is_punct(":-")) {
        next();
        c.body = body();
      }
      expect(".");
      m.clauses.push_back(std::move(c));
    }
  }

  BlockDecl block_pattern() {
    BlockDecl b;
    b.pos = peek().pos;
    b.predicate = expect_name("predicate name");
    expect("(");
    for (;;) {
      if (is_punct("-")) {
        b.dashes.push_back(true);
      } else if (is_punct("?")) {
        b.dashes.push_back(false);
      } else {
        fail(peek().pos, "malformed block mask: expected '-' or '?'");
      }
      next();
      if (is_punct(")")) break;
      expect(",");
    }
    next();
    return b;
  }

  std::vector<Ast> body() {
    std::vector<Ast> goals{goal()};
    while (is_punct(",")) {
      next();
      goals.push_back(goal());
    }
    return goals;
  }

  Ast goal() {
    Ast lhs = term();
    if (!is_punct("=")) {
      if (lhs.kind != Ast::Kind::atom && lhs.kind != Ast::Kind::compound)
        fail(lhs.pos, "goal must be an atom or compound term");
      return lhs;
    }
    Pos p = next().pos;
    Ast eq;
    eq.kind = Ast::Kind::compound;
    eq.name = "=";
    eq.pos = p;
    eq.children.push_back(std::move(lhs));
    eq.children.push_back(term());
    return eq;
  }

  Ast term() {
    const Token& t = peek();
    Ast a;
    a.pos = t.pos;
    if (t.kind == Tok::var) {
      a.kind = Ast::Kind::var;
      a.name = next().text;
      return a;
    }
    if (t.kind == Tok::name) {
      a.name = next().text;
      if (is_punct("(")) {
        next();
        a.kind = Ast::Kind::compound;
        a.children.push_back(term());
        while (is_punct(",")) {
          next();
          a.children.push_back(term());
        }
        expect(")");
      } else {
        a.kind = Ast::Kind::atom;
      }
      return a;
    }
    if (is_punct("[")) return list();
    if (is_punct("@")) return avm();
    if (t.kind == Tok::end) fail(t.pos, "unexpected end of input");
    fail(t.pos, "unexpected '" + t.text + "'");
  }

  Ast list() {
    Pos p = next().pos;
    if (is_punct("]")) {
      next();
      Ast nil;
      nil.kind = Ast::Kind::nil;
      nil.pos = p;
      return nil;
    }
    std::vector<Ast> items{term()};
    while (is_punct(",")) {
      next();
      items.push_back(term());
    }
    Ast tail;
    tail.kind = Ast::Kind::nil;
    tail.pos = p;
    if (is_punct("|")) {
      next();
      tail = term();
    }
    expect("]");
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
      Ast cell;
      cell.kind = Ast::Kind::cons;
      cell.pos = it->pos;
      cell.children.push_back(std::move(*it));
      cell.children.push_back(std::move(tail));
      tail = std::move(cell);
    }
    return tail;
  }

  Ast avm() {
    Ast a;
    a.kind = Ast::Kind::avm;
    a.pos = next().pos;
    a.name = expect_name("sort name after '@'");
    if (!is_punct("{")) return a;
    next();
    if (is_punct("}")) {
      next();
      return a;
    }
    for (;;) {
      std::vector<std::string> path{expect_name("feature name")};
      while (is_punct("|")) {
        next();
        path.push_back(expect_name("feature name"));
      }
      expect(":");
      a.features.emplace_back(std::move(path), term());
      if (is_punct("}")) break;
      expect(",");
    }
    next();
    return a;
  }

  std::vector<Token> toks_;
  std::size_t k_ = 0;
  std::string origin_;
  std::vector<Diagnostic>& diags_;
};

inline Module parse_module(std::string_view src, const std::string& origin,
                           std::vector<Diagnostic>& diags) {
  auto toks = Lexer(src, origin, diags).run();
  return Parser(std::move(toks), origin, diags).module();
}

inline std::vector<Ast> parse_goals(std::string_view src, const std::string& origin,
                                    std::vector<Diagnostic>& diags) {
  auto toks = Lexer(src, origin, diags).run();
  return Parser(std::move(toks), origin, diags).goals();
}

}  // namespace syntax
}  // namespace lexcon
