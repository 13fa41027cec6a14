#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lexcon/syntax.hpp"
#include "lexcon/term.hpp"

namespace lexcon {

struct PredicateId {
  Symbol name;
  std::size_t arity = 0;
  friend bool operator==(const PredicateId&, const PredicateId&) = default;
  std::string str() const { return name.str() + "/" + std::to_string(arity); }
};

struct PredicateIdHash {
  std::size_t operator()(const PredicateId& p) const noexcept {
    return std::hash<std::uint32_t>()(p.name.id()) * 31 + p.arity;
  }
};

/// Principal functor of a first argument, for clause selection.
struct IndexKey {
  enum class Kind { any, atom, nil, cons, avm, compound };
  Kind kind = Kind::any;
  Symbol name;
  std::size_t arity = 0;

  bool compatible(const IndexKey& other) const {
    if (kind == Kind::any || other.kind == Kind::any) return true;
    if (kind != other.kind) return false;
    return (kind != Kind::atom && kind != Kind::compound) ||
           (name == other.name && arity == other.arity);
  }
};

struct Clause {
  TermRef head;
  std::vector<TermRef> body;
  std::uint32_t begin = 0;  // cell range in the template store
  std::uint32_t end = 0;
  IndexKey key;
  std::string origin;
  int line = 0;
  std::vector<syntax::Pos> body_pos;
};

struct Source {
  std::string text;
  std::string origin;
};

/// A loaded grammar: sort hierarchy, definite clauses and block declarations.
/// Immutable after loading and safe to share between concurrent solver runs.
class Program {
 public:
  const SortTable& sorts() const { return *sorts_; }
  const Store& templates() const { return *templates_; }

  bool defined(const PredicateId& p) const { return clauses_.contains(p) || builtin(p); }

  static bool builtin(const PredicateId& p) {
    return (p.name == Symbol("=") && p.arity == 2) || (p.name == Symbol("true") && p.arity == 0);
  }

  const std::vector<Clause>* clauses(const PredicateId& p) const {
    auto it = clauses_.find(p);
    return it == clauses_.end() ? nullptr : &it->second;
  }

  const BlockSpec* block(const PredicateId& p) const {
    auto it = blocks_.find(p);
    return it == blocks_.end() ? nullptr : &it->second;
  }

  std::vector<PredicateId> predicates() const {
    std::vector<PredicateId> out;
    for (const auto& [p, cs] : clauses_) out.push_back(p);
    return out;
  }

  std::size_t clause_count() const {
    std::size_t n = 0;
    for (const auto& [p, cs] : clauses_) n += cs.size();
    return n;
  }

  /// Renames a clause into `store` (fresh variables for every use).
  std::pair<TermRef, std::vector<TermRef>> instantiate(const Clause& c, Store& store) const {
    std::vector<std::uint32_t> memo(c.end - c.begin, kNone);
    TermRef head = store.import(*templates_, c.head, c.begin, memo);
    std::vector<TermRef> body;
    body.reserve(c.body.size());
    for (auto g : c.body) body.push_back(store.import(*templates_, g, c.begin, memo));
    return {head, std::move(body)};
  }

 private:
  friend class ProgramBuilder;

  std::shared_ptr<SortTable> sorts_ = std::make_shared<SortTable>();
  std::shared_ptr<Store> templates_ = std::make_shared<Store>(*sorts_);
  std::unordered_map<PredicateId, std::vector<Clause>, PredicateIdHash> clauses_;
  std::unordered_map<PredicateId, BlockSpec, PredicateIdHash> blocks_;
};

/// Builds AST terms into a store. Variables are scoped to one builder; `_`
/// is always fresh.
class TermBuilder {
 public:
  TermBuilder(Store& store, const SortTable& sorts, std::string origin,
              std::vector<Diagnostic>& diags)
      : store_(store), sorts_(sorts), origin_(std::move(origin)), diags_(diags) {}

  TermRef build(const syntax::Ast& a) {
    using K = syntax::Ast::Kind;
    switch (a.kind) {
      case K::var: {
        if (a.name == "_") return store_.var();
        auto it = vars_.find(a.name);
        if (it != vars_.end()) return it->second;
        TermRef v = store_.var();
        vars_.emplace(a.name, v);
        order_.emplace_back(a.name, v);
        return v;
      }
      case K::atom: return store_.atom(a.name);
      case K::nil: return store_.nil();
      case K::cons: {
        TermRef h = build(a.children[0]);
        TermRef t = build(a.children[1]);
        return store_.cons(h, t);
      }
      case K::compound: {
        std::vector<TermRef> args;
        for (const auto& c : a.children) args.push_back(build(c));
        return store_.structure(a.name, std::move(args));
      }
      case K::avm: break;
    }
    auto sort = sorts_.find(Symbol(a.name));
    if (!sort) {
      error(a.pos, "unknown sort '" + a.name + "'");
      sort = SortTable::kTop;
    }
    TermRef node = store_.avm(*sort);
    for (const auto& [path, value] : a.features) {
      TermRef v = build(value);
      // Paths a|b|c: v expand to nested AVMs of sort top, merged by
      // unification so repeated prefixes share one node.
      TermRef inner = v;
      for (std::size_t i = path.size(); i-- > 1;) {
        inner = store_.avm(SortTable::kTop, {{Symbol(path[i]), inner}});
      }
      TermRef wrapper = store_.avm(SortTable::kTop, {{Symbol(path[0]), inner}});
      if (!store_.unify(node, wrapper)) {
        error(value.pos, "conflicting values for feature '" + path[0] + "'");
      }
    }
    return store_.deref(node);
  }

  const std::vector<std::pair<std::string, TermRef>>& variables() const { return order_; }

 private:
  void error(syntax::Pos p, std::string msg) {
    diags_.push_back({origin_, p.line, p.column, std::move(msg)});
  }

  Store& store_;
  const SortTable& sorts_;
  std::string origin_;
  std::vector<Diagnostic>& diags_;
  std::unordered_map<std::string, TermRef> vars_;
  std::vector<std::pair<std::string, TermRef>> order_;
};

struct LoadResult {
  std::optional<Program> program;
  std::vector<Diagnostic> errors;

  explicit operator bool() const { return program.has_value(); }
  Program& value() {
    if (!program) throw LoadError(errors);
    return *program;
  }
};

/// Collects sources, then registers sorts first, block declarations next and
/// clauses last, so declaration order across files does not matter.
class ProgramBuilder {
 public:
  ProgramBuilder& add(std::string text, std::string origin) {
    sources_.push_back({std::move(text), std::move(origin)});
    return *this;
  }

  LoadResult build() {
    std::vector<Diagnostic> diags;
    std::vector<std::pair<std::string, syntax::Module>> modules;
    for (const auto& s : sources_) {
      modules.emplace_back(s.origin, syntax::parse_module(s.text, s.origin, diags));
    }
    Program prog;
    declare_sorts(prog, modules, diags);
    std::unordered_map<PredicateId, std::pair<std::string, syntax::Pos>, PredicateIdHash> dyn;
    for (const auto& [origin, m] : modules) {
      for (const auto& d : m.dynamics) {
        PredicateId id{Symbol(d.predicate), d.arity};
        prog.clauses_[id];
        dyn.emplace(id, std::make_pair(origin, d.pos));
      }
    }
    std::vector<std::pair<std::string, const syntax::BlockDecl*>> block_decls;
    for (const auto& [origin, m] : modules) {
      for (const auto& c : m.clauses) add_clause(prog, origin, c, diags);
      for (const auto& b : m.blocks) block_decls.emplace_back(origin, &b);
    }
    for (const auto& [origin, b] : block_decls) add_block(prog, origin, *b, diags);
    check_calls(prog, diags);
    if (!diags.empty()) return {std::nullopt, std::move(diags)};
    return {std::move(prog), {}};
  }

 private:
  static void declare_sorts(Program& prog,
                            const std::vector<std::pair<std::string, syntax::Module>>& modules,
                            std::vector<Diagnostic>& diags) {
    struct Pending {
      std::string origin;
      std::string name;
      std::string parent;
      syntax::Pos pos;
    };
    std::vector<Pending> todo;
    std::unordered_map<std::string, int> seen{{"top", 1}};
    for (const auto& [origin, m] : modules) {
      for (const auto& d : m.sorts) {
        for (const auto& n : d.names) {
          if (seen[n]++) {
            diags.push_back({origin, d.pos.line, d.pos.column, "duplicate sort declaration '" + n + "'"});
            continue;
          }
          todo.push_back({origin, n, d.parent.empty() ? "top" : d.parent, d.pos});
        }
      }
    }
    // Parents may be declared after children; resolve in passes.
    bool progress = true;
    while (!todo.empty() && progress) {
      progress = false;
      for (auto it = todo.begin(); it != todo.end();) {
        if (auto parent = prog.sorts_->find(Symbol(it->parent))) {
          prog.sorts_->declare(Symbol(it->name), *parent);
          it = todo.erase(it);
          progress = true;
        } else {
          ++it;
        }
      }
    }
    for (const auto& p : todo) {
      diags.push_back({p.origin, p.pos.line, p.pos.column,
                       "sort '" + p.name + "' has undeclared parent '" + p.parent + "'"});
    }
  }

  static IndexKey key_of(const syntax::Ast& head) {
    using K = syntax::Ast::Kind;
    IndexKey key;
    if (head.kind != K::compound || head.children.empty()) return key;
    const auto& a = head.children[0];
    switch (a.kind) {
      case K::var: break;
      case K::atom: key = {IndexKey::Kind::atom, Symbol(a.name), 0}; break;
      case K::nil: key.kind = IndexKey::Kind::nil; break;
      case K::cons: key.kind = IndexKey::Kind::cons; break;
      case K::avm: key.kind = IndexKey::Kind::avm; break;
      case K::compound: key = {IndexKey::Kind::compound, Symbol(a.name), a.children.size()}; break;
    }
    return key;
  }

  static void add_clause(Program& prog, const std::string& origin, const syntax::ClauseDecl& c,
                         std::vector<Diagnostic>& diags) {
    Store& t = *prog.templates_;
    Clause clause;
    clause.begin = static_cast<std::uint32_t>(t.size());
    TermBuilder b(t, *prog.sorts_, origin, diags);
    clause.head = b.build(c.head);
    for (const auto& g : c.body) {
      clause.body.push_back(b.build(g));
      clause.body_pos.push_back(g.pos);
    }
    clause.end = static_cast<std::uint32_t>(t.size());
    clause.key = key_of(c.head);
    clause.origin = origin;
    clause.line = c.pos.line;
    PredicateId id{Symbol(c.head.name), c.head.children.size()};
    if (Program::builtin(id)) {
      diags.push_back({origin, c.pos.line, c.pos.column, "cannot redefine built-in " + id.str()});
      return;
    }
    prog.clauses_[id].push_back(std::move(clause));
  }

  static void add_block(Program& prog, const std::string& origin, const syntax::BlockDecl& b,
                        std::vector<Diagnostic>& diags) {
    PredicateId id{Symbol(b.predicate), b.dashes.size()};
    if (!prog.clauses_.contains(id)) {
      diags.push_back({origin, b.pos.line, b.pos.column,
                       "block declaration for undefined predicate " + id.str()});
      return;
    }
    auto& spec = prog.blocks_[id];
    spec.predicate = id.name;
    spec.arity = id.arity;
    std::vector<ArgMode> pattern;
    for (bool d : b.dashes) pattern.push_back(d ? ArgMode::dash : ArgMode::question);
    if (std::find(spec.patterns.begin(), spec.patterns.end(), pattern) == spec.patterns.end())
      spec.patterns.push_back(std::move(pattern));
  }

  static void check_calls(Program& prog, std::vector<Diagnostic>& diags) {
    const Store& t = *prog.templates_;
    for (const auto& [id, clauses] : prog.clauses_) {
      for (const auto& c : clauses) {
        for (std::size_t i = 0; i < c.body.size(); ++i) {
          auto callee = goal_id(t, c.body[i]);
          const syntax::Pos& at = c.body_pos[i];
          if (!callee) {
            diags.push_back({c.origin, at.line, at.column, "body goal is not callable"});
          } else if (!prog.defined(*callee)) {
            diags.push_back({c.origin, at.line, at.column, "call to undefined predicate " + callee->str()});
          }
        }
      }
    }
  }

 public:
  static std::optional<PredicateId> goal_id(const Store& store, TermRef goal) {
    const Cell& c = store.at(goal);
    if (const auto* s = std::get_if<StructCell>(&c)) return PredicateId{s->functor, s->args.size()};
    if (const auto* a = std::get_if<AtomCell>(&c)) return PredicateId{a->name, 0};
    return std::nullopt;
  }

 private:
  std::vector<Source> sources_;
};

inline LoadResult load_program(std::string text, std::string origin = "<input>") {
  return ProgramBuilder().add(std::move(text), std::move(origin)).build();
}

/// Goals parsed from text into a caller's store, with the named variables.
struct Query {
  std::vector<TermRef> goals;
  std::vector<std::pair<std::string, TermRef>> variables;

  std::optional<TermRef> var(std::string_view name) const {
    for (const auto& [n, v] : variables) {
      if (n == name) return v;
    }
    return std::nullopt;
  }
};

/// Throws LoadError on syntax errors or unknown sorts.
inline Query parse_query(const Program& program, Store& store, std::string_view text) {
  std::vector<Diagnostic> diags;
  auto asts = syntax::parse_goals(text, "<query>", diags);
  Query q;
  TermBuilder b(store, program.sorts(), "<query>", diags);
  for (const auto& a : asts) q.goals.push_back(b.build(a));
  if (!diags.empty()) throw LoadError(diags);
  q.variables = b.variables();
  return q;
}

/// Single term (not a goal list) parsed into `store`.
inline TermRef parse_term(const Program& program, Store& store, std::string_view text) {
  std::string wrapped = "'$term'(" + std::string(text) + ")";
  auto q = parse_query(program, store, wrapped);
  return std::get<StructCell>(store.at(q.goals.at(0))).args.at(0);
}

}  // namespace lexcon
