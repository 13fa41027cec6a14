#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lexcon/program.hpp"
#include "lexcon/render.hpp"
#include "lexcon/term.hpp"

namespace lexcon {

struct Limits {
  /// Resolution steps along one branch before the search is abandoned.
  std::size_t max_depth = 10'000;
  std::size_t max_solutions = std::numeric_limits<std::size_t>::max();
};

enum class StreamEnd {
  exhausted,  // every branch explored
  truncated,  // depth limit hit; the solution set may be incomplete
  stopped,    // consumer or max_solutions ended the stream
};

inline const char* to_string(StreamEnd e) {
  switch (e) {
    case StreamEnd::exhausted: return "exhausted";
    case StreamEnd::truncated: return "truncated";
    case StreamEnd::stopped: return "stopped";
  }
  return "?";
}

/// Called once per solution while the bindings are live in the store.
/// Returning false ends the stream.
using SolutionHandler = std::function<bool(Store&)>;

/// Depth-first SLD resolution with chronological backtracking and block
/// declarations. Goals whose block condition holds are parked on their
/// blocking variables; a binding that lifts the condition queues them, and
/// queued goals run before the rest of the current clause body, oldest
/// first. Solutions may carry residue (goals still parked); the caller
/// decides what that means.
///
/// solve() may be re-entered from inside a handler on the same store: the
/// inner search sees the outer bindings and parked goals and undoes only its
/// own effects.
class Solver {
 public:
  Solver(const Program& program, Store& store) : program_(program), store_(store) {}

  StreamEnd solve(std::span<const TermRef> goals, const Limits& limits,
                  const SolutionHandler& on_solution) {
    Mark entry = store_.mark();
    std::vector<GoalNode> arena;
    std::vector<Choice> choices;
    std::size_t found = 0;

    // Goals woken by the caller's own unifications go first.
    std::uint32_t list = kNone;
    for (std::size_t i = goals.size(); i-- > 0;) list = push(arena, goals[i], list);
    list = prepend(arena, store_.take_pending(), list);
    std::size_t depth = 0;

    auto backtrack = [&]() -> bool {
      while (!choices.empty()) {
        Choice& cp = choices.back();
        store_.undo_to(cp.mark);
        arena.resize(cp.arena);
        while (++cp.next < cp.candidates.size()) {
          if (auto body = try_clause(arena, cp, cp.candidates[cp.next])) {
            list = *body;
            depth = cp.depth + 1;
            return true;
          }
        }
        choices.pop_back();
      }
      return false;
    };

    for (;;) {
      if (depth > limits.max_depth) {
        store_.undo_to(entry);
        return StreamEnd::truncated;
      }
      if (list == kNone) {
        ++found;
        if (auto* obs = store_.observer()) obs->on_solution(store_);
        bool more = on_solution(store_);
        if (!more || found >= limits.max_solutions) {
          store_.undo_to(entry);
          return StreamEnd::stopped;
        }
        if (!backtrack()) break;
        continue;
      }
      TermRef goal = arena[list].goal;
      std::uint32_t rest = arena[list].next;
      auto id = ProgramBuilder::goal_id(store_, goal);
      if (!id) throw SolveError("goal is not callable: " + render_avm(store_, goal));
      if (auto* obs = store_.observer()) obs->on_call(store_, goal, depth);

      if (Program::builtin(*id)) {
        if (id->arity == 0) {
          list = rest;
          continue;
        }
        const auto& args = std::get<StructCell>(store_.at(goal)).args;
        if (store_.unify(args[0], args[1])) {
          list = prepend(arena, store_.take_pending(), rest);
          continue;
        }
        if (!backtrack()) break;
        continue;
      }

      if (const BlockSpec* spec = program_.block(*id); spec && store_.is_blocked(goal, *spec)) {
        store_.suspend(goal, *spec);
        list = rest;
        continue;
      }

      const auto* clauses = program_.clauses(*id);
      if (!clauses) throw SolveError("call to undefined predicate " + id->str());
      if (auto* obs = store_.observer()) obs->on_resolve(store_, goal);
      Choice cp;
      cp.goal = goal;
      cp.rest = rest;
      cp.clauses = clauses;
      cp.mark = store_.mark();
      cp.arena = arena.size();
      cp.depth = depth;
      IndexKey key = key_of(goal);
      for (std::size_t i = 0; i < clauses->size(); ++i) {
        if ((*clauses)[i].key.compatible(key)) cp.candidates.push_back(i);
      }
      bool entered = false;
      for (cp.next = 0; cp.next < cp.candidates.size(); ++cp.next) {
        if (auto body = try_clause(arena, cp, cp.candidates[cp.next])) {
          list = *body;
          depth = cp.depth + 1;
          entered = true;
          break;
        }
      }
      if (entered) {
        if (cp.next + 1 < cp.candidates.size()) choices.push_back(std::move(cp));
        continue;
      }
      if (!backtrack()) break;
    }
    store_.undo_to(entry);
    return StreamEnd::exhausted;
  }

  StreamEnd solve(TermRef goal, const Limits& limits, const SolutionHandler& on_solution) {
    TermRef goals[] = {goal};
    return solve(goals, limits, on_solution);
  }

 private:
  struct GoalNode {
    TermRef goal;
    std::uint32_t next;
  };

  struct Choice {
    TermRef goal;
    std::uint32_t rest = kNone;
    const std::vector<Clause>* clauses = nullptr;
    std::vector<std::size_t> candidates;
    std::size_t next = 0;
    Mark mark;
    std::size_t arena = 0;
    std::size_t depth = 0;
  };

  static std::uint32_t push(std::vector<GoalNode>& arena, TermRef goal, std::uint32_t next) {
    arena.push_back({goal, next});
    return static_cast<std::uint32_t>(arena.size() - 1);
  }

  static std::uint32_t prepend(std::vector<GoalNode>& arena, const std::vector<TermRef>& goals,
                               std::uint32_t next) {
    for (std::size_t i = goals.size(); i-- > 0;) next = push(arena, goals[i], next);
    return next;
  }

  IndexKey key_of(TermRef goal) const {
    IndexKey key;
    const auto* s = std::get_if<StructCell>(&store_.at(goal));
    if (!s || s->args.empty()) return key;
    const Cell& a = store_.at(s->args[0]);
    switch (a.index()) {
      case 1: key = {IndexKey::Kind::atom, std::get<AtomCell>(a).name, 0}; break;
      case 2: key.kind = IndexKey::Kind::avm; break;
      case 3: key.kind = IndexKey::Kind::nil; break;
      case 4: key.kind = IndexKey::Kind::cons; break;
      case 5: {
        const auto& st = std::get<StructCell>(a);
        key = {IndexKey::Kind::compound, st.functor, st.args.size()};
        break;
      }
      default: break;
    }
    return key;
  }

  // Renames clause `index` and unifies its head with the choice's goal.
  // Returns the new goal list (woken goals, then body, then the rest).
  std::optional<std::uint32_t> try_clause(std::vector<GoalNode>& arena, const Choice& cp,
                                          std::size_t index) {
    const Clause& c = (*cp.clauses)[index];
    auto [head, body] = program_.instantiate(c, store_);
    if (!store_.unify(head, cp.goal)) {
      store_.undo_to(cp.mark);
      return std::nullopt;
    }
    std::uint32_t list = cp.rest;
    for (std::size_t i = body.size(); i-- > 0;) list = push(arena, body[i], list);
    return prepend(arena, store_.take_pending(), list);
  }

  const Program& program_;
  Store& store_;
};

/// Detached copy of one solution: rendered bindings and residue.
struct Solution {
  std::vector<std::pair<std::string, std::string>> bindings;
  std::vector<std::string> residue;

  bool unconditional() const { return residue.empty(); }
};

struct SolveReport {
  std::vector<Solution> solutions;
  StreamEnd end = StreamEnd::exhausted;
};

/// Goals rendered with one shared variable numbering, in suspension order.
inline std::vector<std::string> render_residue(const Store& store,
                                               const std::vector<std::pair<std::string, TermRef>>& names = {}) {
  AvmWriter w(store);
  for (const auto& [n, v] : names) {
    if (store.is_var(v)) w.name_var(v, n);
  }
  return w.render_all(store.residue());
}

/// Snapshot of the live solution in `store` for the named query variables.
inline Solution snapshot(const Store& store,
                         const std::vector<std::pair<std::string, TermRef>>& vars) {
  AvmWriter w(store);
  for (const auto& [n, v] : vars) {
    if (store.is_var(v)) w.name_var(v, n);
  }
  std::vector<TermRef> terms;
  for (const auto& [n, v] : vars) terms.push_back(v);
  auto residue = store.residue();
  terms.insert(terms.end(), residue.begin(), residue.end());
  auto rendered = w.render_all(terms);
  Solution s;
  for (std::size_t i = 0; i < vars.size(); ++i) s.bindings.emplace_back(vars[i].first, rendered[i]);
  s.residue.assign(rendered.begin() + static_cast<std::ptrdiff_t>(vars.size()), rendered.end());
  return s;
}

/// Parses `query`, solves it in a fresh store and collects every solution.
inline SolveReport solve_text(const Program& program, std::string_view query,
                              const Limits& limits = {}, Observer* observer = nullptr) {
  Store store(program.sorts());
  store.set_observer(observer);
  Query q = parse_query(program, store, query);
  for (auto g : q.goals) {
    auto id = ProgramBuilder::goal_id(store, g);
    if (!id || !program.defined(*id))
      throw SolveError("call to undefined predicate " + (id ? id->str() : std::string("?")));
  }
  SolveReport report;
  report.end = Solver(program, store).solve(q.goals, limits, [&](Store& s) {
    report.solutions.push_back(snapshot(s, q.variables));
    return true;
  });
  return report;
}

}  // namespace lexcon
