#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "lexcon/error.hpp"
#include "lexcon/sort.hpp"
#include "lexcon/symbol.hpp"

namespace lexcon {

struct TermRef {
  std::uint32_t index = 0;
  friend bool operator==(TermRef, TermRef) = default;
  friend auto operator<=>(TermRef, TermRef) = default;
};

inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

struct VarCell {
  std::uint32_t binding = kNone;
  std::uint32_t suspensions = kNone;  // head of a SuspLink chain
  friend bool operator==(const VarCell&, const VarCell&) = default;
};

struct AtomCell {
  Symbol name;
  friend bool operator==(const AtomCell&, const AtomCell&) = default;
};

struct Feature {
  Symbol name;
  TermRef value;
  friend bool operator==(const Feature&, const Feature&) = default;
};

struct AvmCell {
  SortId sort;
  std::vector<Feature> features;  // sorted by symbol id
  std::uint32_t forward = kNone;  // set when merged into another AVM
  friend bool operator==(const AvmCell&, const AvmCell&) = default;
};

struct NilCell {
  friend bool operator==(const NilCell&, const NilCell&) = default;
};

struct ConsCell {
  TermRef head;
  TermRef tail;
  friend bool operator==(const ConsCell&, const ConsCell&) = default;
};

/// Predicate application (goals and clause heads).
struct StructCell {
  Symbol functor;
  std::vector<TermRef> args;
  friend bool operator==(const StructCell&, const StructCell&) = default;
};

using Cell = std::variant<VarCell, AtomCell, AvmCell, NilCell, ConsCell, StructCell>;

enum class ArgMode { dash, question };

/// Delay condition for one predicate. A goal is blocked iff some pattern has
/// all of its dash-marked arguments unbound.
struct BlockSpec {
  Symbol predicate;
  std::size_t arity = 0;
  std::vector<std::vector<ArgMode>> patterns;
  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

struct SuspendedGoal {
  TermRef goal;
  const BlockSpec* spec = nullptr;
  bool woken = false;
  friend bool operator==(const SuspendedGoal&, const SuspendedGoal&) = default;
};

class Store;

/// Event hooks for tracing and instrumentation. Every method has an empty
/// default.
class Observer {
 public:
  virtual ~Observer() = default;
  virtual void on_call(const Store&, TermRef /*goal*/, std::size_t /*depth*/) {}
  /// A goal that passed its block check is about to be matched against clauses.
  virtual void on_resolve(const Store&, TermRef /*goal*/) {}
  virtual void on_suspend(const Store&, TermRef /*goal*/,
                          const std::vector<TermRef>& /*vars*/) {}
  /// Only reported for variables that carry suspended goals.
  virtual void on_bind(const Store&, TermRef /*var*/, TermRef /*value*/) {}
  virtual void on_wake(const Store&, TermRef /*goal*/) {}
  virtual void on_solution(const Store&) {}
};

struct Mark {
  std::size_t trail = 0;
  std::size_t cells = 0;
  std::size_t goals = 0;
  std::size_t links = 0;
  std::size_t pending = 0;
  friend bool operator==(const Mark&, const Mark&) = default;
};

/// Binding environment. Owns every term cell, the trail used for
/// backtracking, and the suspension bookkeeping for delayed goals.
class Store {
 public:
  explicit Store(const SortTable& sorts) : sorts_(&sorts) {}

  const SortTable& sorts() const { return *sorts_; }

  void set_observer(Observer* observer) { observer_ = observer; }
  Observer* observer() const { return observer_; }
  void set_occurs_check(bool on) { occurs_check_ = on; }
  bool occurs_check() const { return occurs_check_; }

  // -- construction --------------------------------------------------------

  TermRef var() { return push(VarCell{}); }
  TermRef atom(Symbol name) { return push(AtomCell{name}); }
  TermRef atom(std::string_view name) { return atom(Symbol(name)); }
  TermRef nil() { return push(NilCell{}); }
  TermRef cons(TermRef head, TermRef tail) { return push(ConsCell{head, tail}); }

  TermRef list(std::span<const TermRef> items, std::optional<TermRef> tail = {}) {
    TermRef result = tail ? *tail : nil();
    for (auto it = items.rbegin(); it != items.rend(); ++it) result = cons(*it, result);
    return result;
  }
  TermRef list(std::initializer_list<TermRef> items, std::optional<TermRef> tail = {}) {
    return list(std::span<const TermRef>(items.begin(), items.size()), tail);
  }

  TermRef fresh_list(std::size_t length) {
    std::vector<TermRef> items;
    for (std::size_t i = 0; i < length; ++i) items.push_back(var());
    return list(items);
  }

  TermRef avm(SortId sort, std::vector<Feature> features = {}) {
    std::sort(features.begin(), features.end(),
              [](const Feature& a, const Feature& b) { return a.name < b.name; });
    for (std::size_t i = 1; i < features.size(); ++i) {
      if (features[i].name == features[i - 1].name)
        throw Error("duplicate feature '" + features[i].name.str() + "'");
    }
    return push(AvmCell{sort, std::move(features), kNone});
  }

  TermRef avm(std::string_view sort,
              std::initializer_list<std::pair<std::string_view, TermRef>> features = {}) {
    std::vector<Feature> fs;
    for (const auto& [name, value] : features) fs.push_back({Symbol(name), value});
    return avm(sorts_->lookup(sort), std::move(fs));
  }

  TermRef structure(Symbol functor, std::vector<TermRef> args) {
    if (args.empty()) return atom(functor);
    return push(StructCell{functor, std::move(args)});
  }
  TermRef structure(std::string_view functor, std::vector<TermRef> args) {
    return structure(Symbol(functor), std::move(args));
  }

  // -- inspection ----------------------------------------------------------

  std::size_t size() const { return cells_.size(); }

  TermRef deref(TermRef t) const {
    for (;;) {
      const Cell& c = cells_[t.index];
      if (const auto* v = std::get_if<VarCell>(&c); v && v->binding != kNone) {
        t.index = v->binding;
      } else if (const auto* a = std::get_if<AvmCell>(&c); a && a->forward != kNone) {
        t.index = a->forward;
      } else {
        return t;
      }
    }
  }

  /// Cell of the dereferenced term.
  const Cell& at(TermRef t) const { return cells_[deref(t).index]; }
  /// Raw cell, no dereferencing.
  const Cell& raw(TermRef t) const { return cells_[t.index]; }

  bool is_var(TermRef t) const { return std::holds_alternative<VarCell>(at(t)); }
  bool is_nil(TermRef t) const { return std::holds_alternative<NilCell>(at(t)); }
  bool is_cons(TermRef t) const { return std::holds_alternative<ConsCell>(at(t)); }
  bool is_avm(TermRef t) const { return std::holds_alternative<AvmCell>(at(t)); }
  bool identical(TermRef a, TermRef b) const { return deref(a) == deref(b); }

  std::optional<Symbol> atom_name(TermRef t) const {
    if (const auto* a = std::get_if<AtomCell>(&at(t))) return a->name;
    return std::nullopt;
  }

  std::optional<SortId> sort_of(TermRef t) const {
    if (const auto* a = std::get_if<AvmCell>(&at(t))) return a->sort;
    return std::nullopt;
  }

  bool has_sort(TermRef t, std::string_view sort) const {
    auto s = sort_of(t);
    return s && sorts_->subsumed_by(*s, sorts_->lookup(sort));
  }

  std::optional<TermRef> feature(TermRef t, Symbol name) const {
    const auto* a = std::get_if<AvmCell>(&at(t));
    if (!a) return std::nullopt;
    for (const auto& f : a->features) {
      if (f.name == name) return f.value;
    }
    return std::nullopt;
  }

  /// Follows a feature path such as {"sem", "nuc", "qfsoa"}.
  std::optional<TermRef> path(TermRef t, std::initializer_list<std::string_view> names) const {
    std::optional<TermRef> cur = t;
    for (auto n : names) {
      cur = feature(*cur, Symbol(n));
      if (!cur) return std::nullopt;
    }
    return cur;
  }

  /// Elements of a nil-terminated list; nullopt for partial or non-lists.
  std::optional<std::vector<TermRef>> list_items(TermRef t) const {
    std::vector<TermRef> out;
    for (;;) {
      const Cell& c = at(t);
      if (std::holds_alternative<NilCell>(c)) return out;
      const auto* cons = std::get_if<ConsCell>(&c);
      if (!cons) return std::nullopt;
      out.push_back(cons->head);
      t = cons->tail;
    }
  }

  // -- unification ---------------------------------------------------------

  /// On failure the store is restored to its state at entry.
  bool unify(TermRef a, TermRef b) {
    Mark entry = mark();
    std::vector<std::pair<TermRef, TermRef>> work{{a, b}};
    while (!work.empty()) {
      auto [x, y] = work.back();
      work.pop_back();
      if (!unify_step(x, y, work)) {
        undo_to(entry);
        return false;
      }
    }
    return true;
  }

  /// Fresh variant of `t`: unbound variables renamed consistently; sharing
  /// kept. Atoms and nil are reused since they never change.
  TermRef copy_term(TermRef t) {
    std::unordered_map<std::uint32_t, TermRef> memo;
    return copy_rec(t, memo);
  }

  /// Copies a term from another store whose cells in [base, base+memo.size())
  /// hold the source. `memo` must be filled with kNone.
  TermRef import(const Store& from, TermRef t, std::uint32_t base,
                 std::span<std::uint32_t> memo) {
    t = from.deref(t);
    std::uint32_t slot = t.index - base;
    bool in_range = t.index >= base && slot < memo.size();
    if (in_range && memo[slot] != kNone) return TermRef{memo[slot]};
    TermRef out;
    const Cell& c = from.cells_[t.index];
    switch (c.index()) {
      case 0: out = var(); break;
      case 1: out = atom(std::get<AtomCell>(c).name); break;
      case 2: {
        const auto& a = std::get<AvmCell>(c);
        out = push(AvmCell{a.sort, {}, kNone});
        std::vector<Feature> fs;
        fs.reserve(a.features.size());
        if (in_range) memo[slot] = out.index;
        for (const auto& f : a.features) fs.push_back({f.name, import(from, f.value, base, memo)});
        std::get<AvmCell>(cells_[out.index]).features = std::move(fs);
        return out;
      }
      case 3: out = nil(); break;
      case 4: {
        const auto& k = std::get<ConsCell>(c);
        TermRef h = import(from, k.head, base, memo);
        TermRef tl = import(from, k.tail, base, memo);
        out = cons(h, tl);
        break;
      }
      default: {
        const auto& s = std::get<StructCell>(c);
        std::vector<TermRef> args;
        args.reserve(s.args.size());
        for (auto arg : s.args) args.push_back(import(from, arg, base, memo));
        out = push(StructCell{s.functor, std::move(args)});
        break;
      }
    }
    if (in_range) memo[slot] = out.index;
    return out;
  }

  // -- backtracking --------------------------------------------------------

  Mark mark() const {
    return {trail_.size(), cells_.size(), goals_.size(), links_.size(), pending_.size()};
  }

  void undo_to(const Mark& m) {
    while (trail_.size() > m.trail) {
      std::visit([this](auto& entry) { restore(entry); }, trail_.back());
      trail_.pop_back();
    }
    cells_.resize(std::min(cells_.size(), m.cells), Cell{VarCell{}});
    goals_.resize(std::min(goals_.size(), m.goals));
    links_.resize(std::min(links_.size(), m.links));
    pending_.resize(std::min(pending_.size(), m.pending));
  }

  /// Full structural comparison; used to check that failed operations leave
  /// no trace.
  bool same_state(const Store& other) const {
    return cells_ == other.cells_ && goals_ == other.goals_ && links_ == other.links_ &&
           pending_ == other.pending_ && trail_.size() == other.trail_.size();
  }

  // -- suspension ----------------------------------------------------------

  bool is_blocked(TermRef goal, const BlockSpec& spec) const {
    const auto* s = std::get_if<StructCell>(&at(goal));
    if (!s) return false;
    for (const auto& pattern : spec.patterns) {
      bool all_unbound = true;
      bool any_dash = false;
      for (std::size_t i = 0; i < pattern.size() && i < s->args.size(); ++i) {
        if (pattern[i] != ArgMode::dash) continue;
        any_dash = true;
        if (!is_var(s->args[i])) {
          all_unbound = false;
          break;
        }
      }
      if (any_dash && all_unbound) return true;
    }
    return false;
  }

  /// Unbound variables that keep `goal` blocked.
  std::vector<TermRef> blocking_vars(TermRef goal, const BlockSpec& spec) const {
    std::vector<TermRef> vars;
    const auto* s = std::get_if<StructCell>(&at(goal));
    if (!s) return vars;
    for (const auto& pattern : spec.patterns) {
      std::vector<TermRef> these;
      bool blocking = true;
      for (std::size_t i = 0; i < pattern.size() && i < s->args.size(); ++i) {
        if (pattern[i] != ArgMode::dash) continue;
        TermRef a = deref(s->args[i]);
        if (!is_var(a)) {
          blocking = false;
          break;
        }
        these.push_back(a);
      }
      if (!blocking) continue;
      for (auto v : these) {
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
      }
    }
    return vars;
  }

  /// Parks `goal` on its blocking variables. Returns the suspension id.
  std::uint32_t suspend(TermRef goal, const BlockSpec& spec) {
    auto id = static_cast<std::uint32_t>(goals_.size());
    goals_.push_back({goal, &spec, false});
    auto vars = blocking_vars(goal, spec);
    for (auto v : vars) attach(v, id);
    if (observer_) observer_->on_suspend(*this, goal, vars);
    return id;
  }

  const std::vector<SuspendedGoal>& suspended() const { return goals_; }

  /// Goals suspended and never woken, in suspension order.
  std::vector<TermRef> residue() const {
    std::vector<TermRef> out;
    for (const auto& g : goals_) {
      if (!g.woken) out.push_back(g.goal);
    }
    return out;
  }

  bool has_pending() const { return !pending_.empty(); }

  /// Removes and returns woken goals in FIFO order. Trailed, so backtracking
  /// past this call puts them back.
  std::vector<TermRef> take_pending() {
    std::vector<TermRef> out;
    if (pending_.empty()) return out;
    for (auto id : pending_) out.push_back(goals_[id].goal);
    trail_.emplace_back(PendingUndo{pending_});
    pending_.clear();
    return out;
  }

 private:
  struct SuspLink {
    std::uint32_t goal;
    std::uint32_t next;
    friend bool operator==(const SuspLink&, const SuspLink&) = default;
  };
  struct CellUndo {
    std::uint32_t index;
    Cell old;
  };
  struct WokenUndo {
    std::uint32_t goal;
  };
  struct PendingUndo {
    std::vector<std::uint32_t> old;
  };
  using TrailEntry = std::variant<CellUndo, WokenUndo, PendingUndo>;

  TermRef push(Cell c) {
    cells_.push_back(std::move(c));
    return TermRef{static_cast<std::uint32_t>(cells_.size() - 1)};
  }

  void write(std::uint32_t index, Cell c) {
    trail_.emplace_back(CellUndo{index, std::move(cells_[index])});
    cells_[index] = std::move(c);
  }

  void restore(CellUndo& e) {
    if (e.index < cells_.size()) cells_[e.index] = std::move(e.old);
  }
  void restore(WokenUndo& e) {
    if (e.goal < goals_.size()) goals_[e.goal].woken = false;
  }
  void restore(PendingUndo& e) { pending_ = std::move(e.old); }

  void attach(TermRef var, std::uint32_t goal) {
    auto v = std::get<VarCell>(cells_[var.index]);
    links_.push_back({goal, v.suspensions});
    v.suspensions = static_cast<std::uint32_t>(links_.size() - 1);
    write(var.index, v);
  }

  bool occurs(TermRef var, TermRef t) const {
    std::vector<TermRef> stack{t};
    std::vector<std::uint32_t> seen;
    while (!stack.empty()) {
      TermRef cur = deref(stack.back());
      stack.pop_back();
      if (cur == var) return true;
      const Cell& c = cells_[cur.index];
      if (const auto* a = std::get_if<AvmCell>(&c)) {
        if (std::find(seen.begin(), seen.end(), cur.index) != seen.end()) continue;
        seen.push_back(cur.index);
        for (const auto& f : a->features) stack.push_back(f.value);
      } else if (const auto* k = std::get_if<ConsCell>(&c)) {
        stack.push_back(k->head);
        stack.push_back(k->tail);
      } else if (const auto* s = std::get_if<StructCell>(&c)) {
        for (auto arg : s->args) stack.push_back(arg);
      }
    }
    return false;
  }

  void bind(TermRef var, TermRef value) {
    auto v = std::get<VarCell>(cells_[var.index]);
    std::uint32_t chain = v.suspensions;
    v.binding = value.index;
    write(var.index, v);
    if (chain == kNone) return;
    if (observer_) observer_->on_bind(*this, var, value);
    bool to_var = is_var(value);
    // Collect first: the chain is newest-first, wake order must be FIFO.
    std::vector<std::uint32_t> ids;
    for (auto l = chain; l != kNone; l = links_[l].next) ids.push_back(links_[l].goal);
    std::reverse(ids.begin(), ids.end());
    for (auto id : ids) {
      if (goals_[id].woken) continue;
      if (to_var) {
        attach(deref(value), id);
      } else if (!is_blocked(goals_[id].goal, *goals_[id].spec)) {
        goals_[id].woken = true;
        trail_.emplace_back(WokenUndo{id});
        pending_.push_back(id);
        if (observer_) observer_->on_wake(*this, goals_[id].goal);
      }
    }
  }

  bool unify_step(TermRef x, TermRef y, std::vector<std::pair<TermRef, TermRef>>& work) {
    x = deref(x);
    y = deref(y);
    if (x == y) return true;
    const Cell& cx = cells_[x.index];
    const Cell& cy = cells_[y.index];
    bool xv = std::holds_alternative<VarCell>(cx);
    bool yv = std::holds_alternative<VarCell>(cy);
    if (xv && yv) {
      // Younger variable points at older, keeping chains short.
      if (x.index < y.index) std::swap(x, y);
      bind(x, y);
      return true;
    }
    if (xv || yv) {
      if (yv) std::swap(x, y);
      if (occurs_check_ && occurs(x, y)) return false;
      bind(x, y);
      return true;
    }
    if (cx.index() != cy.index()) return false;
    switch (cx.index()) {
      case 1:
        return std::get<AtomCell>(cx).name == std::get<AtomCell>(cy).name;
      case 3:
        return true;
      case 4: {
        const auto& a = std::get<ConsCell>(cx);
        const auto& b = std::get<ConsCell>(cy);
        work.push_back({a.tail, b.tail});
        work.push_back({a.head, b.head});
        return true;
      }
      case 5: {
        const auto& a = std::get<StructCell>(cx);
        const auto& b = std::get<StructCell>(cy);
        if (a.functor != b.functor || a.args.size() != b.args.size()) return false;
        for (std::size_t i = a.args.size(); i-- > 0;) work.push_back({a.args[i], b.args[i]});
        return true;
      }
      case 2:
        return merge_avms(x, y, work);
      default:
        return false;
    }
  }

  bool merge_avms(TermRef x, TermRef y, std::vector<std::pair<TermRef, TermRef>>& work) {
    if (x.index > y.index) std::swap(x, y);  // survivor is the older node
    const auto& a = std::get<AvmCell>(cells_[x.index]);
    const auto& b = std::get<AvmCell>(cells_[y.index]);
    auto sort = sorts_->meet(a.sort, b.sort);
    if (!sort) return false;
    AvmCell merged{*sort, {}, kNone};
    merged.features.reserve(a.features.size() + b.features.size());
    std::size_t i = 0, j = 0;
    std::vector<std::pair<TermRef, TermRef>> shared;
    while (i < a.features.size() || j < b.features.size()) {
      if (j == b.features.size() ||
          (i < a.features.size() && a.features[i].name < b.features[j].name)) {
        merged.features.push_back(a.features[i++]);
      } else if (i == a.features.size() || b.features[j].name < a.features[i].name) {
        merged.features.push_back(b.features[j++]);
      } else {
        merged.features.push_back(a.features[i]);
        shared.push_back({a.features[i].value, b.features[j].value});
        ++i;
        ++j;
      }
    }
    AvmCell forwarded = b;
    forwarded.forward = x.index;
    write(x.index, std::move(merged));
    write(y.index, std::move(forwarded));
    for (auto it = shared.rbegin(); it != shared.rend(); ++it) work.push_back(*it);
    return true;
  }

  TermRef copy_rec(TermRef t, std::unordered_map<std::uint32_t, TermRef>& memo) {
    t = deref(t);
    if (auto it = memo.find(t.index); it != memo.end()) return it->second;
    const Cell c = cells_[t.index];
    TermRef out;
    switch (c.index()) {
      case 0: out = var(); break;
      case 1:
      case 3: out = t; break;
      case 2: {
        const auto& a = std::get<AvmCell>(c);
        out = push(AvmCell{a.sort, {}, kNone});
        memo.emplace(t.index, out);
        std::vector<Feature> fs;
        for (const auto& f : a.features) fs.push_back({f.name, copy_rec(f.value, memo)});
        std::get<AvmCell>(cells_[out.index]).features = std::move(fs);
        return out;
      }
      case 4: {
        const auto& k = std::get<ConsCell>(c);
        TermRef h = copy_rec(k.head, memo);
        TermRef tl = copy_rec(k.tail, memo);
        out = cons(h, tl);
        break;
      }
      default: {
        const auto& s = std::get<StructCell>(c);
        std::vector<TermRef> args;
        for (auto arg : s.args) args.push_back(copy_rec(arg, memo));
        out = push(StructCell{s.functor, std::move(args)});
        break;
      }
    }
    memo.emplace(t.index, out);
    return out;
  }

  const SortTable* sorts_;
  Observer* observer_ = nullptr;
  bool occurs_check_ = true;
  std::vector<Cell> cells_;
  std::vector<TrailEntry> trail_;
  std::vector<SuspendedGoal> goals_;
  std::vector<SuspLink> links_;
  std::vector<std::uint32_t> pending_;
};

}  // namespace lexcon
