#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexcon/error.hpp"
#include "lexcon/symbol.hpp"

namespace lexcon {

struct SortId {
  std::uint32_t value = 0;
  friend bool operator==(SortId, SortId) = default;
};

/// Single-inheritance sort tree rooted at `top`. Immutable once a program has
/// been loaded; a loaded table can be shared between stores and threads.
class SortTable {
 public:
  static constexpr SortId kTop{0};

  SortTable() {
    names_.emplace_back("top");
    parent_.push_back(kTop);
    depth_.push_back(0);
    index_.emplace(names_.back(), kTop);
  }

  /// Returns std::nullopt if `name` is already declared.
  std::optional<SortId> declare(Symbol name, SortId parent = kTop) {
    if (index_.contains(name)) return std::nullopt;
    SortId id{static_cast<std::uint32_t>(parent_.size())};
    names_.push_back(name);
    parent_.push_back(parent);
    depth_.push_back(depth_[parent.value] + 1);
    index_.emplace(name, id);
    return id;
  }

  std::optional<SortId> find(Symbol name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  SortId lookup(std::string_view name) const {
    auto id = find(Symbol(name));
    if (!id) throw ConfigError("undeclared sort '" + std::string(name) + "'");
    return *id;
  }

  bool contains(SortId s) const { return s.value < parent_.size(); }
  std::size_t size() const { return parent_.size(); }
  Symbol name(SortId s) const { return names_.at(s.value); }
  SortId parent(SortId s) const { return parent_.at(s.value); }

  /// True iff `sub` is `super` or one of its descendants.
  bool subsumed_by(SortId sub, SortId super) const {
    check(sub);
    check(super);
    while (depth_[sub.value] > depth_[super.value]) sub = parent_[sub.value];
    return sub == super;
  }

  /// Greatest lower bound. In a tree it exists only when one sort dominates
  /// the other.
  std::optional<SortId> meet(SortId a, SortId b) const {
    if (subsumed_by(a, b)) return a;
    if (subsumed_by(b, a)) return b;
    return std::nullopt;
  }

  std::optional<SortId> meet(std::string_view a, std::string_view b) const {
    return meet(lookup(a), lookup(b));
  }

 private:
  void check(SortId s) const {
    if (!contains(s)) throw ConfigError("sort id out of range");
  }

  std::vector<Symbol> names_;
  std::vector<SortId> parent_;
  std::vector<std::uint32_t> depth_;
  std::unordered_map<Symbol, SortId> index_;
};

}  // namespace lexcon
