#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace lexcon {

/// Interned name. Atoms, functors, feature names and sort names all share one
/// process-wide table so that terms from different stores compare cheaply.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view name);

  std::uint32_t id() const { return id_; }
  const std::string& str() const;

  friend bool operator==(Symbol, Symbol) = default;
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

 private:
  std::uint32_t id_ = 0;
};

namespace detail {

class SymbolTable {
 public:
  static SymbolTable& instance() {
    static SymbolTable table;
    return table;
  }

  std::uint32_t intern(std::string_view name) {
    std::lock_guard lock(mutex_);
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  const std::string& name(std::uint32_t id) {
    std::lock_guard lock(mutex_);
    return names_[id];
  }

 private:
  SymbolTable() { names_.emplace_back(""); index_.emplace("", 0); }

  std::mutex mutex_;
  std::deque<std::string> names_;  // deque: references stay valid on growth
  std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace detail

inline Symbol::Symbol(std::string_view name)
    : id_(detail::SymbolTable::instance().intern(name)) {}

inline const std::string& Symbol::str() const {
  return detail::SymbolTable::instance().name(id_);
}

}  // namespace lexcon

template <>
struct std::hash<lexcon::Symbol> {
  std::size_t operator()(lexcon::Symbol s) const noexcept { return s.id(); }
};
