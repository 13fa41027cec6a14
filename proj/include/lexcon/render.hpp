#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexcon/term.hpp"

namespace lexcon {

enum class Layout { compact, pretty };

/// avm-text renderer. Unbound variables get stable names (`_1`, `_2`, ... in
/// order of first occurrence, unless pre-named); AVMs, list cells and
/// structures reached more than once are printed once as `#n=...` and
/// referenced as `#n` afterwards. Features are printed in name order, so the
/// output is canonical for a given term graph.
class AvmWriter {
 public:
  explicit AvmWriter(const Store& store, Layout layout = Layout::compact)
      : store_(store), layout_(layout) {}

  /// Gives a variable a fixed display name (e.g. the query's source name).
  void name_var(TermRef var, std::string name) {
    names_[store_.deref(var).index] = std::move(name);
  }

  /// Renders several terms with one variable/tag numbering, so sharing
  /// between them stays visible.
  std::vector<std::string> render_all(const std::vector<TermRef>& terms) {
    for (auto t : terms) count(t);
    std::vector<std::string> out;
    for (auto t : terms) {
      std::string s;
      write(t, s, 0);
      out.push_back(std::move(s));
    }
    return out;
  }

  std::string render(TermRef t) { return render_all({t}).front(); }

 private:
  void count(TermRef t) {
    t = store_.deref(t);
    const Cell& c = store_.raw(t);
    if (std::holds_alternative<VarCell>(c) || std::holds_alternative<AtomCell>(c) ||
        std::holds_alternative<NilCell>(c))
      return;
    if (++refs_[t.index] > 1) return;
    if (const auto* a = std::get_if<AvmCell>(&c)) {
      for (const auto& f : a->features) count(f.value);
    } else if (const auto* k = std::get_if<ConsCell>(&c)) {
      count(k->head);
      count(k->tail);
    } else if (const auto* s = std::get_if<StructCell>(&c)) {
      for (auto arg : s->args) count(arg);
    }
  }

  bool shared(TermRef t) const {
    auto it = refs_.find(t.index);
    return it != refs_.end() && it->second > 1;
  }

  // Writes the `#n=` prefix, or `#n` and returns true if already printed.
  bool tag(TermRef t, std::string& out) {
    if (!shared(t)) return false;
    auto it = tags_.find(t.index);
    if (it != tags_.end()) {
      out += "#" + std::to_string(it->second);
      return true;
    }
    int n = static_cast<int>(tags_.size()) + 1;
    tags_.emplace(t.index, n);
    out += "#" + std::to_string(n) + "=";
    return false;
  }

  std::string var_name(TermRef t) {
    auto it = names_.find(t.index);
    if (it != names_.end()) return it->second;
    std::string n = "_" + std::to_string(++var_counter_);
    names_.emplace(t.index, n);
    return n;
  }

  void newline(std::string& out, int indent) const {
    out += '\n';
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
  }

  bool multiline(TermRef t) const {
    if (layout_ != Layout::pretty) return false;
    t = store_.deref(t);
    if (const auto* a = std::get_if<AvmCell>(&store_.raw(t))) return !a->features.empty();
    return false;
  }

  void write(TermRef t, std::string& out, int indent) {
    t = store_.deref(t);
    const Cell& c = store_.raw(t);
    switch (c.index()) {
      case 0: out += var_name(t); return;
      case 1: out += std::get<AtomCell>(c).name.str(); return;
      case 3: out += "⟨⟩"; return;
      default: break;
    }
    if (tag(t, out)) return;
    if (const auto* a = std::get_if<AvmCell>(&c)) {
      write_avm(*a, out, indent);
    } else if (std::holds_alternative<ConsCell>(c)) {
      write_list(t, out, indent);
    } else {
      const auto& s = std::get<StructCell>(c);
      out += s.functor.str();
      out += '(';
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        if (i) out += ", ";
        write(s.args[i], out, indent);
      }
      out += ')';
    }
  }

  void write_avm(const AvmCell& a, std::string& out, int indent) {
    out += '@';
    out += store_.sorts().name(a.sort).str();
    if (a.features.empty()) return;
    std::vector<Feature> fs = a.features;
    std::sort(fs.begin(), fs.end(),
              [](const Feature& x, const Feature& y) { return x.name.str() < y.name.str(); });
    out += '{';
    bool pretty = layout_ == Layout::pretty;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (i) out += pretty ? "," : ", ";
      if (pretty) newline(out, indent + 1);
      out += fs[i].name.str();
      out += ": ";
      write(fs[i].value, out, indent + 1);
    }
    if (pretty) newline(out, indent);
    out += '}';
  }

  void write_list(TermRef t, std::string& out, int indent) {
    std::vector<TermRef> items;
    TermRef tail = t;
    items.push_back(std::get<ConsCell>(store_.raw(t)).head);
    tail = store_.deref(std::get<ConsCell>(store_.raw(t)).tail);
    while (const auto* k = std::get_if<ConsCell>(&store_.raw(tail))) {
      if (shared(tail)) break;
      items.push_back(k->head);
      tail = store_.deref(k->tail);
    }
    bool split = std::any_of(items.begin(), items.end(),
                             [this](TermRef i) { return multiline(i); });
    out += "⟨";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      if (split) newline(out, indent + 1);
      write(items[i], out, indent + 1);
    }
    if (!std::holds_alternative<NilCell>(store_.raw(tail))) {
      out += " | ";
      write(tail, out, indent + 1);
    }
    if (split) newline(out, indent);
    out += "⟩";
  }

  const Store& store_;
  Layout layout_;
  std::unordered_map<std::uint32_t, int> refs_;
  std::unordered_map<std::uint32_t, int> tags_;
  std::unordered_map<std::uint32_t, std::string> names_;
  int var_counter_ = 0;
};

inline std::string render_avm(const Store& store, TermRef t, Layout layout = Layout::compact) {
  return AvmWriter(store, layout).render(t);
}

/// JSON form: {"var": n} | {"atom": s} | {"sort": s, "feats": {...}} |
/// proper lists as arrays, partial lists as {"list": [...], "tail": ...} |
/// {"functor": f, "args": [...]}. Shared nodes are expanded.
class JsonWriter {
 public:
  explicit JsonWriter(const Store& store) : store_(store) {}

  nlohmann::json operator()(TermRef t) {
    t = store_.deref(t);
    const Cell& c = store_.raw(t);
    switch (c.index()) {
      case 0: {
        auto [it, fresh] = vars_.try_emplace(t.index, static_cast<int>(vars_.size()) + 1);
        return {{"var", it->second}};
      }
      case 1: return {{"atom", std::get<AtomCell>(c).name.str()}};
      case 2: {
        const auto& a = std::get<AvmCell>(c);
        nlohmann::json feats = nlohmann::json::object();
        for (const auto& f : a.features) feats[f.name.str()] = (*this)(f.value);
        return {{"sort", store_.sorts().name(a.sort).str()}, {"feats", feats}};
      }
      case 3: return nlohmann::json::array();
      case 4: {
        nlohmann::json items = nlohmann::json::array();
        TermRef cur = t;
        while (const auto* k = std::get_if<ConsCell>(&store_.at(cur))) {
          items.push_back((*this)(k->head));
          cur = k->tail;
        }
        if (store_.is_nil(cur)) return items;
        return {{"list", items}, {"tail", (*this)(cur)}};
      }
      default: {
        const auto& s = std::get<StructCell>(c);
        nlohmann::json args = nlohmann::json::array();
        for (auto a : s.args) args.push_back((*this)(a));
        return {{"functor", s.functor.str()}, {"args", args}};
      }
    }
  }

 private:
  const Store& store_;
  std::unordered_map<std::uint32_t, int> vars_;
};

inline std::string render_json(const Store& store, TermRef t) {
  return JsonWriter(store)(t).dump();
}

enum class Format { avm_text, json };

inline std::string render(const Store& store, TermRef t, Format format) {
  return format == Format::json ? render_json(store, t) : render_avm(store, t);
}

}  // namespace lexcon
