#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexcon/grammar.hpp"
#include "lexcon/render.hpp"
#include "lexcon/solver.hpp"

namespace lexcon {

struct TokenSeq {
  std::vector<std::string> tokens;
  bool complementizer = false;  // a leading `dat` was stripped
};

/// Lowercases, splits on whitespace, drops a leading `dat` and joins
/// multi-word lexicon items (written with '_') by longest match.
inline TokenSeq tokenize(std::string_view sentence, const Lexicon& lexicon) {
  std::string lower(sentence);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::istringstream in(lower);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  TokenSeq seq;
  std::size_t i = 0;
  if (!words.empty() && words[0] == "dat") {
    seq.complementizer = true;
    i = 1;
  }
  std::size_t longest = lexicon.max_words();
  while (i < words.size()) {
    std::size_t take = 1;
    for (std::size_t len = std::min(longest, words.size() - i); len > 1; --len) {
      std::string joined = words[i];
      for (std::size_t k = 1; k < len; ++k) joined += "_" + words[i + k];
      if (lexicon.known(joined)) {
        take = len;
        break;
      }
    }
    std::string tok = words[i];
    for (std::size_t k = 1; k < take; ++k) tok += "_" + words[i + k];
    seq.tokens.push_back(std::move(tok));
    i += take;
  }
  return seq;
}

struct ParseConfig {
  Limits limits;
  /// Upper bound on the head's subcat list length; the effective bound is
  /// also capped at n-1 for n tokens.
  std::size_t max_sc_length = std::numeric_limits<std::size_t>::max();
  Observer* observer = nullptr;
};

enum class ParseStatus { ok, empty, unknown_tokens, no_finite_verb, limit_exceeded };

inline const char* to_string(ParseStatus s) {
  switch (s) {
    case ParseStatus::ok: return "ok";
    case ParseStatus::empty: return "empty input";
    case ParseStatus::unknown_tokens: return "unknown tokens";
    case ParseStatus::no_finite_verb: return "no finite verb";
    case ParseStatus::limit_exceeded: return "limit exceeded";
  }
  return "?";
}

/// One member of the head's subcat list and the token realising it.
struct ScSlot {
  std::size_t position = 0;
  std::size_t token = 0;
  std::string word;
  bool right = false;
};

/// Verb whose own subcat list introduced an adjunct (narrow scope when it is
/// an embedded verb, wide when it is the head).
struct AdjunctSite {
  std::string adverbial;
  std::string verb;
  friend bool operator==(const AdjunctSite&, const AdjunctSite&) = default;
};

struct Derivation {
  std::size_t head_index = 0;
  std::string head_verb;  // infinitive of the head
  std::vector<ScSlot> assignment;
  std::string sign;       // root sign, pretty avm-text
  std::string sem;        // canonical root semantics
  std::vector<AdjunctSite> sites;
  std::vector<std::string> residue;
};

struct Reading {
  std::string sem;
  std::vector<std::size_t> derivations;
};

struct ParseResult {
  TokenSeq input;
  ParseStatus status = ParseStatus::ok;
  std::vector<std::string> unknown;
  std::vector<Derivation> derivations;
  std::vector<Reading> readings;

  bool error() const { return status != ParseStatus::ok; }
  bool grammatical() const { return status == ParseStatus::ok && !derivations.empty(); }
};

/// Live view of a finished derivation; valid only inside the callback.
struct DerivationView {
  const Store& store;
  TermRef sign;
  std::vector<TermRef> chain;  // head first, then each verbal complement
  std::size_t head_index;
  std::string head_verb;
  const std::vector<std::string>& tokens;
};

inline std::optional<std::string> lex_of(const Store& store, TermRef sign) {
  auto lex = store.feature(sign, Symbol("lex"));
  if (!lex) return std::nullopt;
  auto name = store.atom_name(*lex);
  if (!name) return std::nullopt;
  return name->str();
}

inline bool dir_right(const Store& store, TermRef sign) {
  auto dir = store.feature(sign, Symbol("dir"));
  if (!dir) return false;
  auto name = store.atom_name(*dir);
  return name && *name == Symbol("right");
}

/// First right-directed member of a sign's subcat list: its verbal
/// complement, if any.
inline std::optional<TermRef> verbal_complement(const Store& store, TermRef sign) {
  auto sc = store.feature(sign, Symbol("sc"));
  if (!sc) return std::nullopt;
  for (TermRef t = *sc;;) {
    const auto* cell = std::get_if<ConsCell>(&store.at(t));
    if (!cell) return std::nullopt;
    if (dir_right(store, cell->head)) return cell->head;
    t = cell->tail;
  }
}

/// Surface string of a verb cluster: the verb followed by the cluster of its
/// verbal complement. Inherited complements are not repeated.
inline std::optional<std::vector<std::string>> cluster_expand(const Store& store, TermRef verb) {
  std::vector<std::string> words;
  std::optional<TermRef> cur = verb;
  while (cur) {
    auto lex = lex_of(store, *cur);
    if (!lex) return std::nullopt;
    words.push_back(*lex);
    cur = verbal_complement(store, *cur);
  }
  return words;
}

/// Checks a solved head sign against the sentence: left of the head, the
/// left-directed subcat members in reverse list order (least oblique
/// leftmost); right of it, the verb cluster, which must account for every
/// right-directed member.
inline std::optional<std::vector<ScSlot>> surface_match(const Store& store, TermRef sign,
                                                        std::size_t head_index,
                                                        const std::vector<std::string>& tokens) {
  if (head_index >= tokens.size()) return std::nullopt;
  auto sc = store.feature(sign, Symbol("sc"));
  if (!sc) return std::nullopt;
  auto items = store.list_items(*sc);
  if (!items) return std::nullopt;
  auto head_lex = lex_of(store, sign);
  if (!head_lex || *head_lex != tokens[head_index]) return std::nullopt;

  std::vector<ScSlot> slots(items->size());
  std::vector<std::size_t> left, right;
  for (std::size_t p = 0; p < items->size(); ++p) {
    slots[p].position = p;
    (dir_right(store, (*items)[p]) ? right : left).push_back(p);
  }
  if (left.size() != head_index) return std::nullopt;
  for (std::size_t i = 0; i < left.size(); ++i) {
    std::size_t p = left[left.size() - 1 - i];
    auto lex = lex_of(store, (*items)[p]);
    if (!lex || *lex != tokens[i]) return std::nullopt;
    slots[p].token = i;
    slots[p].word = *lex;
  }
  auto cluster = cluster_expand(store, sign);
  if (!cluster) return std::nullopt;
  std::size_t tail = tokens.size() - head_index - 1;
  if (cluster->size() != tail + 1 || right.size() != tail) return std::nullopt;
  for (std::size_t j = 0; j < tail; ++j) {
    if ((*cluster)[j + 1] != tokens[head_index + 1 + j]) return std::nullopt;
    auto lex = lex_of(store, (*items)[right[j]]);
    if (!lex || *lex != (*cluster)[j + 1]) return std::nullopt;
    slots[right[j]].token = head_index + 1 + j;
    slots[right[j]].word = *lex;
    slots[right[j]].right = true;
  }
  return slots;
}

/// Head-driven parser. For every finite head and every subcat length k it
/// hands the head's lexical_entry goal a skeleton of k fresh members, so the
/// delayed constraints are evaluated against a hypothesised list. Each
/// verbal complement is then constrained by its own nonfinite entry, the
/// remaining members by the dependents' entries, and the result is checked
/// with surface_match.
class ChartlessParser {
 public:
  using Callback = std::function<void(const DerivationView&)>;

  ChartlessParser(const Grammar& grammar, ParseConfig config)
      : grammar_(grammar), config_(config) {}

  /// Calls `on_derivation` for every residue-free, fully matched derivation.
  ParseStatus parse_each(const std::vector<std::string>& tokens, const Callback& on_derivation) {
    if (tokens.empty()) return ParseStatus::empty;
    truncated_ = false;
    const std::size_t n = tokens.size();
    const std::size_t kmax = std::min(n - 1, config_.max_sc_length);
    for (std::size_t h = 0; h < n; ++h) {
      for (const LexiconEntry* verb : grammar_.lexicon().finite_verbs(tokens[h])) {
        for (std::size_t k = 0; k <= kmax; ++k) {
          Store store(grammar_.program().sorts());
          store.set_observer(config_.observer);
          Solver solver(grammar_.program(), store);
          TermRef sign = store.avm(store.sorts().lookup("finite"),
                                   {{Symbol("sc"), store.fresh_list(k)}, {Symbol("slash"), store.nil()}});
          TermRef goal = entry_goal(store, verb->surface, "finite", sign);
          Run run{store, solver, tokens, h, verb->surface, sign, on_derivation};
          note(solver.solve(goal, config_.limits, [&](Store& s) {
            if (!s.residue().empty()) return true;
            extend_chain(run, {sign}, h + 1);
            return true;
          }));
        }
      }
    }
    return truncated_ ? ParseStatus::limit_exceeded : ParseStatus::ok;
  }

 private:
  struct Run {
    Store& store;
    Solver& solver;
    const std::vector<std::string>& tokens;
    std::size_t head;
    std::string head_verb;
    TermRef sign;
    const Callback& on_derivation;
  };

  static TermRef entry_goal(Store& store, const std::string& word, const char* form, TermRef sign) {
    return store.structure("lexical_entry", {store.atom(word), store.atom(form), sign});
  }

  void note(StreamEnd end) {
    if (end == StreamEnd::truncated) truncated_ = true;
  }

  // Realises the verbal complement of chain.back() as the token at `next`.
  void extend_chain(Run& run, std::vector<TermRef> chain, std::size_t next) {
    auto complement = verbal_complement(run.store, chain.back());
    if (next == run.tokens.size()) {
      if (!complement) finish(run, chain);
      return;
    }
    if (!complement) return;
    const std::string& word = run.tokens[next];
    if (!grammar_.lexicon().verb(word)) return;
    // Nothing in a verb cluster binds a gap, so complements must not carry one.
    TermRef goals[] = {entry_goal(run.store, word, "nonfinite", *complement),
                       run.store.structure("=", {*complement, run.store.avm(run.store.sorts().lookup("sign"),
                                                                            {{Symbol("slash"), run.store.nil()}})})};
    chain.push_back(*complement);
    note(run.solver.solve(goals, config_.limits, [&](Store&) {
      extend_chain(run, chain, next + 1);
      return true;
    }));
  }

  void finish(Run& run, const std::vector<TermRef>& chain) {
    Store& store = run.store;
    auto items = store.list_items(*store.feature(run.sign, Symbol("sc")));
    if (!items) return;
    std::vector<TermRef> left;
    std::size_t right = 0;
    for (auto item : *items) {
      if (!dir_right(store, item)) {
        left.push_back(item);
        continue;
      }
      // Right-directed members must be exactly the cluster, in order.
      if (right + 1 >= chain.size() || !store.identical(item, chain[right + 1])) return;
      ++right;
    }
    if (right + 1 != chain.size() || left.size() != run.head) return;
    std::vector<TermRef> goals;
    for (std::size_t i = 0; i < left.size(); ++i) {
      goals.push_back(store.structure(
          "dependent", {store.atom(run.tokens[i]), left[left.size() - 1 - i]}));
    }
    note(run.solver.solve(goals, config_.limits, [&](Store& s) {
      if (!s.residue().empty()) return true;
      if (!surface_match(s, run.sign, run.head, run.tokens)) return true;
      run.on_derivation(DerivationView{s, run.sign, chain, run.head, run.head_verb, run.tokens});
      return true;
    }));
  }

  const Grammar& grammar_;
  ParseConfig config_;
  bool truncated_ = false;
};

/// Verb on the chain whose own subcat list carries each adverbial; the
/// deepest such verb is the one that introduced it.
inline std::vector<AdjunctSite> adjunct_sites(const DerivationView& d) {
  std::vector<AdjunctSite> sites;
  const Store& store = d.store;
  auto items = store.list_items(*store.feature(d.sign, Symbol("sc")));
  for (auto item : *items) {
    if (!store.has_sort(item, "adverbial")) continue;
    std::string owner;
    for (auto verb : d.chain) {
      auto sc = store.list_items(*store.feature(verb, Symbol("sc")));
      if (sc && std::any_of(sc->begin(), sc->end(),
                            [&](TermRef x) { return store.identical(x, item); })) {
        owner = lex_of(store, verb).value_or("?");
      }
    }
    sites.push_back({lex_of(store, item).value_or("?"), owner});
  }
  return sites;
}

inline std::string canonical_sem(const Store& store, TermRef sign) {
  auto sem = store.feature(sign, Symbol("sem"));
  return sem ? render_avm(store, *sem) : std::string("_");
}

inline Derivation snapshot(const DerivationView& d) {
  Derivation out;
  out.head_index = d.head_index;
  out.head_verb = d.head_verb;
  out.assignment = *surface_match(d.store, d.sign, d.head_index, d.tokens);
  out.sign = render_avm(d.store, d.sign, Layout::pretty);
  out.sem = canonical_sem(d.store, d.sign);
  out.sites = adjunct_sites(d);
  out.residue = render_residue(d.store);
  return out;
}

/// Groups derivations by canonical semantics, in order of first appearance.
inline std::vector<Reading> readings(const std::vector<Derivation>& derivations) {
  std::vector<Reading> out;
  for (std::size_t i = 0; i < derivations.size(); ++i) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Reading& r) { return r.sem == derivations[i].sem; });
    if (it == out.end()) {
      out.push_back({derivations[i].sem, {i}});
    } else {
      it->derivations.push_back(i);
    }
  }
  return out;
}

inline ParseResult parse(const Grammar& grammar, const TokenSeq& input,
                         const ParseConfig& config = {}) {
  ParseResult result;
  result.input = input;
  if (input.tokens.empty()) {
    result.status = ParseStatus::empty;
    return result;
  }
  const Lexicon& lex = grammar.lexicon();
  for (const auto& t : input.tokens) {
    if (!lex.known(t)) result.unknown.push_back(t);
  }
  if (!result.unknown.empty()) {
    result.status = ParseStatus::unknown_tokens;
    return result;
  }
  if (std::none_of(input.tokens.begin(), input.tokens.end(),
                   [&](const std::string& t) { return !lex.finite_verbs(t).empty(); })) {
    result.status = ParseStatus::no_finite_verb;
    return result;
  }
  ChartlessParser parser(grammar, config);
  result.status = parser.parse_each(input.tokens, [&](const DerivationView& d) {
    result.derivations.push_back(snapshot(d));
  });
  result.readings = readings(result.derivations);
  return result;
}

inline ParseResult parse(const Grammar& grammar, std::string_view sentence,
                         const ParseConfig& config = {}) {
  return parse(grammar, tokenize(sentence, grammar.lexicon()), config);
}

}  // namespace lexcon
