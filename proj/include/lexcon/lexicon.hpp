#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexcon/syntax.hpp"

namespace lexcon {

enum class WordClass { verb, noun, adv_restr, adv_op };

inline const char* to_string(WordClass c) {
  switch (c) {
    case WordClass::verb: return "verb";
    case WordClass::noun: return "noun";
    case WordClass::adv_restr: return "adv-restr";
    case WordClass::adv_op: return "adv-op";
  }
  return "?";
}

struct LexiconEntry {
  std::string surface;
  WordClass word_class = WordClass::noun;
  // verbs
  std::string frame;
  std::string soa;
  std::string phon;
  std::string finite_form;
  std::vector<std::string> roles;
  // adverbials
  std::string relation;  // adv-restr: restriction; adv-op: soa sort
  int line = 0;
};

/// Word list in the tab-separated lexicon format:
///
///   word<TAB>class<TAB>params
///
/// Blank lines and lines starting with '#' are ignored.
class Lexicon {
 public:
  static std::size_t frame_arity(std::string_view frame) {
    if (frame == "intrans") return 1;
    if (frame == "trans" || frame == "aux" || frame == "aci") return 2;
    if (frame == "ditrans") return 3;
    return 0;
  }

  /// Throws LoadError listing every malformed line.
  static Lexicon parse(std::string_view text, const std::string& origin = "<lexicon>") {
    Lexicon lex;
    std::vector<Diagnostic> diags;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    std::map<std::pair<std::string, WordClass>, int> seen;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      auto err = [&](const std::string& msg) { diags.push_back({origin, lineno, 1, msg}); };
      auto cols = split(line, '\t');
      if (cols.size() < 2) {
        err("expected 'word<TAB>class<TAB>params'");
        continue;
      }
      LexiconEntry e;
      e.surface = cols[0];
      e.line = lineno;
      auto params = cols.size() > 2 ? split_ws(cols[2]) : std::vector<std::string>{};
      const std::string& cls = cols[1];
      if (cls == "verb") {
        e.word_class = WordClass::verb;
        std::vector<std::string> positional;
        for (const auto& p : params) {
          auto eq = p.find('=');
          if (eq == std::string::npos) {
            positional.push_back(p);
          } else if (p.substr(0, eq) == "finite") {
            e.finite_form = p.substr(eq + 1);
          } else if (p.substr(0, eq) == "roles") {
            e.roles = split(p.substr(eq + 1), ',');
          } else {
            err("unknown verb parameter '" + p.substr(0, eq) + "'");
          }
        }
        if (positional.size() != 3) {
          err("verb needs 'frame soa phon'");
          continue;
        }
        e.frame = positional[0];
        e.soa = positional[1];
        e.phon = positional[2];
        std::size_t arity = frame_arity(e.frame);
        if (arity == 0) {
          err("unknown frame '" + e.frame + "'");
          continue;
        }
        if (e.roles.empty()) {
          for (std::size_t i = 1; i <= arity; ++i) e.roles.push_back("arg" + std::to_string(i));
        }
        if (e.roles.size() != arity) {
          err("frame '" + e.frame + "' takes " + std::to_string(arity) + " roles");
          continue;
        }
        if (e.finite_form.empty()) e.finite_form = e.phon + "t";
      } else if (cls == "noun") {
        e.word_class = WordClass::noun;
      } else if (cls == "adv-restr" || cls == "adv-op") {
        e.word_class = cls == "adv-restr" ? WordClass::adv_restr : WordClass::adv_op;
        if (params.size() != 1) {
          err(cls + " needs exactly one parameter");
          continue;
        }
        e.relation = params[0];
      } else {
        err("unknown class '" + cls + "'");
        continue;
      }
      if (seen[{e.surface, e.word_class}]++) {
        err("duplicate " + std::string(to_string(e.word_class)) + " '" + e.surface + "'");
        continue;
      }
      lex.entries_.push_back(std::move(e));
    }
    if (!diags.empty()) throw LoadError(std::move(diags));
    lex.lines_ = lineno;
    return lex;
  }

  const std::vector<LexiconEntry>& entries() const { return entries_; }

  const LexiconEntry* verb(std::string_view infinitive) const {
    for (const auto& e : entries_) {
      if (e.word_class == WordClass::verb && e.surface == infinitive) return &e;
    }
    return nullptr;
  }

  std::vector<const LexiconEntry*> finite_verbs(std::string_view form) const {
    std::vector<const LexiconEntry*> out;
    for (const auto& e : entries_) {
      if (e.word_class == WordClass::verb && e.finite_form == form) out.push_back(&e);
    }
    return out;
  }

  bool is_dependent(std::string_view word) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const LexiconEntry& e) {
      return e.word_class != WordClass::verb && e.surface == word;
    });
  }

  /// Known as any surface form: infinitive, finite form, noun or adverbial.
  bool known(std::string_view word) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const LexiconEntry& e) {
      return e.surface == word || (e.word_class == WordClass::verb && e.finite_form == word);
    });
  }

  std::size_t max_words() const {
    std::size_t n = 1;
    for (const auto& e : entries_) {
      n = std::max(n, static_cast<std::size_t>(std::count(e.surface.begin(), e.surface.end(), '_')) + 1);
    }
    return n;
  }

  /// Grammar-language facts for every entry, each on its source line so that
  /// load diagnostics point back into the lexicon file.
  std::string clauses() const {
    std::vector<std::string> out(static_cast<std::size_t>(lines_) + 1);
    for (const auto& e : entries_) out[static_cast<std::size_t>(e.line - 1)] = clause(e);
    std::string text;
    for (const auto& l : out) text += l + "\n";
    return text;
  }

 private:
  static std::string quote(const std::string& s) { return "'" + s + "'"; }

  static std::string clause(const LexiconEntry& e) {
    switch (e.word_class) {
      case WordClass::noun: return "noun(" + quote(e.surface) + ").";
      case WordClass::adv_restr:
        return "restrictive(" + quote(e.surface) + ", " + quote(e.relation) + ").";
      case WordClass::adv_op:
        return "operator(" + quote(e.surface) + ", @" + e.relation + "{soa-arg: Arg}, Arg).";
      case WordClass::verb: break;
    }
    std::string feats, vars;
    for (std::size_t i = 0; i < e.roles.size(); ++i) {
      if (i) {
        feats += ", ";
        vars += ", ";
      }
      feats += e.roles[i] + ": R" + std::to_string(i + 1);
      vars += "R" + std::to_string(i + 1);
    }
    return "verb(" + quote(e.surface) + ", " + e.frame + ", " + quote(e.phon) + ", @" + e.soa + "{" +
           feats + "}, [" + vars + "]). finite_form(" + quote(e.phon) + ", " +
           quote(e.finite_form) + ").";
  }

  static std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == sep) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  }

  static std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
  }

  std::vector<LexiconEntry> entries_;
  int lines_ = 0;
};

}  // namespace lexcon
