#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexcon/parser.hpp"

namespace lexcon {

struct Expectation {
  enum class Kind { ungrammatical, readings, some };
  Kind kind = Kind::some;
  std::size_t readings = 0;

  static Expectation parse(const std::string& s) {
    if (s == "*") return {Kind::ungrammatical, 0};
    if (s == "+") return {Kind::some, 0};
    std::size_t pos = 0;
    unsigned long n = 0;
    try {
      n = std::stoul(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw Error("bad expectation '" + s + "' (want *, + or a count)");
    return {Kind::readings, n};
  }

  std::string str() const {
    switch (kind) {
      case Kind::ungrammatical: return "*";
      case Kind::some: return "+";
      case Kind::readings: return std::to_string(readings);
    }
    return "?";
  }

  bool met_by(const ParseResult& r) const {
    if (r.error()) return false;
    switch (kind) {
      case Kind::ungrammatical: return r.derivations.empty();
      case Kind::some: return !r.derivations.empty();
      case Kind::readings: return !r.derivations.empty() && r.readings.size() == readings;
    }
    return false;
  }
};

struct CorpusCase {
  std::string sentence;
  Expectation expect;
  int line = 0;
};

/// `sentence<TAB>expect` per line; blank lines and '#' comments skipped.
inline std::vector<CorpusCase> parse_corpus(const std::string& text,
                                            const std::string& origin = "<corpus>") {
  std::vector<CorpusCase> cases;
  std::vector<Diagnostic> diags;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      diags.push_back({origin, lineno, 1, "expected 'sentence<TAB>expect'"});
      continue;
    }
    std::string expect = line.substr(tab + 1);
    while (!expect.empty() && expect.back() == ' ') expect.pop_back();
    try {
      cases.push_back({line.substr(0, tab), Expectation::parse(expect), lineno});
    } catch (const Error& e) {
      diags.push_back({origin, lineno, static_cast<int>(tab + 2), e.what()});
    }
  }
  if (!diags.empty()) throw LoadError(std::move(diags));
  return cases;
}

inline nlohmann::json to_json(const ParseResult& r, const std::string& sentence) {
  nlohmann::json j;
  j["sentence"] = sentence;
  j["grammatical"] = r.grammatical();
  j["derivations"] = r.derivations.size();
  auto& readings = j["readings"] = nlohmann::json::array();
  for (const auto& rd : r.readings) readings.push_back(rd.sem);
  if (r.error()) j["error"] = to_string(r.status);
  if (!r.unknown.empty()) j["unknown"] = r.unknown;
  return j;
}

}  // namespace lexcon
