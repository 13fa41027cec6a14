// Command-line front end: parse, corpus, trace.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lexcon.hpp"

namespace {

using namespace lexcon;

struct RunConfig {
  std::string grammar = LEXCON_DATA_DIR "/dutch.grm";
  std::string lexicon = LEXCON_DATA_DIR "/dutch.lex";
  std::string corpus = LEXCON_DATA_DIR "/corpus.tsv";
  std::string format = "text";
  bool trace = false;
  bool enable_slash = false;
  std::size_t max_depth = Limits{}.max_depth;
  std::size_t max_sc_length = 0;  // 0: bounded by sentence length only
};

// Prints suspension, binding and wake events as they happen.
class TraceLog : public Observer {
 public:
  explicit TraceLog(std::ostream& out, bool calls = false) : out_(out), calls_(calls) {}

  void on_call(const Store& s, TermRef goal, std::size_t depth) override {
    if (calls_) out_ << "call    [" << depth << "] " << render_avm(s, goal) << "\n";
  }
  void on_suspend(const Store& s, TermRef goal, const std::vector<TermRef>& vars) override {
    ++suspends;
    out_ << "suspend " << render_avm(s, goal) << "  on";
    for (auto v : vars) out_ << " _G" << s.deref(v).index;
    out_ << "\n";
  }
  void on_bind(const Store& s, TermRef var, TermRef value) override {
    ++binds;
    // The binding is already in place, so name the variable by its cell.
    out_ << "bind    _G" << var.index << " := " << abbreviate(render_avm(s, value)) << "\n";
  }
  void on_wake(const Store& s, TermRef goal) override {
    ++wakes;
    out_ << "wake    " << render_avm(s, goal) << "\n";
  }

  std::size_t suspends = 0, binds = 0, wakes = 0;

 private:
  static std::string abbreviate(const std::string& s) {
    return s.size() <= 120 ? s : s.substr(0, 117) + "...";
  }
  std::ostream& out_;
  bool calls_;
};

ParseConfig parse_config(const RunConfig& rc, Observer* observer) {
  ParseConfig pc;
  pc.limits.max_depth = rc.max_depth;
  if (rc.max_sc_length > 0) pc.max_sc_length = rc.max_sc_length;
  pc.observer = observer;
  return pc;
}

Grammar load_grammar(const RunConfig& rc) {
  return Grammar::load(rc.grammar, rc.lexicon, GrammarOptions{rc.enable_slash});
}

void print_text(const ParseResult& r, bool signs) {
  std::cout << "sentence: " << (r.input.complementizer ? "dat " : "");
  for (std::size_t i = 0; i < r.input.tokens.size(); ++i) {
    std::cout << (i ? " " : "") << r.input.tokens[i];
  }
  std::cout << "\ngrammatical: " << (r.grammatical() ? "yes" : "no") << "\n"
            << "derivations: " << r.derivations.size() << "\n"
            << "readings: " << r.readings.size() << "\n";
  for (std::size_t i = 0; i < r.readings.size(); ++i) {
    std::cout << "  [" << i + 1 << "] " << r.readings[i].sem << "\n";
  }
  if (!signs) return;
  for (std::size_t i = 0; i < r.derivations.size(); ++i) {
    const auto& d = r.derivations[i];
    std::cout << "\nderivation " << i + 1 << " (head " << d.head_verb;
    for (const auto& s : d.sites) std::cout << ", " << s.adverbial << " on sc of " << s.verb;
    std::cout << ")\n" << d.sign << "\n";
  }
}

int report_error(const ParseResult& r) {
  std::cerr << "error: " << to_string(r.status);
  if (r.status == ParseStatus::unknown_tokens) {
    std::cerr << ":";
    for (const auto& u : r.unknown) std::cerr << " " << u;
  }
  if (r.status == ParseStatus::limit_exceeded) {
    std::cerr << " (search truncated at --max-depth; the result may be incomplete)";
  }
  std::cerr << "\n";
  return 2;
}

int cmd_parse(const RunConfig& rc, const std::string& sentence, bool signs) {
  Grammar g = load_grammar(rc);
  TraceLog log(std::cerr);
  ParseResult r = parse(g, sentence, parse_config(rc, rc.trace ? &log : nullptr));
  if (rc.format == "json") {
    std::cout << to_json(r, sentence).dump(2) << "\n";
  } else if (!r.error()) {
    print_text(r, signs);
  }
  if (r.error()) return report_error(r);
  return r.grammatical() ? 0 : 1;
}

int cmd_corpus(const RunConfig& rc) {
  Grammar g = load_grammar(rc);
  auto cases = parse_corpus(Grammar::read_file(rc.corpus), rc.corpus);
  if (cases.empty()) std::cerr << "warning: corpus '" << rc.corpus << "' has no cases\n";
  std::size_t failed = 0;
  nlohmann::json rows = nlohmann::json::array();
  TraceLog log(std::cerr);
  for (const auto& c : cases) {
    ParseResult r = parse(g, c.sentence, parse_config(rc, rc.trace ? &log : nullptr));
    bool pass = c.expect.met_by(r);
    if (!pass) ++failed;
    if (rc.format == "json") {
      auto j = to_json(r, c.sentence);
      j["expect"] = c.expect.str();
      j["pass"] = pass;
      rows.push_back(std::move(j));
    } else {
      std::string got = r.error() ? std::string("error: ") + to_string(r.status)
                        : r.grammatical() ? std::to_string(r.readings.size()) + " reading(s), " +
                                                std::to_string(r.derivations.size()) + " derivation(s)"
                                          : "*";
      std::cout << (pass ? "PASS" : "FAIL") << "  " << c.sentence << "  expect " << c.expect.str()
                << ", got " << got << "\n";
    }
  }
  if (rc.format == "json") {
    nlohmann::json out{{"cases", rows}, {"passed", cases.size() - failed}, {"failed", failed}};
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << cases.size() - failed << "/" << cases.size() << " passed\n";
  }
  return failed ? 1 : 0;
}

int cmd_trace(const RunConfig& rc, const std::string& sentence, const std::string& query,
              bool calls) {
  Grammar g = load_grammar(rc);
  TraceLog log(std::cout, calls);
  if (!query.empty()) {
    Limits limits;
    limits.max_depth = rc.max_depth;
    SolveReport rep = solve_text(g.program(), query, limits, &log);
    std::cout << "-- " << rep.solutions.size() << " solution(s), " << to_string(rep.end) << "\n";
    for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
      const auto& s = rep.solutions[i];
      std::cout << "solution " << i + 1 << ":";
      for (const auto& [n, v] : s.bindings) std::cout << " " << n << " = " << v << ";";
      std::cout << "\n  residue: ";
      if (s.residue.empty()) std::cout << "none";
      for (std::size_t k = 0; k < s.residue.size(); ++k) std::cout << (k ? ", " : "") << s.residue[k];
      std::cout << "\n";
    }
    std::cout << "suspensions: " << log.suspends << ", wakes: " << log.wakes << "\n";
    return rep.end == StreamEnd::truncated ? 2 : 0;
  }
  ParseResult r = parse(g, sentence, parse_config(rc, &log));
  std::cout << "-- suspensions: " << log.suspends << ", wakes: " << log.wakes << "\n";
  if (r.error()) return report_error(r);
  print_text(r, false);
  return r.grammatical() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lexicalist parser for Dutch verb clusters with delayed lexical constraints"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  RunConfig rc;

  app.add_option("--grammar", rc.grammar, "grammar source file")->envname("GRAMMAR");
  app.add_option("--lexicon", rc.lexicon, "lexicon file")->envname("LEXICON");
  app.add_option("--corpus", rc.corpus, "corpus file (sentence<TAB>expect)")->envname("CORPUS");
  app.add_option("--format", rc.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->envname("FORMAT");
  app.add_flag("--trace", rc.trace, "log suspensions and wake-ups to stderr")->envname("TRACE");
  app.add_flag("--enable-slash", rc.enable_slash, "allow push_slash extraction")
      ->envname("ENABLE_SLASH");
  app.add_option("--max-depth", rc.max_depth, "resolution steps per branch")
      ->check(CLI::PositiveNumber)
      ->envname("MAX_DEPTH");
  app.add_option("--max-sc-length", rc.max_sc_length, "longest head subcat list tried")
      ->check(CLI::PositiveNumber)
      ->envname("MAX_SC_LENGTH");

  std::string sentence, query;
  bool signs = false, calls = false;
  auto* parse_cmd = app.add_subcommand("parse", "parse one sentence");
  parse_cmd->add_option("sentence", sentence)->required();
  parse_cmd->add_flag("--signs", signs, "print each derivation's root sign with sharing tags");
  parse_cmd->fallthrough();

  auto* corpus_cmd = app.add_subcommand("corpus", "check a corpus against its expectations");
  corpus_cmd->fallthrough();

  auto* trace_cmd = app.add_subcommand("trace", "log delayed-goal events for a sentence or query");
  auto* sentence_opt = trace_cmd->add_option("sentence", sentence);
  auto* query_opt = trace_cmd->add_option("--query", query, "solve a goal list instead");
  trace_cmd->add_flag("--calls", calls, "also log every goal call");
  sentence_opt->excludes(query_opt);
  trace_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*parse_cmd) return cmd_parse(rc, sentence, signs);
    if (*corpus_cmd) return cmd_corpus(rc);
    if (sentence.empty() && query.empty()) {
      std::cerr << "error: trace needs a sentence or --query\n";
      return 2;
    }
    return cmd_trace(rc, sentence, query, calls);
  } catch (const LoadError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << d.str() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
