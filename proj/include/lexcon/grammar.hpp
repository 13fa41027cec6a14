#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lexcon/lexicon.hpp"
#include "lexcon/program.hpp"

namespace lexcon {

struct GrammarOptions {
  /// Lets push_slash move one subcat element to slash. Root parses still
  /// require an empty slash.
  bool enable_slash = false;
};

/// Grammar source plus lexicon, loaded into one program.
class Grammar {
 public:
  static Grammar from_text(const std::string& grammar_text, const std::string& lexicon_text,
                           GrammarOptions options = {},
                           const std::string& grammar_origin = "<grammar>",
                           const std::string& lexicon_origin = "<lexicon>") {
    Lexicon lexicon = Lexicon::parse(lexicon_text, lexicon_origin);
    ProgramBuilder builder;
    builder.add(grammar_text, grammar_origin).add(lexicon.clauses(), lexicon_origin);
    if (options.enable_slash) builder.add("extraction_enabled(yes).", "<options>");
    LoadResult result = builder.build();
    return Grammar(std::move(result.value()), std::move(lexicon), options);
  }

  static Grammar load(const std::filesystem::path& grammar, const std::filesystem::path& lexicon,
                      GrammarOptions options = {}) {
    return from_text(read_file(grammar), read_file(lexicon), options, grammar.string(),
                     lexicon.string());
  }

  const Program& program() const { return program_; }
  const Lexicon& lexicon() const { return lexicon_; }
  const GrammarOptions& options() const { return options_; }

  static std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

 private:
  Grammar(Program program, Lexicon lexicon, GrammarOptions options)
      : program_(std::move(program)), lexicon_(std::move(lexicon)), options_(options) {}

  Program program_;
  Lexicon lexicon_;
  GrammarOptions options_;
};

}  // namespace lexcon
