#pragma once

#include <string>
#include <vector>

#include "lexcon.hpp"

namespace support {

inline const lexcon::Grammar& shipped(bool slash = false) {
  static const lexcon::Grammar plain = lexcon::Grammar::load(
      LEXCON_DATA_DIR "/dutch.grm", LEXCON_DATA_DIR "/dutch.lex");
  static const lexcon::Grammar extracting = lexcon::Grammar::load(
      LEXCON_DATA_DIR "/dutch.grm", LEXCON_DATA_DIR "/dutch.lex", {true});
  return slash ? extracting : plain;
}

/// Counts clause resolutions of goals whose block condition still holds,
/// and wake-ups of goals that are still blocked.
class BlockAudit : public lexcon::Observer {
 public:
  explicit BlockAudit(const lexcon::Program& p) : program_(p) {}

  void on_resolve(const lexcon::Store& s, lexcon::TermRef goal) override {
    ++resolved;
    check(s, goal, "resolved");
  }
  void on_wake(const lexcon::Store& s, lexcon::TermRef goal) override {
    ++woken;
    check(s, goal, "woken");
  }
  void on_suspend(const lexcon::Store&, lexcon::TermRef, const std::vector<lexcon::TermRef>&) override {
    ++suspended;
  }

  std::size_t resolved = 0, woken = 0, suspended = 0;
  std::vector<std::string> violations;

 private:
  void check(const lexcon::Store& s, lexcon::TermRef goal, const char* what) {
    auto id = lexcon::ProgramBuilder::goal_id(s, goal);
    if (!id) return;
    const lexcon::BlockSpec* spec = program_.block(*id);
    if (spec && s.is_blocked(goal, *spec)) {
      violations.push_back(std::string(what) + " while blocked: " + lexcon::render_avm(s, goal));
    }
  }

  const lexcon::Program& program_;
};

}  // namespace support
