#ifndef MHB_PDA_HPP
#define MHB_PDA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mhb/cfg.hpp"
#include "mhb/nfa.hpp"

namespace mhb {

struct PdaTransition {
  uint32_t src = 0;
  uint32_t pop = 0;             // stack symbol removed from the top
  ReadLabel read;               // Letter or Eps; PDAs carry no endmarker
  uint32_t dst = 0;
  std::vector<uint32_t> push;   // written topmost symbol first
};

/// Pushdown automaton accepting by final state with the input consumed; the
/// remaining stack content is unconstrained. Every transition pops exactly
/// one symbol.
struct Pda {
  Alphabet alphabet;
  Alphabet stack;
  std::vector<std::string> state_names;
  uint32_t initial = 0;
  uint32_t initial_stack = 0;
  std::vector<bool> is_final;
  std::vector<PdaTransition> transitions;

  uint32_t add_state(const std::string& name, bool final_state = false);
  void add_transition(uint32_t src, uint32_t pop, ReadLabel read, uint32_t dst,
                      std::vector<uint32_t> push);
  size_t state_count() const { return state_names.size(); }
  /// States + transitions + alphabet sizes, the measure used by the size
  /// envelopes.
  size_t size() const;
};

/// Triple construction [p gamma q], restricted on the fly to derivable and
/// reachable triples; the result equals the naive construction followed by
/// trimming. The terminal alphabet of the grammar is the PDA input alphabet.
Cfg pda_to_cfg(const Pda& pda);

enum class Sim3 { Yes, No, BudgetExceeded };

/// Direct breadth-first simulation used as an independent cross-check in
/// tests; explores at most `budget` distinct configurations.
Sim3 pda_accepts_budgeted(const Pda& pda, const Word& word, size_t budget);

}  // namespace mhb

#endif
