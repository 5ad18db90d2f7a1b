#ifndef MHB_TPDA_HPP
#define MHB_TPDA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mhb/pda.hpp"

namespace mhb {

struct TpdaTransition {
  uint32_t src = 0;
  uint32_t pop = 0;
  ReadLabel read;               // letter, $ or eps
  uint32_t dst = 0;
  std::vector<uint32_t> push;   // written topmost symbol first
};

/// Multi-head pushdown automaton: d one-way read heads on d tapes, one stack.
/// Each state reads through the single head `head_of[state]`. A tape holds a
/// word followed by the endmarker $; a head is off its tape once it has read
/// the endmarker. Acceptance: final state with every head off its tape. The
/// shared-tape language feeds all heads the same word.
struct Tpda {
  uint32_t heads = 1;
  Alphabet alphabet;   // input letters, without $
  Alphabet stack;
  std::vector<std::string> state_names;
  std::vector<uint32_t> head_of;  // per state, 0-based
  uint32_t initial = 0;
  uint32_t initial_stack = 0;
  std::vector<bool> is_final;
  std::vector<TpdaTransition> transitions;

  uint32_t add_state(const std::string& name, uint32_t head,
                     bool final_state = false);
  void add_transition(uint32_t src, uint32_t pop, ReadLabel read, uint32_t dst,
                      std::vector<uint32_t> push);
  size_t state_count() const { return state_names.size(); }
  /// States (with their head assignment) + alphabet sizes + transitions,
  /// the measure used by the size envelopes.
  size_t size() const;
};

/// Throws MalformedModel on hard violations; returns human-readable warnings
/// (e.g. more heads than states, which can never pay off).
std::vector<std::string> tpda_validate(const Tpda& a);

/// One tape of an instantaneous description: the word (without $) and the
/// head position. pos in [0, len] is before content[pos] (pos == len: before
/// $); pos == len+1 is off the tape.
struct TapeConfig {
  Word content;
  size_t pos = 0;

  bool off() const { return pos == content.size() + 1; }
  bool at_end() const { return pos == content.size(); }
};

struct Id {
  uint32_t state = 0;
  std::vector<TapeConfig> tapes;
  std::vector<uint32_t> stack;  // top first
};

/// All successor IDs under one firing of any enabled transition.
std::vector<Id> step(const Tpda& a, const Id& id);

bool id_accepting(const Tpda& a, const Id& id);

/// "(state | w1 # w2$ , ... | stack)" rendering used by traces.
std::string format_id(const Tpda& a, const Id& id);

Id initial_id(const Tpda& a, const std::vector<Word>& tapes);

/// Exact membership of a tape tuple: the finite control is producted with the
/// head-position grid, giving an input-free PDA whose language is non-empty
/// iff the tuple is accepted; decided through pda_to_cfg + cfg_analyze.
bool accepts_tuple_exact(const Tpda& a, const std::vector<Word>& tapes);

/// Membership of `word` in the shared-tape language L(A).
bool accepts_shared(const Tpda& a, const Word& word);

enum class SimVerdict { Accepting, Rejecting, BudgetExceeded };

struct SimResult {
  SimVerdict verdict = SimVerdict::Rejecting;
  std::vector<Id> trace;               // initial to accepting ID when found
  std::vector<size_t> fired;           // transition index per trace step
  size_t explored = 0;
};

/// Breadth-first exploration of the ID graph, memoized on full IDs, visiting
/// at most `budget` distinct IDs.
SimResult simulate_budgeted(const Tpda& a, const std::vector<Word>& tapes,
                            size_t budget);

/// Shared-tape union with k1+k2 heads: a chosen branch runs its machine on
/// its own head block and then drains the other block off the tape.
Tpda tpda_union(const Tpda& a, const Tpda& b);

/// Shared-tape intersection with k1+k2 heads: runs `a` on heads [0,k1), and
/// from accepting states of `a` starts `b` on heads [k1,k1+k2).
Tpda tpda_intersection(const Tpda& a, const Tpda& b);

}  // namespace mhb

#endif
