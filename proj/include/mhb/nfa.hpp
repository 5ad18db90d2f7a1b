#ifndef MHB_NFA_HPP
#define MHB_NFA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mhb/alphabet.hpp"

namespace mhb {

/// Transition label: a letter, the endmarker $, or epsilon.
struct ReadLabel {
  enum class Kind : uint8_t { Eps, End, Letter };
  Kind kind = Kind::Eps;
  Sym sym = 0;

  static ReadLabel eps() { return {Kind::Eps, 0}; }
  static ReadLabel end() { return {Kind::End, 0}; }
  static ReadLabel letter(Sym s) { return {Kind::Letter, s}; }

  bool is_eps() const { return kind == Kind::Eps; }
  bool is_end() const { return kind == Kind::End; }
  bool is_letter() const { return kind == Kind::Letter; }
  bool operator==(const ReadLabel& o) const {
    return kind == o.kind && (kind != Kind::Letter || sym == o.sym);
  }
};

std::string format_label(const ReadLabel& label, const Alphabet& alphabet);

struct NfaTransition {
  uint32_t from;
  ReadLabel label;
  uint32_t to;
};

/// Nondeterministic finite automaton over an alphabet plus the endmarker.
struct Nfa {
  Alphabet alphabet;
  std::vector<std::string> state_names;
  uint32_t initial = 0;
  std::vector<bool> is_final;
  std::vector<NfaTransition> transitions;

  uint32_t add_state(const std::string& name, bool final_state = false);
  void add_transition(uint32_t from, ReadLabel label, uint32_t to);
  size_t state_count() const { return state_names.size(); }
};

/// Runs the subset simulation on `word`, optionally followed by the
/// endmarker $.
bool nfa_accepts(const Nfa& nfa, const Word& word, bool read_end = false);

/// Indexed shuffle: accepts exactly the words obtained by interleaving one
/// word per member automaton, with every letter of member i tagged with index
/// i+1 ("a@2" is letter a of the second member; an endmarker read by member i
/// becomes the ordinary letter "$@i+1"). States are the reachable tuples.
Nfa indexed_shuffle_nfa(const std::vector<Nfa>& members);

}  // namespace mhb

#endif
