#ifndef MHB_MACHINE_HPP
#define MHB_MACHINE_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "mhb/alphabet.hpp"
#include "mhb/bexpr.hpp"
#include "mhb/tpda.hpp"

namespace mhb {

struct MachineOp {
  enum class Kind { Nop, Inc, Dec, Zero, Send, Recv };
  Kind kind = Kind::Nop;
  uint32_t target = 0;  // counter index (Inc/Dec/Zero), channel index (Send/Recv)
  Sym msg = 0;          // message symbol, Send/Recv only

  static MachineOp nop() { return {}; }
  static MachineOp inc(uint32_t c) { return {Kind::Inc, c, 0}; }
  static MachineOp dec(uint32_t c) { return {Kind::Dec, c, 0}; }
  static MachineOp zero(uint32_t c) { return {Kind::Zero, c, 0}; }
  static MachineOp send(uint32_t ch, Sym m) { return {Kind::Send, ch, m}; }
  static MachineOp recv(uint32_t ch, Sym m) { return {Kind::Recv, ch, m}; }
};

struct MachineTransition {
  uint32_t src = 0;
  uint32_t pop = 0;  // required stack top
  MachineOp op;
  uint32_t dst = 0;
  std::vector<uint32_t> push;  // replacement for the popped top, topmost first
};

/// Recursive machine combining a pushdown control store with counters and
/// FIFO channels. A counter machine uses no channels; a communicating FSM
/// keeps the trivial one-symbol stack. Transitions are named t1..tm in
/// declaration order; the transition names double as the input alphabet of
/// the compiled checker family.
struct Machine {
  std::vector<std::string> state_names;
  Alphabet stack;
  uint32_t initial = 0;
  uint32_t initial_stack = 0;
  std::vector<std::string> counters;
  std::vector<std::string> channels;
  Alphabet messages;
  std::vector<MachineTransition> transitions;

  uint32_t add_state(const std::string& name);
  void add_transition(uint32_t src, uint32_t pop, MachineOp op, uint32_t dst,
                      std::vector<uint32_t> push);
  size_t size() const;  // states + transitions
  Alphabet transition_alphabet() const;
};

/// Hard-violation checks: indices in range, nonempty stack alphabet,
/// counter/channel names nonempty and distinct.
void machine_validate(const Machine& m);

struct MachineConfig {
  uint32_t state = 0;
  std::vector<uint32_t> stack;  // topmost first
  std::vector<uint64_t> counters;
  std::vector<std::deque<Sym>> channels;  // front = head of the queue
};

struct MachineRun {
  bool feasible = false;
  size_t steps = 0;               // transitions applied before the first violation
  MachineConfig config;           // configuration after the last applied transition
  std::vector<uint32_t> states;   // control states visited, starting configuration first
};

/// Replays a transition word from the initial configuration and stops at the
/// first violated guard: wrong source state, wrong stack top, decrement at
/// zero, zero-test at nonzero, or receive whose message is not at the head of
/// the queue.
MachineRun run_machine(const Machine& m, const Word& pi);

/// Final configuration when the whole word is feasible, nullopt otherwise.
std::optional<MachineConfig> cm_run(const Machine& m, const Word& pi);
std::optional<MachineConfig> cfsm_run(const Machine& m, const Word& pi);

/// Checker family over the transition alphabet: the control-flow member plus
/// one feasibility checker per counter and per channel. A transition word is
/// accepted by every member iff it is a feasible run ending in `target`.
std::vector<Tpda> compile_machine(const Machine& m, uint32_t target);
std::vector<Tpda> cm_compile(const Machine& m, uint32_t target);
std::vector<Tpda> cfsm_compile(const Machine& m, uint32_t target);

/// Covering expression for a flat control graph (every state lies on at most
/// one simple cycle): every transition word of any run of `m` matches the
/// expression. Rejects non-flat graphs (NotFlat) and machines without
/// transitions (NoSegments).
BoundedExpression flat_bounded_expression(const Machine& m);

}  // namespace mhb

#endif
