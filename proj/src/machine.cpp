#include "mhb/machine.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "mhb/error.hpp"

namespace mhb {

uint32_t Machine::add_state(const std::string& name) {
  state_names.push_back(name);
  return static_cast<uint32_t>(state_names.size() - 1);
}

void Machine::add_transition(uint32_t src, uint32_t pop, MachineOp op,
                             uint32_t dst, std::vector<uint32_t> push) {
  transitions.push_back({src, pop, op, dst, std::move(push)});
}

size_t Machine::size() const { return state_names.size() + transitions.size(); }

Alphabet Machine::transition_alphabet() const {
  Alphabet a;
  for (size_t t = 0; t < transitions.size(); ++t)
    a.add("t" + std::to_string(t + 1));
  return a;
}

void machine_validate(const Machine& m) {
  if (m.state_names.empty()) fail(ErrorKind::MalformedModel, "machine has no states");
  if (m.stack.size() == 0) fail(ErrorKind::MalformedModel, "machine has an empty stack alphabet");
  if (m.initial >= m.state_names.size())
    fail(ErrorKind::MalformedModel, "initial state out of range");
  if (m.initial_stack >= m.stack.size())
    fail(ErrorKind::MalformedModel, "initial stack symbol out of range");
  std::set<std::string> seen;
  for (const auto& c : m.counters)
    if (c.empty() || !seen.insert("c:" + c).second)
      fail(ErrorKind::MalformedModel, "counter names must be nonempty and distinct");
  for (const auto& ch : m.channels)
    if (ch.empty() || !seen.insert("q:" + ch).second)
      fail(ErrorKind::MalformedModel, "channel names must be nonempty and distinct");
  for (size_t t = 0; t < m.transitions.size(); ++t) {
    const MachineTransition& tr = m.transitions[t];
    std::string where = " in transition t" + std::to_string(t + 1);
    if (tr.src >= m.state_names.size() || tr.dst >= m.state_names.size())
      fail(ErrorKind::MalformedModel, "state out of range" + where);
    if (tr.pop >= m.stack.size())
      fail(ErrorKind::MalformedModel, "stack symbol out of range" + where);
    for (uint32_t g : tr.push)
      if (g >= m.stack.size())
        fail(ErrorKind::MalformedModel, "stack symbol out of range" + where);
    switch (tr.op.kind) {
      case MachineOp::Kind::Nop:
        break;
      case MachineOp::Kind::Inc:
      case MachineOp::Kind::Dec:
      case MachineOp::Kind::Zero:
        if (tr.op.target >= m.counters.size())
          fail(ErrorKind::MalformedModel, "counter out of range" + where);
        break;
      case MachineOp::Kind::Send:
      case MachineOp::Kind::Recv:
        if (tr.op.target >= m.channels.size())
          fail(ErrorKind::MalformedModel, "channel out of range" + where);
        if (tr.op.msg >= m.messages.size())
          fail(ErrorKind::MalformedModel, "message out of range" + where);
        break;
    }
  }
}

MachineRun run_machine(const Machine& m, const Word& pi) {
  machine_validate(m);
  MachineRun run;
  MachineConfig& c = run.config;
  c.state = m.initial;
  c.stack = {m.initial_stack};
  c.counters.assign(m.counters.size(), 0);
  c.channels.assign(m.channels.size(), {});
  run.states.push_back(c.state);
  for (Sym t : pi) {
    if (t >= m.transitions.size())
      fail(ErrorKind::UnknownTransition,
           "t" + std::to_string(static_cast<size_t>(t) + 1) + " is not declared");
    const MachineTransition& tr = m.transitions[t];
    if (tr.src != c.state) return run;
    if (c.stack.empty() || c.stack.front() != tr.pop) return run;
    switch (tr.op.kind) {
      case MachineOp::Kind::Nop:
        break;
      case MachineOp::Kind::Inc:
        ++c.counters[tr.op.target];
        break;
      case MachineOp::Kind::Dec:
        if (c.counters[tr.op.target] == 0) return run;
        --c.counters[tr.op.target];
        break;
      case MachineOp::Kind::Zero:
        if (c.counters[tr.op.target] != 0) return run;
        break;
      case MachineOp::Kind::Send:
        c.channels[tr.op.target].push_back(tr.op.msg);
        break;
      case MachineOp::Kind::Recv: {
        auto& q = c.channels[tr.op.target];
        if (q.empty() || q.front() != tr.op.msg) return run;
        q.pop_front();
        break;
      }
    }
    c.stack.erase(c.stack.begin());
    c.stack.insert(c.stack.begin(), tr.push.begin(), tr.push.end());
    c.state = tr.dst;
    run.states.push_back(c.state);
    ++run.steps;
  }
  run.feasible = true;
  return run;
}

std::optional<MachineConfig> cm_run(const Machine& m, const Word& pi) {
  MachineRun r = run_machine(m, pi);
  if (!r.feasible) return std::nullopt;
  return r.config;
}

std::optional<MachineConfig> cfsm_run(const Machine& m, const Word& pi) {
  return cm_run(m, pi);
}

namespace {

/// Control-flow member: the machine's own pushdown skeleton over transition
/// names, accepting exactly at `target` via a fresh endmarker sink.
Tpda control_flow_pda(const Machine& m, uint32_t target, const Alphabet& letters) {
  Tpda p;
  p.heads = 1;
  p.alphabet = letters;
  p.stack = m.stack;
  for (const auto& name : m.state_names) p.add_state(name, 0, false);
  uint32_t acc = p.add_state("acc", 0, true);
  p.initial = m.initial;
  p.initial_stack = m.initial_stack;
  for (size_t t = 0; t < m.transitions.size(); ++t) {
    const MachineTransition& tr = m.transitions[t];
    p.add_transition(tr.src, tr.pop, ReadLabel::letter(static_cast<Sym>(t)),
                     tr.dst, tr.push);
  }
  for (uint32_t g = 0; g < m.stack.size(); ++g)
    p.add_transition(target, g, ReadLabel::end(), acc, {g});
  tpda_validate(p);
  return p;
}

/// Feasibility checker for one counter: stack height above bottom mirrors the
/// counter value, so decrements at zero and failed zero-tests get stuck.
Tpda counter_checker(const Machine& m, uint32_t counter, const Alphabet& letters) {
  Tpda p;
  p.heads = 1;
  p.alphabet = letters;
  uint32_t bot = p.stack.add(".");
  uint32_t unit = p.stack.add("a");
  uint32_t q = p.add_state("q", 0, false);
  uint32_t qf = p.add_state("qf", 0, true);
  p.initial = q;
  p.initial_stack = bot;
  for (size_t t = 0; t < m.transitions.size(); ++t) {
    const MachineOp& op = m.transitions[t].op;
    ReadLabel read = ReadLabel::letter(static_cast<Sym>(t));
    bool counters_kind = op.kind == MachineOp::Kind::Inc ||
                         op.kind == MachineOp::Kind::Dec ||
                         op.kind == MachineOp::Kind::Zero;
    if (counters_kind && op.target == counter) {
      switch (op.kind) {
        case MachineOp::Kind::Inc:
          for (uint32_t g = 0; g < p.stack.size(); ++g)
            p.add_transition(q, g, read, q, {unit, g});
          break;
        case MachineOp::Kind::Dec:
          p.add_transition(q, unit, read, q, {});
          break;
        default:  // Zero
          p.add_transition(q, bot, read, q, {bot});
          break;
      }
    } else {
      for (uint32_t g = 0; g < p.stack.size(); ++g)
        p.add_transition(q, g, read, q, {g});
    }
  }
  for (uint32_t g = 0; g < p.stack.size(); ++g)
    p.add_transition(q, g, ReadLabel::end(), qf, {g});
  tpda_validate(p);
  return p;
}

/// Feasibility checker for one FIFO channel. The far head H passes over the
/// whole word pushing one unit per operation on this channel; when H passes a
/// receive of message s, the near head h must catch up through the operations
/// H has already passed (popping them) until it finds a send of exactly s —
/// FIFO order and non-negative queue length both fall out of the stack.
Tpda channel_checker(const Machine& m, uint32_t channel, const Alphabet& letters) {
  constexpr uint32_t kNear = 0, kFar = 1;
  Tpda p;
  p.heads = 2;
  p.alphabet = letters;
  uint32_t bot = p.stack.add(".");
  uint32_t unit = p.stack.add("a");
  uint32_t far = p.add_state("far", kFar, false);
  uint32_t drain = p.add_state("drain", kNear, true);
  std::vector<uint32_t> pending(m.messages.size());
  for (uint32_t s = 0; s < m.messages.size(); ++s)
    pending[s] = p.add_state("wait_" + m.messages.name(s), kNear, false);
  p.initial = far;
  p.initial_stack = bot;
  for (size_t t = 0; t < m.transitions.size(); ++t) {
    const MachineOp& op = m.transitions[t].op;
    ReadLabel read = ReadLabel::letter(static_cast<Sym>(t));
    bool mine = (op.kind == MachineOp::Kind::Send ||
                 op.kind == MachineOp::Kind::Recv) &&
                op.target == channel;
    if (mine && op.kind == MachineOp::Kind::Send) {
      for (uint32_t g = 0; g < p.stack.size(); ++g)
        p.add_transition(far, g, read, far, {unit, g});
      // h found the send matching the receive it is resolving.
      p.add_transition(pending[op.msg], unit, read, far, {});
    } else if (mine && op.kind == MachineOp::Kind::Recv) {
      for (uint32_t g = 0; g < p.stack.size(); ++g)
        p.add_transition(far, g, read, pending[op.msg], {unit, g});
      // h passes receives that were already resolved earlier.
      for (uint32_t s = 0; s < m.messages.size(); ++s)
        p.add_transition(pending[s], unit, read, pending[s], {});
    } else {
      for (uint32_t g = 0; g < p.stack.size(); ++g) {
        p.add_transition(far, g, read, far, {g});
        for (uint32_t s = 0; s < m.messages.size(); ++s)
          p.add_transition(pending[s], g, read, pending[s], {g});
      }
    }
    for (uint32_t g = 0; g < p.stack.size(); ++g)
      p.add_transition(drain, g, read, drain, {g});
  }
  for (uint32_t g = 0; g < p.stack.size(); ++g) {
    p.add_transition(far, g, ReadLabel::end(), drain, {g});
    p.add_transition(drain, g, ReadLabel::end(), drain, {g});
  }
  tpda_validate(p);
  return p;
}

}  // namespace

std::vector<Tpda> compile_machine(const Machine& m, uint32_t target) {
  machine_validate(m);
  if (target >= m.state_names.size())
    fail(ErrorKind::UnknownTargetState,
         "no state with index " + std::to_string(target));
  Alphabet letters = m.transition_alphabet();
  std::vector<Tpda> family;
  family.push_back(control_flow_pda(m, target, letters));
  for (uint32_t c = 0; c < m.counters.size(); ++c)
    family.push_back(counter_checker(m, c, letters));
  for (uint32_t ch = 0; ch < m.channels.size(); ++ch)
    family.push_back(channel_checker(m, ch, letters));
  return family;
}

std::vector<Tpda> cm_compile(const Machine& m, uint32_t target) {
  return compile_machine(m, target);
}

std::vector<Tpda> cfsm_compile(const Machine& m, uint32_t target) {
  return compile_machine(m, target);
}

namespace {

struct SccInfo {
  std::vector<uint32_t> comp;  // state -> component id, ids in completion order
  uint32_t count = 0;
};

SccInfo tarjan_scc(size_t n, const std::vector<std::vector<uint32_t>>& succ) {
  SccInfo out;
  out.comp.assign(n, 0);
  std::vector<uint32_t> index(n, 0), low(n, 0);
  std::vector<bool> has_index(n, false), on_stack(n, false);
  std::vector<uint32_t> stack;
  uint32_t next = 0;
  std::function<void(uint32_t)> visit = [&](uint32_t v) {
    index[v] = low[v] = next++;
    has_index[v] = true;
    stack.push_back(v);
    on_stack[v] = true;
    for (uint32_t w : succ[v]) {
      if (!has_index[w]) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      for (;;) {
        uint32_t w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        out.comp[w] = out.count;
        if (w == v) break;
      }
      ++out.count;
    }
  };
  for (uint32_t v = 0; v < n; ++v)
    if (!has_index[v]) visit(v);
  return out;
}

}  // namespace

BoundedExpression flat_bounded_expression(const Machine& m) {
  machine_validate(m);
  if (m.transitions.empty())
    fail(ErrorKind::NoSegments, "machine has no transitions");
  size_t n = m.state_names.size();
  std::vector<std::vector<uint32_t>> succ(n);
  for (size_t t = 0; t < m.transitions.size(); ++t)
    succ[m.transitions[t].src].push_back(m.transitions[t].dst);
  SccInfo scc = tarjan_scc(n, succ);

  std::vector<std::vector<uint32_t>> members(scc.count);
  for (uint32_t s = 0; s < n; ++s) members[scc.comp[s]].push_back(s);
  // In-component out-edge per member state (flatness demands at most one),
  // bridge transitions grouped under their source component.
  std::vector<std::vector<uint32_t>> inner(n);
  std::vector<std::vector<uint32_t>> bridges(scc.count);
  for (uint32_t t = 0; t < m.transitions.size(); ++t) {
    const MachineTransition& tr = m.transitions[t];
    if (scc.comp[tr.src] == scc.comp[tr.dst])
      inner[tr.src].push_back(t);
    else
      bridges[scc.comp[tr.src]].push_back(t);
  }

  BoundedExpression expr;
  expr.alphabet = m.transition_alphabet();
  // Tarjan completes sink components first, so descending ids are a
  // topological order of the condensation.
  for (uint32_t c = scc.count; c-- > 0;) {
    const std::vector<uint32_t>& states = members[c];
    bool trivial = states.size() == 1 && inner[states[0]].empty();
    if (!trivial) {
      for (uint32_t s : states)
        if (inner[s].size() != 1)
          fail(ErrorKind::NotFlat, "state " + m.state_names[s] +
                                       " lies on more than one simple cycle");
      std::set<uint32_t> attach;
      for (uint32_t t = 0; t < m.transitions.size(); ++t) {
        const MachineTransition& tr = m.transitions[t];
        if (scc.comp[tr.dst] == c && scc.comp[tr.src] != c) attach.insert(tr.dst);
        if (scc.comp[tr.src] == c && scc.comp[tr.dst] != c) attach.insert(tr.src);
      }
      if (scc.comp[m.initial] == c) attach.insert(m.initial);
      uint32_t start = attach.size() == 1 ? *attach.begin() : states[0];
      Word cycle;
      uint32_t at = start;
      do {
        uint32_t t = inner[at][0];
        cycle.push_back(t);
        at = m.transitions[t].dst;
      } while (at != start && cycle.size() <= states.size());
      if (at != start || cycle.size() != states.size())
        fail(ErrorKind::Internal, "flat cycle reconstruction failed");
      bool one_attachment = attach.size() <= 1;
      if (!one_attachment && cycle.size() > 1)
        for (Sym t : cycle) expr.segments.push_back({t});
      expr.segments.push_back(cycle);
      if (cycle.size() > 1)
        for (Sym t : cycle) expr.segments.push_back({t});
    }
    for (uint32_t t : bridges[c]) expr.segments.push_back({t});
  }
  return expr;
}

}  // namespace mhb
