#include "mhb/tpda.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mhb {

uint32_t Tpda::add_state(const std::string& name, uint32_t head,
                         bool final_state) {
  uint32_t id = static_cast<uint32_t>(state_names.size());
  state_names.push_back(name);
  head_of.push_back(head);
  is_final.push_back(final_state);
  return id;
}

void Tpda::add_transition(uint32_t src, uint32_t pop, ReadLabel read,
                          uint32_t dst, std::vector<uint32_t> push) {
  transitions.push_back({src, pop, read, dst, std::move(push)});
}

size_t Tpda::size() const {
  size_t total = 2 * state_names.size() + alphabet.size() + stack.size();
  for (const auto& t : transitions) total += 1 + t.push.size();
  return total;
}

std::vector<std::string> tpda_validate(const Tpda& a) {
  if (a.heads < 1) fail(ErrorKind::MalformedModel, "at least one head required");
  if (a.state_names.empty())
    fail(ErrorKind::MalformedModel, "at least one state required");
  if (a.head_of.size() != a.state_names.size() ||
      a.is_final.size() != a.state_names.size())
    fail(ErrorKind::MalformedModel, "per-state tables out of sync");
  if (a.initial >= a.state_names.size())
    fail(ErrorKind::MalformedModel, "initial state out of range");
  if (a.stack.size() == 0)
    fail(ErrorKind::MalformedModel, "stack alphabet is empty");
  if (a.initial_stack >= a.stack.size())
    fail(ErrorKind::MalformedModel, "initial stack symbol out of range");
  for (uint32_t h : a.head_of)
    if (h >= a.heads)
      fail(ErrorKind::MalformedModel, "state selects head beyond head count");
  for (const auto& t : a.transitions) {
    if (t.src >= a.state_names.size() || t.dst >= a.state_names.size())
      fail(ErrorKind::MalformedModel, "transition state out of range");
    if (t.pop >= a.stack.size())
      fail(ErrorKind::MalformedModel, "transition pops unknown stack symbol");
    for (uint32_t s : t.push)
      if (s >= a.stack.size())
        fail(ErrorKind::MalformedModel, "transition pushes unknown stack symbol");
    if (t.read.is_letter() && t.read.sym >= a.alphabet.size())
      fail(ErrorKind::MalformedModel, "transition reads unknown letter");
  }
  std::vector<std::string> warnings;
  if (a.heads > a.state_names.size())
    warnings.push_back("more heads (" + std::to_string(a.heads) +
                       ") than states (" + std::to_string(a.state_names.size()) +
                       "); extra heads can never help");
  return warnings;
}

Id initial_id(const Tpda& a, const std::vector<Word>& tapes) {
  if (tapes.size() != a.heads)
    fail(ErrorKind::DimensionMismatch,
         "expected " + std::to_string(a.heads) + " tapes, got " +
             std::to_string(tapes.size()));
  Id id;
  id.state = a.initial;
  for (const auto& w : tapes) id.tapes.push_back({w, 0});
  id.stack = {a.initial_stack};
  return id;
}

namespace {

void check_id(const Tpda& a, const Id& id) {
  if (id.state >= a.state_names.size())
    fail(ErrorKind::MalformedId, "state out of range");
  if (id.tapes.size() != a.heads)
    fail(ErrorKind::MalformedId, "wrong number of tapes");
  for (const auto& t : id.tapes) {
    if (t.pos > t.content.size() + 1)
      fail(ErrorKind::MalformedId, "head position out of range");
    for (Sym s : t.content)
      if (s >= a.alphabet.size()) fail(ErrorKind::MalformedId, "tape symbol out of range");
  }
  for (uint32_t s : id.stack)
    if (s >= a.stack.size()) fail(ErrorKind::MalformedId, "stack symbol out of range");
}

}  // namespace

std::vector<Id> step(const Tpda& a, const Id& id) {
  check_id(a, id);
  std::vector<Id> successors;
  if (id.stack.empty()) return successors;
  uint32_t top = id.stack.front();
  uint32_t head = a.head_of[id.state];
  const TapeConfig& tape = id.tapes[head];
  for (const auto& t : a.transitions) {
    if (t.src != id.state || t.pop != top) continue;
    size_t advance = 0;
    if (t.read.is_letter()) {
      if (!(tape.pos < tape.content.size() && tape.content[tape.pos] == t.read.sym))
        continue;
      advance = 1;
    } else if (t.read.is_end()) {
      if (!tape.at_end()) continue;
      advance = 1;
    }
    Id next = id;
    next.state = t.dst;
    next.tapes[head].pos += advance;
    next.stack.assign(t.push.begin(), t.push.end());
    next.stack.insert(next.stack.end(), id.stack.begin() + 1, id.stack.end());
    successors.push_back(std::move(next));
  }
  return successors;
}

bool id_accepting(const Tpda& a, const Id& id) {
  if (!a.is_final[id.state]) return false;
  return std::all_of(id.tapes.begin(), id.tapes.end(),
                     [](const TapeConfig& t) { return t.off(); });
}

std::string format_id(const Tpda& a, const Id& id) {
  std::ostringstream out;
  out << '(' << a.state_names[id.state];
  for (const auto& t : id.tapes) {
    out << " | ";
    for (size_t i = 0; i < t.content.size(); ++i) {
      if (t.pos == i) out << '#';
      out << a.alphabet.name(t.content[i]);
    }
    if (t.pos == t.content.size()) out << '#';
    out << '$';
    if (t.off()) out << '#';
  }
  out << " | ";
  if (id.stack.empty()) out << "eps";
  for (uint32_t s : id.stack) out << a.stack.name(s);
  out << ')';
  return out.str();
}

namespace {

// Dense index over (state, head position vector).
struct GridIndex {
  std::vector<size_t> radix;  // per head, len+2
  size_t states;

  explicit GridIndex(const Tpda& a, const std::vector<Word>& tapes)
      : states(a.state_count()) {
    for (const auto& w : tapes) radix.push_back(w.size() + 2);
  }
  uint64_t encode(uint32_t state, const std::vector<size_t>& pos) const {
    uint64_t key = 0;
    for (size_t h = 0; h < radix.size(); ++h) key = key * radix[h] + pos[h];
    return key * states + state;
  }
};

}  // namespace

bool accepts_tuple_exact(const Tpda& a, const std::vector<Word>& tapes) {
  tpda_validate(a);
  if (tapes.size() != a.heads)
    fail(ErrorKind::DimensionMismatch, "tape tuple arity mismatch");

  GridIndex grid(a, tapes);
  Pda product;
  product.alphabet = Alphabet();  // input-free
  product.stack = a.stack;
  product.initial_stack = a.initial_stack;

  std::unordered_map<uint64_t, uint32_t> index;
  struct Node { uint32_t state; std::vector<size_t> pos; };
  std::vector<Node> nodes;
  auto intern = [&](uint32_t state, const std::vector<size_t>& pos) {
    uint64_t key = grid.encode(state, pos);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    bool accepting = a.is_final[state];
    for (size_t h = 0; h < tapes.size() && accepting; ++h)
      accepting = pos[h] == tapes[h].size() + 1;
    uint32_t id = product.add_state("g" + std::to_string(nodes.size()), accepting);
    index.emplace(key, id);
    nodes.push_back({state, pos});
    return id;
  };
  product.initial = intern(a.initial, std::vector<size_t>(a.heads, 0));

  for (uint32_t current = 0; current < nodes.size(); ++current) {
    uint32_t state = nodes[current].state;
    std::vector<size_t> pos = nodes[current].pos;
    uint32_t head = a.head_of[state];
    const Word& tape = tapes[head];
    for (const auto& t : a.transitions) {
      if (t.src != state) continue;
      size_t advance = 0;
      if (t.read.is_letter()) {
        if (!(pos[head] < tape.size() && tape[pos[head]] == t.read.sym)) continue;
        advance = 1;
      } else if (t.read.is_end()) {
        if (pos[head] != tape.size()) continue;
        advance = 1;
      }
      std::vector<size_t> npos = pos;
      npos[head] += advance;
      product.add_transition(current, t.pop, ReadLabel::eps(),
                             intern(t.dst, npos), t.push);
    }
  }

  Cfg g = pda_to_cfg(product);
  return !cfg_analyze(g).empty;
}

bool accepts_shared(const Tpda& a, const Word& word) {
  return accepts_tuple_exact(a, std::vector<Word>(a.heads, word));
}

SimResult simulate_budgeted(const Tpda& a, const std::vector<Word>& tapes,
                            size_t budget) {
  tpda_validate(a);
  SimResult result;
  auto key_of = [](const Id& id) {
    std::string key(reinterpret_cast<const char*>(&id.state), sizeof id.state);
    for (const auto& t : id.tapes) {
      uint64_t p = t.pos;
      key.append(reinterpret_cast<const char*>(&p), sizeof p);
    }
    key.append(reinterpret_cast<const char*>(id.stack.data()),
               id.stack.size() * sizeof(uint32_t));
    return key;
  };

  std::vector<Id> ids;
  std::vector<std::pair<size_t, size_t>> parent;  // parent index, transition
  std::unordered_set<std::string> seen;
  std::queue<size_t> queue;

  Id init = initial_id(a, tapes);
  seen.insert(key_of(init));
  ids.push_back(init);
  parent.emplace_back(SIZE_MAX, SIZE_MAX);
  queue.push(0);
  bool truncated = false;

  while (!queue.empty()) {
    size_t at = queue.front();
    queue.pop();
    Id id = ids[at];
    if (id_accepting(a, id)) {
      result.verdict = SimVerdict::Accepting;
      std::vector<size_t> chain;
      for (size_t i = at; i != SIZE_MAX; i = parent[i].first) chain.push_back(i);
      std::reverse(chain.begin(), chain.end());
      for (size_t i : chain) {
        result.trace.push_back(ids[i]);
        if (parent[i].second != SIZE_MAX) result.fired.push_back(parent[i].second);
      }
      result.explored = seen.size();
      return result;
    }
    if (id.stack.empty()) continue;
    uint32_t top = id.stack.front();
    uint32_t head = a.head_of[id.state];
    const TapeConfig& tape = id.tapes[head];
    for (size_t ti = 0; ti < a.transitions.size(); ++ti) {
      const auto& t = a.transitions[ti];
      if (t.src != id.state || t.pop != top) continue;
      size_t advance = 0;
      if (t.read.is_letter()) {
        if (!(tape.pos < tape.content.size() &&
              tape.content[tape.pos] == t.read.sym))
          continue;
        advance = 1;
      } else if (t.read.is_end()) {
        if (!tape.at_end()) continue;
        advance = 1;
      }
      Id next = id;
      next.state = t.dst;
      next.tapes[head].pos += advance;
      next.stack.assign(t.push.begin(), t.push.end());
      next.stack.insert(next.stack.end(), id.stack.begin() + 1, id.stack.end());
      if (seen.size() >= budget) { truncated = true; continue; }
      if (seen.insert(key_of(next)).second) {
        ids.push_back(std::move(next));
        parent.emplace_back(at, ti);
        queue.push(ids.size() - 1);
      }
    }
  }
  result.verdict = truncated ? SimVerdict::BudgetExceeded : SimVerdict::Rejecting;
  result.explored = seen.size();
  return result;
}

namespace {

// Copies a machine into `out` with renamed states/stack symbols; returns the
// state and stack index offsets.
struct Embedded {
  std::vector<uint32_t> state_map;
  std::vector<uint32_t> stack_map;
};

Embedded embed(Tpda& out, const Tpda& m, const std::string& prefix,
               uint32_t head_offset, bool keep_finals) {
  Embedded e;
  for (uint32_t s = 0; s < m.stack.size(); ++s)
    e.stack_map.push_back(out.stack.add(prefix + m.stack.name(s)));
  for (uint32_t q = 0; q < m.state_count(); ++q)
    e.state_map.push_back(out.add_state(prefix + m.state_names[q],
                                        m.head_of[q] + head_offset,
                                        keep_finals && m.is_final[q]));
  for (const auto& t : m.transitions) {
    std::vector<uint32_t> push;
    for (uint32_t s : t.push) push.push_back(e.stack_map[s]);
    out.add_transition(e.state_map[t.src], e.stack_map[t.pop], t.read,
                       e.state_map[t.dst], std::move(push));
  }
  return e;
}

// Chain of states that reads head block [from, to) to the end of its tape,
// then moves to `target`.
uint32_t drain_chain(Tpda& out, const std::string& prefix, uint32_t from,
                     uint32_t to, uint32_t target) {
  uint32_t entry = target;
  for (uint32_t h = to; h-- > from;) {
    uint32_t state = out.add_state(prefix + "drain" + std::to_string(h + 1), h);
    for (uint32_t g = 0; g < out.stack.size(); ++g) {
      for (Sym s = 0; s < out.alphabet.size(); ++s)
        out.add_transition(state, g, ReadLabel::letter(s), state, {g});
      out.add_transition(state, g, ReadLabel::end(), entry, {g});
    }
    entry = state;
  }
  return entry;
}

void require_same_alphabet(const Tpda& a, const Tpda& b) {
  if (!(a.alphabet == b.alphabet))
    fail(ErrorKind::AlphabetMismatch,
         "operands must share one input alphabet");
}

}  // namespace

Tpda tpda_union(const Tpda& a, const Tpda& b) {
  tpda_validate(a);
  tpda_validate(b);
  require_same_alphabet(a, b);
  Tpda out;
  out.heads = a.heads + b.heads;
  out.alphabet = a.alphabet;
  out.initial_stack = out.stack.add("u.bot");
  out.initial = out.add_state("u.start", 0);
  uint32_t accept = out.add_state("u.acc", 0, true);

  Embedded ea = embed(out, a, "l.", 0, false);
  Embedded eb = embed(out, b, "r.", a.heads, false);

  // The chosen branch runs its machine, then drains the other head block.
  out.add_transition(out.initial, out.initial_stack, ReadLabel::eps(),
                     ea.state_map[a.initial], {ea.stack_map[a.initial_stack]});
  out.add_transition(out.initial, out.initial_stack, ReadLabel::eps(),
                     eb.state_map[b.initial], {eb.stack_map[b.initial_stack]});
  uint32_t drain_b = drain_chain(out, "l.", a.heads, a.heads + b.heads, accept);
  uint32_t drain_a = drain_chain(out, "r.", 0, a.heads, accept);
  for (uint32_t q = 0; q < a.state_count(); ++q)
    if (a.is_final[q])
      for (uint32_t g = 0; g < out.stack.size(); ++g)
        out.add_transition(ea.state_map[q], g, ReadLabel::eps(), drain_b, {g});
  for (uint32_t q = 0; q < b.state_count(); ++q)
    if (b.is_final[q])
      for (uint32_t g = 0; g < out.stack.size(); ++g)
        out.add_transition(eb.state_map[q], g, ReadLabel::eps(), drain_a, {g});
  return out;
}

Tpda tpda_intersection(const Tpda& a, const Tpda& b) {
  tpda_validate(a);
  tpda_validate(b);
  require_same_alphabet(a, b);
  Tpda out;
  out.heads = a.heads + b.heads;
  out.alphabet = a.alphabet;

  Embedded ea = embed(out, a, "l.", 0, false);
  Embedded eb = embed(out, b, "r.", a.heads, true);
  out.initial = ea.state_map[a.initial];
  out.initial_stack = ea.stack_map[a.initial_stack];

  // Once `a` accepts, `b` starts on the second head block on a fresh top.
  for (uint32_t q = 0; q < a.state_count(); ++q)
    if (a.is_final[q])
      for (uint32_t g = 0; g < out.stack.size(); ++g)
        out.add_transition(ea.state_map[q], g, ReadLabel::eps(),
                           eb.state_map[b.initial],
                           {eb.stack_map[b.initial_stack], g});
  return out;
}

}  // namespace mhb
