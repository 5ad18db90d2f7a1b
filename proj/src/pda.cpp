#include "mhb/pda.hpp"

#include <cstring>
#include <deque>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace mhb {

uint32_t Pda::add_state(const std::string& name, bool final_state) {
  uint32_t id = static_cast<uint32_t>(state_names.size());
  state_names.push_back(name);
  is_final.push_back(final_state);
  return id;
}

void Pda::add_transition(uint32_t src, uint32_t pop, ReadLabel read, uint32_t dst,
                         std::vector<uint32_t> push) {
  if (read.is_end())
    fail(ErrorKind::MalformedModel, "PDA transitions cannot read the endmarker");
  transitions.push_back({src, pop, read, dst, std::move(push)});
}

size_t Pda::size() const {
  size_t total = state_names.size() + alphabet.size() + stack.size();
  for (const auto& t : transitions) total += 1 + t.push.size();
  return total;
}

namespace {

// Internal transition form with push length at most two.
struct NTrans {
  uint32_t src, pop, dst;
  ReadLabel read;
  uint32_t push0 = 0, push1 = 0;
  uint8_t plen = 0;
};

struct TripleEngine {
  uint32_t n_states, n_stack;
  std::vector<NTrans> trans;
  std::vector<std::vector<uint32_t>> by_top;   // top key -> transition ids
  std::vector<std::vector<uint32_t>> out;      // top key -> completed targets
  std::unordered_set<uint64_t> out_set;        // (top key, target)
  std::vector<bool> needed;
  std::vector<std::vector<uint32_t>> waiters1;  // child top -> push-1 parents
  std::vector<std::vector<uint32_t>> waiters2a; // first-child top -> parents
  std::vector<std::vector<uint32_t>> waiters2b; // second-child top -> parents
  std::unordered_set<uint64_t> seen_pair;       // (transition, mid state)

  struct Event { uint8_t kind; uint64_t a; uint32_t b; };  // 0 need, 1 edge
  std::deque<Event> queue;

  uint64_t top_key(uint32_t state, uint32_t sym) const {
    return uint64_t(state) * n_stack + sym;
  }
  uint64_t edge_key(uint64_t top, uint32_t q) const {
    return top * n_states + q;
  }

  void init(uint32_t states, uint32_t stack_syms) {
    n_states = states;
    n_stack = stack_syms;
    size_t tops = size_t(states) * stack_syms;
    by_top.assign(tops, {});
    out.assign(tops, {});
    needed.assign(tops, false);
    waiters1.assign(tops, {});
    waiters2a.assign(tops, {});
    waiters2b.assign(tops, {});
  }

  void index_transitions() {
    for (uint32_t i = 0; i < trans.size(); ++i)
      by_top[top_key(trans[i].src, trans[i].pop)].push_back(i);
  }

  void need(uint64_t top) {
    if (!needed[top]) {
      needed[top] = true;
      queue.push_back({0, top, 0});
    }
  }

  void emit(uint64_t top, uint32_t q) {
    if (out_set.insert(edge_key(top, q)).second) {
      out[top].push_back(q);
      queue.push_back({1, top, q});
    }
  }

  void handle_pair(uint32_t tid, uint32_t mid) {
    if (!seen_pair.insert(uint64_t(tid) * n_states + mid).second) return;
    const NTrans& t = trans[tid];
    uint64_t second = top_key(mid, t.push1);
    waiters2b[second].push_back(tid);
    need(second);
    uint64_t parent = top_key(t.src, t.pop);
    size_t count = out[second].size();
    for (size_t i = 0; i < count; ++i) emit(parent, out[second][i]);
  }

  void process_need(uint64_t top) {
    for (uint32_t tid : by_top[top]) {
      const NTrans& t = trans[tid];
      if (t.plen == 0) {
        emit(top, t.dst);
      } else if (t.plen == 1) {
        uint64_t child = top_key(t.dst, t.push0);
        waiters1[child].push_back(tid);
        need(child);
        size_t count = out[child].size();
        for (size_t i = 0; i < count; ++i) emit(top, out[child][i]);
      } else {
        uint64_t first = top_key(t.dst, t.push0);
        waiters2a[first].push_back(tid);
        need(first);
        size_t count = out[first].size();
        for (size_t i = 0; i < count; ++i) handle_pair(tid, out[first][i]);
      }
    }
  }

  void process_edge(uint64_t top, uint32_t q) {
    for (uint32_t tid : waiters1[top])
      emit(top_key(trans[tid].src, trans[tid].pop), q);
    // Snapshot: handle_pair may append to these waiter lists.
    size_t count2a = waiters2a[top].size();
    for (size_t i = 0; i < count2a; ++i) handle_pair(waiters2a[top][i], q);
    size_t count2b = waiters2b[top].size();
    for (size_t i = 0; i < count2b; ++i)
      emit(top_key(trans[waiters2b[top][i]].src, trans[waiters2b[top][i]].pop), q);
  }

  void run(uint64_t seed_top) {
    need(seed_top);
    while (!queue.empty()) {
      Event e = queue.front();
      queue.pop_front();
      if (e.kind == 0)
        process_need(e.a);
      else
        process_edge(e.a, e.b);
    }
  }
};

}  // namespace

Cfg pda_to_cfg(const Pda& pda) {
  uint32_t n_orig_states = static_cast<uint32_t>(pda.state_count());
  uint32_t n_orig_stack = static_cast<uint32_t>(pda.stack.size());
  if (pda.initial >= n_orig_states || pda.initial_stack >= n_orig_stack)
    fail(ErrorKind::MalformedModel, "PDA initial state or stack symbol out of range");

  // Augmented machine: fresh start; fresh bottom symbol; drain state that
  // empties the stack from final states, so final-state acceptance becomes
  // empty-stack acceptance.
  std::vector<std::string> state_names = pda.state_names;
  uint32_t aug_start = static_cast<uint32_t>(state_names.size());
  state_names.push_back("start!");
  uint32_t drain = static_cast<uint32_t>(state_names.size());
  state_names.push_back("drain!");
  uint32_t bottom = n_orig_stack;  // fresh stack symbol
  uint32_t n_stack = n_orig_stack + 1;

  TripleEngine engine;
  auto add = [&](uint32_t src, uint32_t pop, ReadLabel read, uint32_t dst,
                 const std::vector<uint32_t>& push) {
    // Pushes longer than two are chained through fresh states.
    if (push.size() <= 2) {
      NTrans t{src, pop, dst, read, 0, 0, static_cast<uint8_t>(push.size())};
      if (!push.empty()) t.push0 = push[0];
      if (push.size() == 2) t.push1 = push[1];
      engine.trans.push_back(t);
      return;
    }
    // First step pushes the two deepest symbols; each later step inserts the
    // next symbol beneath the current top until push[0] surfaces.
    size_t m = push.size();
    std::vector<uint32_t> chain(m - 2);
    for (size_t j = 0; j < m - 2; ++j) {
      chain[j] = static_cast<uint32_t>(state_names.size());
      state_names.push_back("chain!" + std::to_string(state_names.size()));
    }
    engine.trans.push_back(
        {src, pop, chain[0], read, push[m - 2], push[m - 1], 2});
    for (size_t i = 1; i <= m - 2; ++i) {
      uint32_t from = chain[i - 1];
      uint32_t to = (i == m - 2) ? dst : chain[i];
      engine.trans.push_back({from, push[m - 1 - i], to, ReadLabel::eps(),
                              push[m - 2 - i], push[m - 1 - i], 2});
    }
  };

  for (const auto& t : pda.transitions) {
    if (t.src >= n_orig_states || t.dst >= n_orig_states)
      fail(ErrorKind::MalformedModel, "PDA transition state out of range");
    add(t.src, t.pop, t.read, t.dst, t.push);
  }
  add(aug_start, bottom, ReadLabel::eps(), pda.initial,
      {pda.initial_stack, bottom});
  for (uint32_t f = 0; f < n_orig_states; ++f) {
    if (!pda.is_final[f]) continue;
    for (uint32_t g = 0; g < n_stack; ++g)
      add(f, g, ReadLabel::eps(), drain, {});
  }
  for (uint32_t g = 0; g < n_stack; ++g)
    add(drain, g, ReadLabel::eps(), drain, {});

  engine.init(static_cast<uint32_t>(state_names.size()), n_stack);
  engine.index_transitions();
  uint64_t root_top = engine.top_key(aug_start, bottom);
  engine.run(root_top);

  // Assemble the trimmed grammar reachable from the start triple.
  Cfg g;
  g.terminals = pda.alphabet;
  g.start = g.add_nonterminal("S!");
  auto stack_name = [&](uint32_t s) {
    return s == bottom ? std::string("bot!") : pda.stack.name(s);
  };
  std::unordered_map<uint64_t, uint32_t> nt_of;
  std::vector<std::pair<uint64_t, uint32_t>> todo;
  auto intern = [&](uint64_t top, uint32_t q) {
    uint64_t key = engine.edge_key(top, q);
    auto it = nt_of.find(key);
    if (it != nt_of.end()) return it->second;
    uint32_t p = static_cast<uint32_t>(top / n_stack);
    uint32_t sym = static_cast<uint32_t>(top % n_stack);
    uint32_t id = g.add_nonterminal("[" + state_names[p] + "," + stack_name(sym) +
                                    "," + state_names[q] + "]");
    nt_of.emplace(key, id);
    todo.emplace_back(top, q);
    return id;
  };

  for (uint32_t q : engine.out[root_top])
    g.add_production(g.start, {CfgSym::nonterm(intern(root_top, q))});

  while (!todo.empty()) {
    auto [top, q] = todo.back();
    todo.pop_back();
    uint32_t lhs = nt_of.at(engine.edge_key(top, q));
    for (uint32_t tid : engine.by_top[top]) {
      const NTrans& t = engine.trans[tid];
      std::vector<CfgSym> prefix;
      if (t.read.is_letter()) prefix.push_back(CfgSym::term(t.read.sym));
      if (t.plen == 0) {
        if (t.dst == q) g.add_production(lhs, prefix);
      } else if (t.plen == 1) {
        uint64_t child = engine.top_key(t.dst, t.push0);
        if (engine.out_set.count(engine.edge_key(child, q))) {
          auto rhs = prefix;
          rhs.push_back(CfgSym::nonterm(intern(child, q)));
          g.add_production(lhs, std::move(rhs));
        }
      } else {
        uint64_t first = engine.top_key(t.dst, t.push0);
        for (uint32_t mid : engine.out[first]) {
          uint64_t second = engine.top_key(mid, t.push1);
          if (engine.out_set.count(engine.edge_key(second, q))) {
            auto rhs = prefix;
            rhs.push_back(CfgSym::nonterm(intern(first, mid)));
            rhs.push_back(CfgSym::nonterm(intern(second, q)));
            g.add_production(lhs, std::move(rhs));
          }
        }
      }
    }
  }
  return g;
}

Sim3 pda_accepts_budgeted(const Pda& pda, const Word& word, size_t budget) {
  struct Config {
    uint32_t state;
    uint32_t pos;
    std::vector<uint32_t> stack;  // top first
  };
  auto key_of = [](const Config& c) {
    std::string key(reinterpret_cast<const char*>(&c.state), sizeof c.state);
    key.append(reinterpret_cast<const char*>(&c.pos), sizeof c.pos);
    key.append(reinterpret_cast<const char*>(c.stack.data()),
               c.stack.size() * sizeof(uint32_t));
    return key;
  };
  std::unordered_set<std::string> seen;
  std::queue<Config> queue;
  Config init{pda.initial, 0, {pda.initial_stack}};
  seen.insert(key_of(init));
  queue.push(std::move(init));
  bool truncated = false;
  while (!queue.empty()) {
    Config c = queue.front();
    queue.pop();
    if (c.pos == word.size() && pda.is_final[c.state]) return Sim3::Yes;
    if (c.stack.empty()) continue;
    for (const auto& t : pda.transitions) {
      if (t.src != c.state || t.pop != c.stack.front()) continue;
      uint32_t npos = c.pos;
      if (t.read.is_letter()) {
        if (c.pos >= word.size() || word[c.pos] != t.read.sym) continue;
        npos = c.pos + 1;
      }
      Config n;
      n.state = t.dst;
      n.pos = npos;
      n.stack.assign(t.push.begin(), t.push.end());
      n.stack.insert(n.stack.end(), c.stack.begin() + 1, c.stack.end());
      if (seen.size() >= budget) { truncated = true; continue; }
      if (seen.insert(key_of(n)).second) queue.push(std::move(n));
    }
  }
  return truncated ? Sim3::BudgetExceeded : Sim3::No;
}

}  // namespace mhb
