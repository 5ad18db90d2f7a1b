#include "mhb/nfa.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace mhb {

std::string format_label(const ReadLabel& label, const Alphabet& alphabet) {
  switch (label.kind) {
    case ReadLabel::Kind::Eps: return "eps";
    case ReadLabel::Kind::End: return "$";
    case ReadLabel::Kind::Letter: return alphabet.name(label.sym);
  }
  return "?";
}

uint32_t Nfa::add_state(const std::string& name, bool final_state) {
  uint32_t id = static_cast<uint32_t>(state_names.size());
  state_names.push_back(name);
  is_final.push_back(final_state);
  return id;
}

void Nfa::add_transition(uint32_t from, ReadLabel label, uint32_t to) {
  transitions.push_back({from, label, to});
}

namespace {

std::set<uint32_t> eps_closure(const Nfa& nfa, std::set<uint32_t> states) {
  std::queue<uint32_t> queue;
  for (uint32_t s : states) queue.push(s);
  while (!queue.empty()) {
    uint32_t s = queue.front();
    queue.pop();
    for (const auto& t : nfa.transitions)
      if (t.from == s && t.label.is_eps() && states.insert(t.to).second)
        queue.push(t.to);
  }
  return states;
}

std::set<uint32_t> move_on(const Nfa& nfa, const std::set<uint32_t>& states,
                           const ReadLabel& label) {
  std::set<uint32_t> next;
  for (const auto& t : nfa.transitions)
    if (states.count(t.from) && t.label == label) next.insert(t.to);
  return next;
}

}  // namespace

bool nfa_accepts(const Nfa& nfa, const Word& word, bool read_end) {
  std::set<uint32_t> current = eps_closure(nfa, {nfa.initial});
  for (Sym s : word) {
    current = eps_closure(nfa, move_on(nfa, current, ReadLabel::letter(s)));
    if (current.empty()) return false;
  }
  if (read_end)
    current = eps_closure(nfa, move_on(nfa, current, ReadLabel::end()));
  return std::any_of(current.begin(), current.end(),
                     [&](uint32_t s) { return nfa.is_final[s]; });
}

Nfa indexed_shuffle_nfa(const std::vector<Nfa>& members) {
  if (members.empty())
    fail(ErrorKind::DimensionMismatch, "shuffle of zero automata");
  Nfa out;
  // Per-member translation of its letters into the indexed output alphabet.
  std::vector<std::vector<Sym>> letter_map(members.size());
  std::vector<Sym> end_map(members.size());
  for (size_t i = 0; i < members.size(); ++i) {
    std::string tag = "@" + std::to_string(i + 1);
    for (const auto& n : members[i].alphabet.names())
      letter_map[i].push_back(out.alphabet.add(n + tag));
    bool has_end = std::any_of(
        members[i].transitions.begin(), members[i].transitions.end(),
        [](const NfaTransition& t) { return t.label.is_end(); });
    end_map[i] = has_end ? out.alphabet.add("$" + tag) : 0;
  }

  std::map<std::vector<uint32_t>, uint32_t> index;
  std::vector<std::vector<uint32_t>> tuples;
  auto intern = [&](const std::vector<uint32_t>& tuple) {
    auto it = index.find(tuple);
    if (it != index.end()) return it->second;
    std::ostringstream name;
    name << '(';
    for (size_t i = 0; i < tuple.size(); ++i) {
      if (i > 0) name << ',';
      name << members[i].state_names[tuple[i]];
    }
    name << ')';
    bool final_state = true;
    for (size_t i = 0; i < tuple.size(); ++i)
      final_state = final_state && members[i].is_final[tuple[i]];
    uint32_t id = out.add_state(name.str(), final_state);
    index.emplace(tuple, id);
    tuples.push_back(tuple);
    return id;
  };

  std::vector<uint32_t> start(members.size());
  for (size_t i = 0; i < members.size(); ++i) start[i] = members[i].initial;
  out.initial = intern(start);

  for (uint32_t current = 0; current < tuples.size(); ++current) {
    std::vector<uint32_t> tuple = tuples[current];
    for (size_t i = 0; i < members.size(); ++i) {
      for (const auto& t : members[i].transitions) {
        if (t.from != tuple[i]) continue;
        std::vector<uint32_t> next = tuple;
        next[i] = t.to;
        ReadLabel label;
        switch (t.label.kind) {
          case ReadLabel::Kind::Eps: label = ReadLabel::eps(); break;
          case ReadLabel::Kind::End:
            label = ReadLabel::letter(end_map[i]);
            break;
          case ReadLabel::Kind::Letter:
            label = ReadLabel::letter(letter_map[i][t.label.sym]);
            break;
        }
        out.add_transition(current, label, intern(next));
      }
    }
  }
  return out;
}

}  // namespace mhb
