#include "mhb/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace mhb {

SegmentedNfa build_w(const BoundedExpression& w) {
  SegmentedNfa out;
  Nfa& n = out.nfa;
  n.alphabet = w.alphabet;
  size_t segs = w.arity();
  std::vector<uint32_t> hubs(segs + 1);
  for (size_t i = 0; i <= segs; ++i)
    hubs[i] = n.add_state("h" + std::to_string(i + 1));
  uint32_t fin = n.add_state("f", true);
  n.initial = hubs[0];
  n.add_transition(hubs[segs], ReadLabel::end(), fin);
  out.designated.resize(segs);
  for (size_t i = 0; i < segs; ++i) {
    const Word& seg = w.segments[i];
    uint32_t cur = hubs[i];
    for (size_t p = 0; p + 1 < seg.size(); ++p) {
      uint32_t nxt = n.add_state("w" + std::to_string(i + 1) + "." +
                                 std::to_string(p + 1));
      n.add_transition(cur, ReadLabel::letter(seg[p]), nxt);
      cur = nxt;
    }
    // The designated state has exactly one incoming transition, reading the
    // segment's last letter; the ε-backedge allows further copies.
    uint32_t q = n.add_state("q" + std::to_string(i + 1));
    n.add_transition(cur, ReadLabel::letter(seg.back()), q);
    n.add_transition(q, ReadLabel::eps(), hubs[i]);
    n.add_transition(hubs[i], ReadLabel::eps(), hubs[i + 1]);
    out.designated[i] = q;
  }
  return out;
}

namespace {

// One move of the W-side of the synchronized product: the W-state component
// turns `src` into `dst` while the machine reads `read` through the head on
// `tape`; emit > 0 marks completion of a copy of segment emit.
struct WMove {
  uint32_t tape = 0;
  ReadLabel read;
  uint32_t dst = 0;
  uint32_t emit = 0;
};

// State space of d synchronized copies of W, presented as interned ids so the
// full tuple product is never materialized beyond what gets explored.
struct WSystem {
  uint32_t initial = 0;
  std::function<bool(uint32_t)> is_final;
  std::function<std::vector<WMove>(uint32_t)> moves;
  std::function<std::string(uint32_t)> name;
};

class TupleSpace {
 public:
  TupleSpace(const SegmentedNfa& w, uint32_t d) : w_(w) {
    desig_.assign(w.nfa.state_count(), 0);
    for (size_t i = 0; i < w.designated.size(); ++i)
      desig_[w.designated[i]] = static_cast<uint32_t>(i + 1);
    adj_.resize(w.nfa.state_count());
    for (const auto& t : w.nfa.transitions) adj_[t.from].push_back(t);
    intern(std::vector<uint32_t>(d, w.nfa.initial));
  }

  uint32_t initial() const { return 0; }

  bool is_final(uint32_t id) const {
    for (uint32_t q : tuples_[id])
      if (!w_.nfa.is_final[q]) return false;
    return true;
  }

  std::vector<WMove> moves(uint32_t id) {
    std::vector<WMove> out;
    const std::vector<uint32_t> tup = tuples_[id];  // copy: intern reallocates
    for (uint32_t j = 0; j < tup.size(); ++j) {
      for (const NfaTransition& t : adj_[tup[j]]) {
        std::vector<uint32_t> nt = tup;
        nt[j] = t.to;
        uint32_t emit = t.label.is_letter() ? desig_[t.to] : 0;
        out.push_back({j, t.label, intern(std::move(nt)), emit});
      }
    }
    return out;
  }

  std::string name(uint32_t id) const {
    std::string s = "[";
    const auto& tup = tuples_[id];
    for (size_t j = 0; j < tup.size(); ++j) {
      if (j) s += ',';
      s += w_.nfa.state_names[tup[j]];
    }
    return s + "]";
  }

 private:
  uint32_t intern(std::vector<uint32_t> tuple) {
    auto it = index_.find(tuple);
    if (it != index_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(tuples_.size());
    index_.emplace(tuple, id);
    tuples_.push_back(std::move(tuple));
    return id;
  }

  const SegmentedNfa& w_;
  std::vector<uint32_t> desig_;
  std::vector<std::vector<NfaTransition>> adj_;
  std::map<std::vector<uint32_t>, uint32_t> index_;
  std::vector<std::vector<uint32_t>> tuples_;
};

// The W-side of one chain member: a line of grid positions in [1,n+1]^d,
// self-looping on the segment letter of each coordinate still left of its
// endmarker, advancing one fixed coordinate per step.
class ChainSpace {
 public:
  ChainSpace(const BoundedExpression& b, const std::vector<uint32_t>& advance,
             uint32_t d)
      : b_(b), advance_(advance) {
    grid_.assign(advance.size() + 1, std::vector<uint32_t>(d, 1));
    for (size_t t = 0; t < advance.size(); ++t) {
      grid_[t + 1] = grid_[t];
      grid_[t + 1][advance[t]] += 1;
    }
  }

  bool is_final(uint32_t id) const { return id + 1 == grid_.size(); }

  std::vector<WMove> moves(uint32_t id) const {
    std::vector<WMove> out;
    uint32_t n = static_cast<uint32_t>(b_.arity());
    const auto& g = grid_[id];
    for (uint32_t j = 0; j < g.size(); ++j)
      if (g[j] <= n)
        out.push_back(
            {j, ReadLabel::letter(b_.segments[g[j] - 1][0]), id, g[j]});
    if (id + 1 < grid_.size()) {
      uint32_t j = advance_[id];
      ReadLabel lab = g[j] < n ? ReadLabel::eps() : ReadLabel::end();
      out.push_back({j, lab, id + 1, 0});
    }
    return out;
  }

  std::string name(uint32_t id) const {
    std::string s = "[";
    const auto& g = grid_[id];
    for (size_t j = 0; j < g.size(); ++j) {
      if (j) s += ',';
      s += std::to_string(g[j]);
    }
    return s + "]";
  }

 private:
  const BoundedExpression& b_;
  const std::vector<uint32_t>& advance_;
  std::vector<std::vector<uint32_t>> grid_;
};

WSystem wrap(TupleSpace& space) {
  WSystem ws;
  ws.initial = space.initial();
  ws.is_final = [&space](uint32_t id) { return space.is_final(id); };
  ws.moves = [&space](uint32_t id) { return space.moves(id); };
  ws.name = [&space](uint32_t id) { return space.name(id); };
  return ws;
}

WSystem wrap(const ChainSpace& space) {
  WSystem ws;
  ws.initial = 0;
  ws.is_final = [&space](uint32_t id) { return space.is_final(id); };
  ws.moves = [&space](uint32_t id) { return space.moves(id); };
  ws.name = [&space](uint32_t id) { return space.name(id); };
  return ws;
}

// Synchronized product of the machine with the W system, relabeled on the
// fly: a read that completes a copy of segment i becomes a_i, other
// non-endmarker reads become ε, endmarker reads stay. Only product states
// reachable from the joint initial state are created; the W-side states
// realized in some product pair are reported through reached_w.
//
// With fold_eps, silent W moves are folded into the read they enable: in an
// accepting run every silent move on a tape is eventually followed by a read
// on that tape (the endmarker at the latest) and commutes with everything in
// between, so reads matched against the per-tape silent closure recognize
// the same tuples while the product never materializes the intermediate
// states. Chain members keep the unfolded form: their state names are the
// grid positions that member recovery walks one step at a time.
Tpda contract_core(const Tpda& a, const WSystem& ws, size_t n_segments,
                   std::set<uint32_t>* reached_w, bool fold_eps = false) {
  Tpda b;
  b.heads = a.heads;
  for (size_t i = 0; i < n_segments; ++i)
    b.alphabet.add("a" + std::to_string(i + 1));
  b.stack = a.stack;
  b.initial_stack = a.initial_stack;

  std::map<std::pair<uint32_t, uint32_t>, uint32_t> index;
  std::deque<std::pair<uint32_t, uint32_t>> todo;
  auto intern = [&](uint32_t s, uint32_t wid) {
    auto it = index.find({s, wid});
    if (it != index.end()) return it->second;
    uint32_t id =
        b.add_state("(" + a.state_names[s] + "|" + ws.name(wid) + ")",
                    a.head_of[s], a.is_final[s] && ws.is_final(wid));
    index.insert({{s, wid}, id});
    todo.push_back({s, wid});
    return id;
  };

  std::vector<std::vector<const TpdaTransition*>> aadj(a.state_count());
  for (const auto& t : a.transitions) aadj[t.src].push_back(&t);

  // Reads on `tape` enabled from the silent closure of wid along that tape.
  std::map<std::pair<uint32_t, uint32_t>, std::vector<WMove>> folded;
  auto folded_reads = [&](uint32_t wid,
                          uint32_t tape) -> const std::vector<WMove>& {
    auto it = folded.find({wid, tape});
    if (it != folded.end()) return it->second;
    std::vector<WMove> reads;
    std::set<uint32_t> seen{wid};
    std::deque<uint32_t> work{wid};
    while (!work.empty()) {
      uint32_t u = work.front();
      work.pop_front();
      for (const WMove& m : ws.moves(u)) {
        if (m.tape != tape) continue;
        if (m.read.is_eps()) {
          if (seen.insert(m.dst).second) work.push_back(m.dst);
        } else {
          reads.push_back(m);
        }
      }
    }
    return folded.emplace(std::make_pair(wid, tape), std::move(reads))
        .first->second;
  };

  b.initial = intern(a.initial, ws.initial);
  while (!todo.empty()) {
    auto [s, wid] = todo.front();
    todo.pop_front();
    uint32_t cur = index.at({s, wid});
    std::vector<WMove> wmoves =
        fold_eps ? std::vector<WMove>() : ws.moves(wid);
    uint32_t tape = a.head_of[s];
    const std::vector<WMove>& reads =
        fold_eps ? folded_reads(wid, tape) : wmoves;
    for (const TpdaTransition* t : aadj[s]) {
      if (t->read.is_eps()) {
        // The machine moves alone; every W copy stays put.
        b.add_transition(cur, t->pop, ReadLabel::eps(), intern(t->dst, wid),
                         t->push);
        continue;
      }
      for (const WMove& m : reads) {
        if (m.tape != tape || !(m.read == t->read)) continue;
        ReadLabel label = t->read.is_end()
                              ? ReadLabel::end()
                              : (m.emit ? ReadLabel::letter(m.emit - 1)
                                        : ReadLabel::eps());
        b.add_transition(cur, t->pop, label, intern(t->dst, m.dst), t->push);
      }
    }
    if (fold_eps) continue;
    for (const WMove& m : wmoves) {
      if (!m.read.is_eps()) continue;
      // A W copy moves alone: silent, stack untouched for every top symbol.
      uint32_t nxt = intern(s, m.dst);
      for (uint32_t g = 0; g < a.stack.size(); ++g)
        b.add_transition(cur, g, ReadLabel::eps(), nxt, {g});
    }
  }
  if (reached_w)
    for (const auto& [key, id] : index) reached_w->insert(key.second);
  return b;
}

// The fragment of W^d induced by the jointly reached W-side states, as a
// plain NFA over the indexed alphabet.
Nfa product_fragment(const Alphabet& sigma, TupleSpace& space, uint32_t d,
                     const std::set<uint32_t>& reached) {
  Nfa p;
  std::vector<std::vector<Sym>> letter_map(d);
  std::vector<Sym> end_map(d);
  for (uint32_t j = 0; j < d; ++j) {
    std::string tag = "@" + std::to_string(j + 1);
    for (const auto& name : sigma.names())
      letter_map[j].push_back(p.alphabet.add(name + tag));
    end_map[j] = p.alphabet.add("$" + tag);
  }
  std::map<uint32_t, uint32_t> ids;
  for (uint32_t wid : reached)
    ids[wid] = p.add_state(space.name(wid), space.is_final(wid));
  p.initial = ids.at(space.initial());
  for (uint32_t wid : reached) {
    for (const WMove& m : space.moves(wid)) {
      auto it = ids.find(m.dst);
      if (it == ids.end()) continue;
      ReadLabel label = ReadLabel::eps();
      if (m.read.is_letter())
        label = ReadLabel::letter(letter_map[m.tape][m.read.sym]);
      else if (m.read.is_end())
        label = ReadLabel::letter(end_map[m.tape]);
      p.add_transition(ids.at(wid), label, it->second);
    }
  }
  return p;
}

}  // namespace

ContractionResult contract(const Tpda& a, const BoundedExpression& w) {
  if (!(a.alphabet == w.alphabet))
    fail(ErrorKind::AlphabetMismatch,
         "machine and bounded expression use different alphabets");
  ContractionResult out;
  out.w = build_w(w);
  TupleSpace space(out.w, a.heads);
  WSystem ws = wrap(space);
  std::set<uint32_t> reached;
  out.b = contract_core(a, ws, w.arity(), &reached, /*fold_eps=*/true);
  out.product = product_fragment(w.alphabet, space, a.heads, reached);
  return out;
}

Pda shuffle_pda(const Tpda& b) {
  Pda c;
  c.stack = b.stack;
  c.initial_stack = b.initial_stack;
  c.state_names = b.state_names;
  c.is_final = b.is_final;
  c.initial = b.initial;
  for (size_t i = 0; i < b.alphabet.size(); ++i)
    for (uint32_t j = 0; j < b.heads; ++j)
      c.alphabet.add(b.alphabet.name(static_cast<Sym>(i)) + "@" +
                     std::to_string(j + 1));
  for (const auto& t : b.transitions) {
    ReadLabel read = ReadLabel::eps();
    if (t.read.is_letter())
      read = ReadLabel::letter(
          static_cast<Sym>(t.read.sym * b.heads + b.head_of[t.src]));
    c.add_transition(t.src, t.pop, read, t.dst, t.push);
  }
  return c;
}

namespace {

// Ψ = ∃x_{ij} (Φ ∧ ⋀ x_{ij} = x_i): the grammar counts letter a_i per tape j
// separately; the per-segment counters x_i tie all tapes to one shared word.
PresburgerFormula assemble_psi(const Cfg& g, size_t n, size_t d,
                               const std::string& prefix) {
  PresburgerFormula phi = parikh_formula(g, prefix);
  if (phi.free_vars.size() != n * d)
    fail(ErrorKind::Internal, "pipeline grammar has unexpected terminals");
  std::vector<FormulaPtr> conjs;
  conjs.push_back(phi.root);
  for (size_t t = 0; t < phi.free_vars.size(); ++t) {
    size_t i = t / d;  // terminals are letter-major: t = i*d + j
    conjs.push_back(
        PFormula::atom_rel(PTerm::variable(phi.free_vars[t]), Rel::Eq,
                           PTerm::variable("x" + std::to_string(i + 1))));
  }
  FormulaPtr body = PFormula::conj(std::move(conjs));
  for (size_t t = phi.free_vars.size(); t-- > 0;)
    body = PFormula::exists(phi.free_vars[t], body);
  std::vector<std::string> frees;
  for (size_t i = 0; i < n; ++i) frees.push_back("x" + std::to_string(i + 1));
  return PresburgerFormula{std::move(body), std::move(frees)};
}

}  // namespace

PipelineArtifacts emptiness_pipeline(const Tpda& m, const BoundedExpression& w,
                                     const std::string& prefix) {
  PipelineArtifacts art;
  art.contraction = contract(m, w);
  art.c = shuffle_pda(art.contraction.b);
  art.g = cfg_inline_trivial(pda_to_cfg(art.c));
  art.psi = assemble_psi(art.g, w.arity(), m.heads, prefix);
  return art;
}

PresburgerFormula emptiness_formula(const Tpda& m,
                                    const BoundedExpression& w) {
  return emptiness_pipeline(m, w).psi;
}

PresburgerFormula family_emptiness_formula(const std::vector<Tpda>& machines,
                                           const BoundedExpression& w) {
  if (machines.empty())
    fail(ErrorKind::DimensionMismatch, "empty machine family");
  std::vector<FormulaPtr> parts;
  for (size_t i = 0; i < machines.size(); ++i) {
    PipelineArtifacts art = emptiness_pipeline(
        machines[i], w, "m" + std::to_string(i + 1) + ".");
    parts.push_back(art.psi.root);
  }
  std::vector<std::string> frees;
  for (size_t i = 0; i < w.arity(); ++i)
    frees.push_back("x" + std::to_string(i + 1));
  return PresburgerFormula{PFormula::conj(std::move(parts)), std::move(frees)};
}

LetterBoundedFamily::LetterBoundedFamily(const Tpda& a,
                                         const BoundedExpression& b)
    : a_(a), b_(b) {
  if (!b.letter_bounded())
    fail(ErrorKind::NotLetterBounded,
         "chain decomposition needs a letter-bounded expression");
  if (!(a.alphabet == b.alphabet))
    fail(ErrorKind::AlphabetMismatch,
         "machine and bounded expression use different alphabets");
  // Lexicographically least advance sequence: coordinate 0 first, n times
  // each; next_permutation then walks the multiset permutations in order.
  for (uint32_t j = 0; j < a.heads; ++j)
    advance_.insert(advance_.end(), b.arity(), j);
}

std::optional<ChainMember> LetterBoundedFamily::next() {
  if (exhausted_) return std::nullopt;
  ChainMember member;
  member.advance = advance_;
  ChainSpace space(b_, member.advance, a_.heads);
  member.b = contract_core(a_, wrap(space), b_.arity(), nullptr);
  exhausted_ = !std::next_permutation(advance_.begin(), advance_.end());
  return member;
}

namespace {

// Grid tuples are embedded in product state names as "...|[v1,...,vd])".
std::optional<std::vector<uint32_t>> parse_grid_suffix(const std::string& name,
                                                       size_t d) {
  if (name.size() < 4 || name.back() != ')') return std::nullopt;
  size_t close = name.size() - 2;
  if (name[close] != ']') return std::nullopt;
  size_t open = close;
  while (open > 0 && (std::isdigit(static_cast<unsigned char>(name[open - 1])) ||
                      name[open - 1] == ','))
    --open;
  if (open < 2 || name[open - 1] != '[' || name[open - 2] != '|')
    return std::nullopt;
  std::vector<uint32_t> vals;
  uint32_t cur = 0;
  bool any = false;
  for (size_t i = open; i < close; ++i) {
    if (name[i] == ',') {
      if (!any) return std::nullopt;
      vals.push_back(cur);
      cur = 0;
      any = false;
    } else {
      cur = cur * 10 + static_cast<uint32_t>(name[i] - '0');
      any = true;
    }
  }
  if (!any) return std::nullopt;
  vals.push_back(cur);
  if (vals.size() != d) return std::nullopt;
  return vals;
}

bool same_tpda(const Tpda& a, const Tpda& b) {
  if (a.heads != b.heads || a.alphabet.names() != b.alphabet.names() ||
      a.stack.names() != b.stack.names() || a.state_names != b.state_names ||
      a.head_of != b.head_of || a.initial != b.initial ||
      a.initial_stack != b.initial_stack || a.is_final != b.is_final)
    return false;
  auto key = [](const TpdaTransition& t) {
    return std::make_tuple(t.src, t.pop, static_cast<int>(t.read.kind),
                           t.read.sym, t.dst, t.push);
  };
  auto sorted = [&](const Tpda& m) {
    std::vector<std::tuple<uint32_t, uint32_t, int, Sym, uint32_t,
                           std::vector<uint32_t>>>
        ks;
    for (const auto& t : m.transitions) ks.push_back(key(t));
    std::sort(ks.begin(), ks.end());
    return ks;
  };
  return sorted(a) == sorted(b);
}

}  // namespace

bool letter_bounded_member(const Tpda& a, const BoundedExpression& b,
                           const Tpda& x) {
  if (!b.letter_bounded() || !(a.alphabet == b.alphabet)) return false;
  size_t n = b.arity();
  size_t d = a.heads;
  if (x.heads != a.heads) return false;
  // Recover the chain prefix realized in x: grid positions reached jointly
  // with the machine always form a prefix of the full chain.
  std::set<std::vector<uint32_t>> tuples;
  for (const auto& name : x.state_names) {
    auto g = parse_grid_suffix(name, d);
    if (!g) return false;
    tuples.insert(*g);
  }
  if (tuples.empty()) return false;
  std::vector<std::vector<uint32_t>> chain(tuples.begin(), tuples.end());
  std::sort(chain.begin(), chain.end(),
            [](const std::vector<uint32_t>& u, const std::vector<uint32_t>& v) {
              uint64_t su = 0, sv = 0;
              for (uint32_t c : u) su += c;
              for (uint32_t c : v) sv += c;
              return su != sv ? su < sv : u < v;
            });
  if (chain.front() != std::vector<uint32_t>(d, 1)) return false;
  std::vector<uint32_t> advance;
  std::vector<uint32_t> left(d, 0);  // advances still owed per coordinate
  for (size_t j = 0; j < d; ++j) left[j] = static_cast<uint32_t>(n);
  for (size_t t = 0; t + 1 < chain.size(); ++t) {
    int moved = -1;
    for (size_t j = 0; j < d; ++j) {
      if (chain[t + 1][j] == chain[t][j]) continue;
      if (chain[t + 1][j] != chain[t][j] + 1 || moved >= 0) return false;
      moved = static_cast<int>(j);
    }
    if (moved < 0) return false;
    if (left[moved] == 0) return false;
    --left[moved];
    advance.push_back(static_cast<uint32_t>(moved));
  }
  // Unreached suffix: any completion produces the same member; use the
  // ascending one.
  for (uint32_t j = 0; j < d; ++j)
    advance.insert(advance.end(), left[j], j);
  ChainSpace space(b, advance, static_cast<uint32_t>(d));
  Tpda rebuilt = contract_core(a, wrap(space), n, nullptr);
  return same_tpda(rebuilt, x);
}

namespace {

EmptinessVerdict solve_and_verify(const Tpda& m, const BoundedExpression& w,
                                  const PresburgerFormula& psi, uint64_t box) {
  SolveResult r = solve_box(psi, box, derived_inner_bound(psi, box));
  if (!r.found) return EmptinessVerdict::empty_within(box);
  Word word = expand(w, r.assignment);
  if (!accepts_shared(m, word))
    fail(ErrorKind::VerificationMismatch,
         "solver witness rejected by the membership oracle");
  return EmptinessVerdict::non_empty(r.assignment, std::move(word), true);
}

}  // namespace

DecisionRun run_decision(const Tpda& m, const BoundedExpression& w,
                         const DecisionConfig& config) {
  DecisionRun run;
  bool chain_route = false;
  if (config.letter_bounded_auto && w.letter_bounded()) {
    LetterBoundedFamily fam(m, w);
    std::vector<ChainMember> members;
    bool overflow = false;
    while (auto mem = fam.next()) {
      members.push_back(std::move(*mem));
      if (members.size() > config.chain_cap) {
        overflow = true;
        break;
      }
    }
    if (!overflow) {
      chain_route = true;
      run.chains_tried = members.size();
      std::vector<FormulaPtr> parts;
      for (size_t i = 0; i < members.size(); ++i) {
        Pda c = shuffle_pda(members[i].b);
        Cfg g = cfg_inline_trivial(pda_to_cfg(c));
        parts.push_back(assemble_psi(g, w.arity(), m.heads,
                                     "c" + std::to_string(i + 1) + ".")
                            .root);
      }
      std::vector<std::string> frees;
      for (size_t i = 0; i < w.arity(); ++i)
        frees.push_back("x" + std::to_string(i + 1));
      run.psi = PresburgerFormula{PFormula::disj(std::move(parts)),
                                  std::move(frees)};
    }
  }
  if (!chain_route) {
    run.artifacts = emptiness_pipeline(m, w);
    run.psi = run.artifacts->psi;
  }
  if (config.mode == DecisionConfig::Mode::ExportSmt) {
    run.smt = to_smtlib(run.psi, config.smt_logic);
    run.verdict = EmptinessVerdict::unknown();
    return run;
  }
  run.verdict = solve_and_verify(m, w, run.psi, config.box);
  return run;
}

EmptinessVerdict decide_emptiness(const Tpda& m, const BoundedExpression& w,
                                  const DecisionConfig& config) {
  return run_decision(m, w, config).verdict;
}

EmptinessVerdict verify_external_model(
    const Tpda& m, const BoundedExpression& w, bool sat,
    const std::map<std::string, uint64_t>& values) {
  if (!sat) return EmptinessVerdict::empty_externally();
  std::vector<uint64_t> k(w.arity(), 0);
  for (size_t i = 0; i < w.arity(); ++i) {
    auto it = values.find("x" + std::to_string(i + 1));
    if (it != values.end()) k[i] = it->second;
  }
  Word word = expand(w, k);
  if (!accepts_shared(m, word))
    fail(ErrorKind::VerificationMismatch,
         "external model rejected by the membership oracle");
  return EmptinessVerdict::non_empty(std::move(k), std::move(word), true);
}

}  // namespace mhb
