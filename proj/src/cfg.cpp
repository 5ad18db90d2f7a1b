#include "mhb/cfg.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mhb {

uint32_t Cfg::add_nonterminal(const std::string& name) {
  uint32_t id = static_cast<uint32_t>(nonterminals.size());
  nonterminals.push_back(name);
  return id;
}

void Cfg::add_production(uint32_t lhs, std::vector<CfgSym> rhs) {
  productions.push_back({lhs, std::move(rhs)});
}

size_t Cfg::size() const {
  size_t total = nonterminals.size();
  for (const auto& p : productions) total += 1 + p.rhs.size();
  return total;
}

CfgAnalysis cfg_analyze(const Cfg& g) {
  CfgAnalysis a;
  a.generating.assign(g.nonterminals.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions) {
      if (a.generating[p.lhs]) continue;
      bool all = true;
      for (const auto& s : p.rhs)
        if (!s.terminal && !a.generating[s.id]) { all = false; break; }
      if (all) { a.generating[p.lhs] = true; changed = true; }
    }
  }
  a.reachable.assign(g.nonterminals.size(), false);
  if (g.start < g.nonterminals.size() && a.generating[g.start]) {
    std::vector<uint32_t> stack{g.start};
    a.reachable[g.start] = true;
    while (!stack.empty()) {
      uint32_t n = stack.back();
      stack.pop_back();
      for (const auto& p : g.productions) {
        if (p.lhs != n) continue;
        bool all = true;
        for (const auto& s : p.rhs)
          if (!s.terminal && !a.generating[s.id]) { all = false; break; }
        if (!all) continue;
        for (const auto& s : p.rhs)
          if (!s.terminal && !a.reachable[s.id]) {
            a.reachable[s.id] = true;
            stack.push_back(s.id);
          }
      }
    }
  }
  a.useful_production.assign(g.productions.size(), false);
  for (size_t i = 0; i < g.productions.size(); ++i) {
    const auto& p = g.productions[i];
    if (!a.reachable[p.lhs]) continue;
    bool all = true;
    for (const auto& s : p.rhs)
      if (!s.terminal && !(a.generating[s.id] && a.reachable[s.id]))
        { all = false; break; }
    a.useful_production[i] = all;
  }
  a.empty = !(g.start < g.nonterminals.size() && a.generating[g.start]);
  return a;
}

Cfg cfg_trim(const Cfg& g) {
  CfgAnalysis a = cfg_analyze(g);
  Cfg out;
  out.terminals = g.terminals;
  std::vector<uint32_t> remap(g.nonterminals.size(), UINT32_MAX);
  auto keep = [&](uint32_t n) {
    return a.generating[n] && a.reachable[n];
  };
  // The start symbol survives even when the language is empty.
  remap[g.start] = out.add_nonterminal(g.nonterminals[g.start]);
  for (uint32_t n = 0; n < g.nonterminals.size(); ++n)
    if (n != g.start && keep(n)) remap[n] = out.add_nonterminal(g.nonterminals[n]);
  out.start = remap[g.start];
  for (size_t i = 0; i < g.productions.size(); ++i) {
    if (!a.useful_production[i]) continue;
    const auto& p = g.productions[i];
    std::vector<CfgSym> rhs;
    for (const auto& s : p.rhs)
      rhs.push_back(s.terminal ? s : CfgSym::nonterm(remap[s.id]));
    out.add_production(remap[p.lhs], std::move(rhs));
  }
  return out;
}

bool cfg_is_trimmed(const Cfg& g) {
  CfgAnalysis a = cfg_analyze(g);
  if (a.empty) return g.productions.empty() && g.nonterminals.size() == 1;
  for (uint32_t n = 0; n < g.nonterminals.size(); ++n)
    if (!(a.generating[n] && a.reachable[n])) return false;
  for (bool u : a.useful_production)
    if (!u) return false;
  return true;
}

Cfg cfg_inline_trivial(const Cfg& g) {
  std::vector<CfgProduction> prods = g.productions;
  std::vector<bool> alive(prods.size(), true);
  // Production count and exact reference count per nonterminal, plus a lazily
  // cleaned list of productions that may still mention it.
  std::vector<uint32_t> nprods(g.nonterminals.size(), 0);
  std::vector<int32_t> sole(g.nonterminals.size(), -1);
  std::vector<uint64_t> refs(g.nonterminals.size(), 0);
  std::vector<std::vector<uint32_t>> mentions(g.nonterminals.size());
  for (uint32_t i = 0; i < prods.size(); ++i) {
    ++nprods[prods[i].lhs];
    sole[prods[i].lhs] = static_cast<int32_t>(i);
    for (const CfgSym& s : prods[i].rhs)
      if (!s.terminal) {
        ++refs[s.id];
        mentions[s.id].push_back(i);
      }
  }

  std::vector<bool> gone(g.nonterminals.size(), false);
  std::vector<uint32_t> work;
  auto eligible = [&](uint32_t n) {
    if (n == g.start || gone[n] || nprods[n] != 1) return false;
    const auto& body = prods[static_cast<uint32_t>(sole[n])].rhs;
    for (const CfgSym& s : body)
      if (!s.terminal && s.id == n) return false;  // self-recursive
    return body.size() <= 1 || refs[n] <= 1;
  };
  for (uint32_t n = 0; n < g.nonterminals.size(); ++n)
    if (eligible(n)) work.push_back(n);

  while (!work.empty()) {
    uint32_t n = work.back();
    work.pop_back();
    if (!eligible(n)) continue;
    uint32_t own = static_cast<uint32_t>(sole[n]);
    std::vector<CfgSym> body = prods[own].rhs;
    for (uint32_t pi : mentions[n]) {
      if (!alive[pi] || pi == own) continue;
      std::vector<CfgSym> rhs;
      rhs.reserve(prods[pi].rhs.size());
      for (const CfgSym& s : prods[pi].rhs) {
        if (s.terminal || s.id != n) {
          rhs.push_back(s);
          continue;
        }
        for (const CfgSym& b : body) {
          rhs.push_back(b);
          if (!b.terminal) {
            ++refs[b.id];
            mentions[b.id].push_back(pi);
          }
        }
        --refs[n];
      }
      prods[pi].rhs = std::move(rhs);
      // An empty body shortens the host, which may make its own side
      // inlinable now.
      if (eligible(prods[pi].lhs)) work.push_back(prods[pi].lhs);
    }
    alive[own] = false;
    gone[n] = true;
    for (const CfgSym& s : body)
      if (!s.terminal) {
        --refs[s.id];
        if (eligible(s.id)) work.push_back(s.id);
      }
  }

  Cfg out;
  out.terminals = g.terminals;
  std::vector<uint32_t> remap(g.nonterminals.size(), UINT32_MAX);
  remap[g.start] = out.add_nonterminal(g.nonterminals[g.start]);
  for (uint32_t n = 0; n < g.nonterminals.size(); ++n)
    if (n != g.start && !gone[n])
      remap[n] = out.add_nonterminal(g.nonterminals[n]);
  out.start = remap[g.start];
  for (uint32_t i = 0; i < prods.size(); ++i) {
    if (!alive[i]) continue;
    std::vector<CfgSym> rhs;
    rhs.reserve(prods[i].rhs.size());
    for (const CfgSym& s : prods[i].rhs)
      rhs.push_back(s.terminal ? s : CfgSym::nonterm(remap[s.id]));
    out.add_production(remap[prods[i].lhs], std::move(rhs));
  }
  return out;
}

namespace {

// Internal CNF-style copy used by CYK: rules A -> B C and A -> a, plus a
// nullable flag for the start symbol.
struct CnfGrammar {
  size_t nt_count = 0;
  uint32_t start = 0;
  bool start_nullable = false;
  std::vector<std::array<uint32_t, 3>> binary;          // lhs, b, c
  std::vector<std::pair<uint32_t, uint32_t>> lexical;   // lhs, terminal
};

CnfGrammar to_cnf(const Cfg& g) {
  // Work list of rules with symbolic RHS; nonterminal ids extend g's.
  struct Rule { uint32_t lhs; std::vector<CfgSym> rhs; };
  std::vector<Rule> rules;
  uint32_t next_nt = static_cast<uint32_t>(g.nonterminals.size());
  uint32_t start = next_nt++;  // fresh start avoids start-on-rhs special cases
  rules.push_back({start, {CfgSym::nonterm(g.start)}});
  for (const auto& p : g.productions) rules.push_back({p.lhs, p.rhs});

  // TERM: terminals inside long rules become fresh nonterminals.
  std::map<uint32_t, uint32_t> term_nt;
  for (auto& r : rules) {
    if (r.rhs.size() < 2) continue;
    for (auto& s : r.rhs) {
      if (!s.terminal) continue;
      auto it = term_nt.find(s.id);
      if (it == term_nt.end())
        it = term_nt.emplace(s.id, next_nt++).first;
      s = CfgSym::nonterm(it->second);
    }
  }
  for (const auto& [t, n] : term_nt) rules.push_back({n, {CfgSym::term(t)}});

  // BIN: long rules become chains of binary rules (appended rules are
  // revisited by the loop until everything is binary).
  for (size_t i = 0; i < rules.size(); ++i) {
    while (rules[i].rhs.size() > 2) {
      uint32_t helper = next_nt++;
      std::vector<CfgSym> tail(rules[i].rhs.begin() + 1, rules[i].rhs.end());
      rules[i].rhs = {rules[i].rhs[0], CfgSym::nonterm(helper)};
      rules.push_back({helper, std::move(tail)});
    }
  }

  // DEL: nullable nonterminals, then epsilon-free variants.
  std::vector<bool> nullable(next_nt, false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules) {
      if (nullable[r.lhs]) continue;
      bool all = true;
      for (const auto& s : r.rhs)
        if (s.terminal || !nullable[s.id]) { all = false; break; }
      if (all) { nullable[r.lhs] = true; changed = true; }
    }
  }
  std::vector<Rule> no_eps;
  for (const auto& r : rules) {
    if (r.rhs.empty()) continue;
    no_eps.push_back(r);
    if (r.rhs.size() == 2) {
      if (!r.rhs[0].terminal && nullable[r.rhs[0].id])
        no_eps.push_back({r.lhs, {r.rhs[1]}});
      if (!r.rhs[1].terminal && nullable[r.rhs[1].id])
        no_eps.push_back({r.lhs, {r.rhs[0]}});
    }
  }

  // UNIT: closure over unit rules A -> B.
  std::vector<std::vector<uint32_t>> unit_next(next_nt);
  for (const auto& r : no_eps)
    if (r.rhs.size() == 1 && !r.rhs[0].terminal)
      unit_next[r.lhs].push_back(r.rhs[0].id);
  std::vector<std::vector<bool>> unit_reach(next_nt,
                                            std::vector<bool>(next_nt, false));
  for (uint32_t n = 0; n < next_nt; ++n) {
    std::vector<uint32_t> stack{n};
    unit_reach[n][n] = true;
    while (!stack.empty()) {
      uint32_t m = stack.back();
      stack.pop_back();
      for (uint32_t k : unit_next[m])
        if (!unit_reach[n][k]) { unit_reach[n][k] = true; stack.push_back(k); }
    }
  }

  CnfGrammar cnf;
  cnf.nt_count = next_nt;
  cnf.start = start;
  cnf.start_nullable = nullable[start];
  for (uint32_t n = 0; n < next_nt; ++n) {
    for (const auto& r : no_eps) {
      if (!unit_reach[n][r.lhs]) continue;
      if (r.rhs.size() == 2 && !r.rhs[0].terminal && !r.rhs[1].terminal)
        cnf.binary.push_back({n, r.rhs[0].id, r.rhs[1].id});
      else if (r.rhs.size() == 1 && r.rhs[0].terminal)
        cnf.lexical.push_back({n, r.rhs[0].id});
    }
  }
  return cnf;
}

}  // namespace

bool cfg_membership(const Cfg& g, const Word& word) {
  CnfGrammar cnf = to_cnf(g);
  if (word.empty()) return cnf.start_nullable;
  size_t n = word.size();
  auto cell = [&](size_t i, size_t len) -> size_t { return i * (n + 1) + len; };
  std::vector<std::vector<bool>> table(cell(n, 0) + n + 1,
                                       std::vector<bool>(cnf.nt_count, false));
  for (size_t i = 0; i < n; ++i)
    for (const auto& [lhs, t] : cnf.lexical)
      if (t == word[i]) table[cell(i, 1)][lhs] = true;
  for (size_t len = 2; len <= n; ++len)
    for (size_t i = 0; i + len <= n; ++i)
      for (size_t split = 1; split < len; ++split) {
        const auto& left = table[cell(i, split)];
        const auto& right = table[cell(i + split, len - split)];
        auto& here = table[cell(i, len)];
        for (const auto& [lhs, b, c] : cnf.binary)
          if (!here[lhs] && left[b] && right[c]) here[lhs] = true;
      }
  return table[cell(0, n)][cnf.start];
}

namespace {

using Vec = std::vector<uint64_t>;

Vec saturating_add(const Vec& a, const Vec& b, uint64_t cap) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i] + b[i], cap);
  return out;
}

}  // namespace

std::vector<std::vector<uint64_t>> cfg_parikh_box(const Cfg& g, uint64_t box) {
  uint64_t cap = box + 1;
  size_t k = g.terminals.size();
  std::vector<std::set<Vec>> sets(g.nonterminals.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions) {
      Vec base(k, 0);
      std::vector<uint32_t> nts;
      for (const auto& s : p.rhs) {
        if (s.terminal)
          base[s.id] = std::min(base[s.id] + 1, cap);
        else
          nts.push_back(s.id);
      }
      std::set<Vec> partial{base};
      for (uint32_t n : nts) {
        std::set<Vec> next;
        for (const auto& u : partial)
          for (const auto& v : sets[n]) next.insert(saturating_add(u, v, cap));
        partial = std::move(next);
        if (partial.empty()) break;
      }
      for (auto& v : partial)
        if (sets[p.lhs].insert(v).second) changed = true;
    }
  }
  std::vector<Vec> out;
  if (g.start < sets.size())
    for (const auto& v : sets[g.start])
      if (std::all_of(v.begin(), v.end(), [&](uint64_t c) { return c <= box; }))
        out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

std::set<Word> cfg_language_upto(const Cfg& g, size_t max_len) {
  std::vector<std::set<Word>> sets(g.nonterminals.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions) {
      std::set<Word> partial{Word{}};
      for (const auto& s : p.rhs) {
        std::set<Word> next;
        if (s.terminal) {
          for (const auto& w : partial)
            if (w.size() + 1 <= max_len) {
              Word v = w;
              v.push_back(s.id);
              next.insert(std::move(v));
            }
        } else {
          for (const auto& w : partial)
            for (const auto& u : sets[s.id])
              if (w.size() + u.size() <= max_len) {
                Word v = w;
                v.insert(v.end(), u.begin(), u.end());
                next.insert(std::move(v));
              }
        }
        partial = std::move(next);
        if (partial.empty()) break;
      }
      for (const auto& w : partial)
        if (sets[p.lhs].insert(w).second) changed = true;
    }
  }
  return g.start < sets.size() ? sets[g.start] : std::set<Word>{};
}

Cfg parse_cfg(const std::string& text) {
  struct RawRule { std::string lhs; std::vector<std::vector<std::string>> alts; };
  std::vector<RawRule> raw;
  std::istringstream lines(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    std::istringstream tokens(line);
    std::vector<std::string> toks;
    std::string tok;
    while (tokens >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks.size() < 2 || toks[1] != "->")
      fail(ErrorKind::MalformedGrammar,
           "line " + std::to_string(lineno) + ": expected '<lhs> -> ...'");
    RawRule rule;
    rule.lhs = toks[0];
    rule.alts.emplace_back();
    for (size_t i = 2; i < toks.size(); ++i) {
      if (toks[i] == "|")
        rule.alts.emplace_back();
      else
        rule.alts.back().push_back(toks[i]);
    }
    raw.push_back(std::move(rule));
  }
  if (raw.empty()) fail(ErrorKind::MalformedGrammar, "no rules");

  Cfg g;
  std::unordered_map<std::string, uint32_t> nt_index;
  for (const auto& r : raw)
    if (!nt_index.count(r.lhs))
      nt_index.emplace(r.lhs, g.add_nonterminal(r.lhs));
  g.start = nt_index.at(raw.front().lhs);
  for (const auto& r : raw) {
    for (const auto& alt : r.alts) {
      std::vector<CfgSym> rhs;
      if (!(alt.size() == 1 && alt[0] == "eps")) {
        for (const auto& tok : alt) {
          if (tok == "eps")
            fail(ErrorKind::MalformedGrammar, "'eps' mixed with symbols");
          auto it = nt_index.find(tok);
          if (it != nt_index.end())
            rhs.push_back(CfgSym::nonterm(it->second));
          else
            rhs.push_back(CfgSym::term(g.terminals.add(tok)));
        }
      }
      g.add_production(nt_index.at(r.lhs), std::move(rhs));
    }
  }
  return g;
}

std::string serialize_cfg(const Cfg& g) {
  std::ostringstream out;
  // Start symbol's rules come first so that parsing back keeps the start.
  std::vector<uint32_t> order;
  order.push_back(g.start);
  for (uint32_t n = 0; n < g.nonterminals.size(); ++n)
    if (n != g.start) order.push_back(n);
  for (uint32_t n : order) {
    bool any = false;
    for (const auto& p : g.productions) {
      if (p.lhs != n) continue;
      out << g.nonterminals[n] << " ->";
      if (p.rhs.empty()) {
        out << " eps";
      } else {
        for (const auto& s : p.rhs)
          out << ' ' << (s.terminal ? g.terminals.name(s.id) : g.nonterminals[s.id]);
      }
      out << '\n';
      any = true;
    }
    if (!any && n == g.start) out << g.nonterminals[n] << " -> " << g.nonterminals[n] << '\n';
  }
  return out.str();
}

}  // namespace mhb
